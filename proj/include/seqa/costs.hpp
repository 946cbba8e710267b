#pragma once

#include "seqa/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace seqa {

enum class RateDenominator {
    Successor, // occurrences of A that have a position at lag q in the same sequence
    All        // every occurrence of A
};

// Lag-q transition rates p(A -> B) estimated from a dataset, optionally
// weighted by case weights. Rows of never-observed antecedents are zero.
class TransitionMatrix {
public:
    TransitionMatrix(EventAlphabet alphabet, int lag);

    const EventAlphabet& alphabet() const { return alphabet_; }
    int lag() const { return lag_; }
    std::size_t size() const { return alphabet_.size(); }

    double rate(int a, int b) const { return p_[idx(a, b)]; }
    double pair_count(int a, int b) const { return n_ab_[idx(a, b)]; }
    double antecedent_count(int a) const { return n_a_[static_cast<std::size_t>(a)]; }
    bool all_zero() const { return all_zero_; }

    // Column sum over antecedents: sum_F p(C at lag | F).
    double successor_mass(int c) const;

private:
    friend TransitionMatrix transition_rates(const SequenceDataset&, int, bool, RateDenominator);
    std::size_t idx(int a, int b) const {
        return static_cast<std::size_t>(a) * alphabet_.size() + static_cast<std::size_t>(b);
    }
    EventAlphabet alphabet_;
    int lag_;
    std::vector<double> p_;
    std::vector<double> n_ab_;
    std::vector<double> n_a_;
    bool all_zero_ = false;
};

TransitionMatrix transition_rates(const SequenceDataset& ds, int lag, bool weighted = true,
                                  RateDenominator denominator = RateDenominator::Successor);

// Symmetric substitution-cost matrix with zero diagonal.
class SubstitutionMatrix {
public:
    SubstitutionMatrix() = default;
    SubstitutionMatrix(EventAlphabet alphabet, std::vector<double> cost);

    const EventAlphabet& alphabet() const { return alphabet_; }
    std::size_t size() const { return alphabet_.size(); }
    double cost(int a, int b) const {
        return cost_[static_cast<std::size_t>(a) * alphabet_.size() + static_cast<std::size_t>(b)];
    }
    double gamma_max() const { return gamma_max_; }
    const std::vector<double>& values() const { return cost_; }

    std::string to_csv() const;
    static SubstitutionMatrix from_csv(const std::string& text, const std::string& origin = "<string>");
    void save(const std::string& path) const;
    static SubstitutionMatrix load(const std::string& path);

private:
    EventAlphabet alphabet_;
    std::vector<double> cost_;
    double gamma_max_ = 0.0;
};

struct IndelModel {
    enum class Kind { Constant, Localized };
    Kind kind = Kind::Constant;
    double c = 1.0;  // constant cost
    double e = 0.0;  // weight on the maximum substitution cost
    double g = 0.0;  // weight on the mean cost to the adjacent elements

    static IndelModel constant(double cost);
    // Requires 2e + g >= 1, keeping a substitution never more expensive
    // than the indel pair that could replace it.
    static IndelModel localized(double e, double g);
};

// A named dissimilarity cost scheme: substitution matrix + indel model.
// Preset names: OMlev, OMtr, OMsf, LOMtr, LOMsf, custom.
struct CostScheme {
    std::string name = "custom";
    SubstitutionMatrix substitution;
    IndelModel indel;
    int lag = 1;                 // lag used when the matrix was data-derived
    bool normalize_max2 = false; // shared-future rescaling flag, for provenance

    // Position-wise indel costs for one sequence: constant models give a flat
    // vector, localized models apply the neighbor rule with the sequence-end
    // fallback (a missing neighbor counts as gamma_max).
    std::vector<double> indel_costs(const std::vector<int>& events) const;
    double localized_indel_cost(int inserted, std::optional<int> left, std::optional<int> right) const;
};

CostScheme constant_costs(const EventAlphabet& alphabet, double sub_cost, double indel_cost);

SubstitutionMatrix trate_substitution(const TransitionMatrix& tm);

SubstitutionMatrix shared_future_substitution(const SequenceDataset& ds, int lag = 1,
                                              bool weighted = true, bool normalize_max2 = true,
                                              RateDenominator denominator = RateDenominator::Successor);
SubstitutionMatrix shared_future_substitution(const TransitionMatrix& tm, bool normalize_max2 = true);

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

ValidationReport validate_cost_scheme(const CostScheme& scheme);

// Table-4 preset builder. OMlev ignores the dataset; data-driven presets
// derive their substitution matrix from `ds`.
struct CostOptions {
    int lag = 1;
    bool weighted = true;
    RateDenominator denominator = RateDenominator::Successor;
    bool normalize_max2 = true; // shared-future only
    double e = 0.1;             // localized presets
    double g = 0.8;
};

CostScheme make_cost_scheme(const std::string& measure, const SequenceDataset& ds,
                            const CostOptions& options = {});

bool is_localized_measure(const std::string& measure);

} // namespace seqa
