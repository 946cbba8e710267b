#pragma once

#include <string>
#include <vector>

namespace seqa {

// Weighted contingency table between two categorizations of the same cases.
// Cells keep both the weight sum and the sum of squared weights so that
// pair counts generalize exactly: a group of total weight W with squared
// sum Q contains (W^2 - Q) / 2 within-pairs.
class ContingencyTable {
public:
    ContingencyTable(const std::vector<int>& x, const std::vector<int>& y,
                     const std::vector<double>& weights);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return s_; }
    double cell(std::size_t i, std::size_t j) const { return n_[i * s_ + j]; }
    double cell_sq(std::size_t i, std::size_t j) const { return q_[i * s_ + j]; }
    double row_sum(std::size_t i) const { return a_[i]; }
    double col_sum(std::size_t j) const { return b_[j]; }
    double total() const { return total_; }
    double total_sq() const { return total_sq_; }

    // True when the two categorizations induce the same partition.
    bool identical_partitions() const;

private:
    std::size_t r_ = 0, s_ = 0;
    std::vector<double> n_, q_;
    std::vector<double> a_, b_;
    double total_ = 0.0, total_sq_ = 0.0;
};

// Maps arbitrary labels to 0-based indices in first-appearance order.
std::vector<int> encode_labels(const std::vector<std::string>& labels);

ContingencyTable contingency(const std::vector<int>& x, const std::vector<int>& y,
                             const std::vector<double>& weights);

struct PairCounts {
    double n11 = 0.0; // same group in both
    double n10 = 0.0; // different in X, same in Y
    double n01 = 0.0; // same in X, different in Y
    double n00 = 0.0; // different in both
};

PairCounts pair_counts(const ContingencyTable& ct);

// Adjusted Rand index from pair counts. A vanishing denominator means both
// sides are single-cluster partitions (score 1) or carry no pair signal
// (score 0).
double ari(const ContingencyTable& ct);

// Adjusted mutual information under the permutation-model expected MI.
// The expectation needs integer group sizes; non-integer weighted counts
// are rounded to the nearest integers (set `rounded` to detect this) unless
// `require_exact` is set, in which case they are an error.
double ami(const ContingencyTable& ct, bool require_exact = false, bool* rounded = nullptr);

// Fowlkes-Mallows score; 0 when no pair is co-clustered in both.
double fms(const ContingencyTable& ct);

} // namespace seqa
