#include "seqa/costs.hpp"

#include "seqa/csv.hpp"
#include "seqa/error.hpp"
#include "seqa/format.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace seqa {

TransitionMatrix::TransitionMatrix(EventAlphabet alphabet, int lag)
    : alphabet_(std::move(alphabet)), lag_(lag),
      p_(alphabet_.size() * alphabet_.size(), 0.0),
      n_ab_(alphabet_.size() * alphabet_.size(), 0.0),
      n_a_(alphabet_.size(), 0.0) {}

double TransitionMatrix::successor_mass(int c) const {
    double s = 0.0;
    for (std::size_t f = 0; f < alphabet_.size(); ++f)
        s += p_[f * alphabet_.size() + static_cast<std::size_t>(c)];
    return s;
}

TransitionMatrix transition_rates(const SequenceDataset& ds, int lag, bool weighted,
                                  RateDenominator denominator) {
    if (ds.size() == 0) throw DataError("empty dataset");
    if (lag < 1) throw ConfigError("lag must be >= 1");
    TransitionMatrix tm(ds.alphabet(), lag);
    const std::size_t k = tm.size();
    const std::size_t q = static_cast<std::size_t>(lag);
    std::vector<double> denom(k, 0.0);

    bool any_pair = false;
    for (const auto& s : ds.sequences()) {
        const double w = weighted ? s.weight : 1.0;
        const std::size_t len = s.events.size();
        for (std::size_t p = 0; p < len; ++p) {
            const auto a = static_cast<std::size_t>(s.events[p]);
            if (p + q < len) {
                const auto b = static_cast<std::size_t>(s.events[p + q]);
                tm.n_ab_[a * k + b] += w;
                any_pair = true;
                if (denominator == RateDenominator::Successor) denom[a] += w;
            }
            if (denominator == RateDenominator::All) denom[a] += w;
        }
    }
    tm.n_a_ = denom;
    for (std::size_t a = 0; a < k; ++a) {
        if (denom[a] <= 0.0) continue;
        for (std::size_t b = 0; b < k; ++b)
            tm.p_[a * k + b] = tm.n_ab_[a * k + b] / denom[a];
    }
    tm.all_zero_ = !any_pair; // lag exceeds every sequence length
    return tm;
}

SubstitutionMatrix::SubstitutionMatrix(EventAlphabet alphabet, std::vector<double> cost)
    : alphabet_(std::move(alphabet)), cost_(std::move(cost)) {
    const std::size_t k = alphabet_.size();
    if (cost_.size() != k * k) throw DataError("substitution matrix size mismatch");
    for (std::size_t a = 0; a < k; ++a) {
        if (cost_[a * k + a] != 0.0) throw DataError("substitution matrix diagonal must be zero");
        for (std::size_t b = 0; b < k; ++b) {
            if (cost_[a * k + b] < 0.0) throw DataError("negative substitution cost");
            if (cost_[a * k + b] != cost_[b * k + a])
                throw DataError("asymmetric substitution cost between " + alphabet_.code(static_cast<int>(a)) +
                                " and " + alphabet_.code(static_cast<int>(b)));
            gamma_max_ = std::max(gamma_max_, cost_[a * k + b]);
        }
    }
}

std::string SubstitutionMatrix::to_csv() const {
    const std::size_t k = alphabet_.size();
    std::vector<std::string> header = {""};
    for (const auto& c : alphabet_.codes()) header.push_back(c);
    std::string out = csv::join_record(header);
    out.push_back('\n');
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<std::string> row = {alphabet_.code(static_cast<int>(a))};
        for (std::size_t b = 0; b < k; ++b) row.push_back(format_g17(cost_[a * k + b]));
        out += csv::join_record(row);
        out.push_back('\n');
    }
    return out;
}

SubstitutionMatrix SubstitutionMatrix::from_csv(const std::string& text, const std::string& origin) {
    const csv::Table t = csv::read_string(text, origin);
    if (t.header.size() < 2 || !t.header[0].empty())
        throw DataError(origin + ": substitution matrix header must start with an empty cell");
    EventAlphabet alphabet;
    for (std::size_t c = 1; c < t.header.size(); ++c) alphabet.add(t.header[c]);
    const std::size_t k = alphabet.size();
    if (t.rows.size() != k) throw DataError(origin + ": expected " + std::to_string(k) + " rows");
    std::vector<double> cost(k * k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        const auto& row = t.rows[r];
        if (row.size() != k + 1) throw DataError(origin + ": row width mismatch");
        if (row[0] != alphabet.code(static_cast<int>(r)))
            throw DataError(origin + ": row label '" + row[0] + "' does not match column order");
        for (std::size_t b = 0; b < k; ++b)
            cost[r * k + b] = parse_double(row[b + 1], origin + ": cost");
    }
    return SubstitutionMatrix(std::move(alphabet), std::move(cost));
}

void SubstitutionMatrix::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    out << to_csv();
    if (!out) throw DataError("write failed: " + path);
}

SubstitutionMatrix SubstitutionMatrix::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_csv(ss.str(), path);
}

IndelModel IndelModel::constant(double cost) {
    if (!(cost > 0)) throw ConfigError("constant indel cost must be positive");
    IndelModel m;
    m.kind = Kind::Constant;
    m.c = cost;
    return m;
}

IndelModel IndelModel::localized(double e, double g) {
    if (e < 0 || g < 0) throw ConfigError("localized indel parameters must be nonnegative");
    if (2 * e + g < 1)
        throw ConfigError("localized indel parameters must satisfy 2e + g >= 1 (got e=" +
                          format_g17(e) + ", g=" + format_g17(g) + ")");
    IndelModel m;
    m.kind = Kind::Localized;
    m.e = e;
    m.g = g;
    return m;
}

double CostScheme::localized_indel_cost(int inserted, std::optional<int> left,
                                        std::optional<int> right) const {
    if (indel.kind != IndelModel::Kind::Localized)
        throw ConfigError("localized indel cost requested on a constant-indel scheme");
    const double gmax = substitution.gamma_max();
    const double gl = left ? substitution.cost(*left, inserted) : gmax;
    const double gr = right ? substitution.cost(*right, inserted) : gmax;
    return indel.e * gmax + indel.g * (gl + gr) / 2.0;
}

std::vector<double> CostScheme::indel_costs(const std::vector<int>& events) const {
    std::vector<double> out(events.size());
    if (indel.kind == IndelModel::Kind::Constant) {
        std::fill(out.begin(), out.end(), indel.c);
        return out;
    }
    for (std::size_t i = 0; i < events.size(); ++i) {
        std::optional<int> left, right;
        if (i > 0) left = events[i - 1];
        if (i + 1 < events.size()) right = events[i + 1];
        out[i] = localized_indel_cost(events[i], left, right);
    }
    return out;
}

CostScheme constant_costs(const EventAlphabet& alphabet, double sub_cost, double indel_cost) {
    if (!(sub_cost > 0)) throw ConfigError("substitution cost must be positive");
    const std::size_t k = alphabet.size();
    std::vector<double> cost(k * k, sub_cost);
    for (std::size_t a = 0; a < k; ++a) cost[a * k + a] = 0.0;
    CostScheme s;
    s.name = "custom";
    s.substitution = SubstitutionMatrix(alphabet, std::move(cost));
    s.indel = IndelModel::constant(indel_cost);
    return s;
}

SubstitutionMatrix trate_substitution(const TransitionMatrix& tm) {
    const std::size_t k = tm.size();
    std::vector<double> cost(k * k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            const double c =
                2.0 - tm.rate(static_cast<int>(a), static_cast<int>(b)) - tm.rate(static_cast<int>(b), static_cast<int>(a));
            cost[a * k + b] = c;
            cost[b * k + a] = c;
        }
    }
    // diagonal stays 0: substituting an element for itself is a no-op
    return SubstitutionMatrix(tm.alphabet(), std::move(cost));
}

SubstitutionMatrix shared_future_substitution(const TransitionMatrix& tm, bool normalize_max2) {
    const std::size_t k = tm.size();
    std::vector<double> mass(k);
    for (std::size_t c = 0; c < k; ++c) mass[c] = tm.successor_mass(static_cast<int>(c));

    std::vector<double> cost(k * k, 0.0);
    double max_off = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            double v = 0.0;
            for (std::size_t c = 0; c < k; ++c) {
                if (mass[c] <= 0.0) continue;
                const double diff = tm.rate(static_cast<int>(a), static_cast<int>(c)) -
                                    tm.rate(static_cast<int>(b), static_cast<int>(c));
                v += diff * diff / mass[c];
            }
            cost[a * k + b] = v;
            cost[b * k + a] = v;
            max_off = std::max(max_off, v);
        }
    }
    if (normalize_max2 && max_off > 0.0) {
        const double scale = 2.0 / max_off;
        for (auto& v : cost) v *= scale;
    }
    return SubstitutionMatrix(tm.alphabet(), std::move(cost));
}

SubstitutionMatrix shared_future_substitution(const SequenceDataset& ds, int lag, bool weighted,
                                              bool normalize_max2, RateDenominator denominator) {
    return shared_future_substitution(transition_rates(ds, lag, weighted, denominator), normalize_max2);
}

ValidationReport validate_cost_scheme(const CostScheme& scheme) {
    ValidationReport rep;
    auto fail = [&rep](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    const auto& m = scheme.substitution;
    const std::size_t k = m.size();
    double max_seen = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        if (m.cost(static_cast<int>(a), static_cast<int>(a)) != 0.0)
            fail("nonzero diagonal at " + m.alphabet().code(static_cast<int>(a)));
        for (std::size_t b = 0; b < k; ++b) {
            const double c = m.cost(static_cast<int>(a), static_cast<int>(b));
            if (c < 0) fail("negative cost at (" + std::to_string(a) + "," + std::to_string(b) + ")");
            if (c != m.cost(static_cast<int>(b), static_cast<int>(a)))
                fail("asymmetric cost between " + m.alphabet().code(static_cast<int>(a)) + " and " +
                     m.alphabet().code(static_cast<int>(b)));
            max_seen = std::max(max_seen, c);
        }
    }
    if (max_seen != m.gamma_max()) fail("gamma_max inconsistent with matrix entries");
    if (scheme.indel.kind == IndelModel::Kind::Constant) {
        if (!(scheme.indel.c > 0)) fail("constant indel cost must be positive");
    } else {
        if (scheme.indel.e < 0 || scheme.indel.g < 0) fail("negative localized indel parameter");
        if (2 * scheme.indel.e + scheme.indel.g < 1) fail("2e + g >= 1 violated");
    }
    return rep;
}

bool is_localized_measure(const std::string& measure) {
    return measure == "LOMtr" || measure == "LOMsf";
}

CostScheme make_cost_scheme(const std::string& measure, const SequenceDataset& ds,
                            const CostOptions& options) {
    CostScheme s;
    s.name = measure;
    s.lag = options.lag;
    if (measure == "OMlev") {
        s.substitution = constant_costs(ds.alphabet(), 2.0, 1.0).substitution;
        s.indel = IndelModel::constant(1.0);
        return s;
    }
    if (measure == "OMtr" || measure == "LOMtr") {
        s.substitution = trate_substitution(transition_rates(ds, options.lag, options.weighted,
                                                             options.denominator));
    } else if (measure == "OMsf" || measure == "LOMsf") {
        s.substitution = shared_future_substitution(ds, options.lag, options.weighted,
                                                    options.normalize_max2, options.denominator);
        s.normalize_max2 = options.normalize_max2;
    } else {
        throw ConfigError("unknown measure '" + measure +
                          "' (expected OMlev, OMtr, OMsf, LOMtr or LOMsf)");
    }
    s.indel = is_localized_measure(measure) ? IndelModel::localized(options.e, options.g)
                                            : IndelModel::constant(1.0);
    return s;
}

} // namespace seqa
