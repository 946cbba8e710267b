#include "seqa/agreement.hpp"

#include "seqa/error.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace seqa {

std::vector<int> encode_labels(const std::vector<std::string>& labels) {
    std::vector<int> out;
    out.reserve(labels.size());
    std::unordered_map<std::string, int> seen;
    for (const auto& l : labels) {
        auto [it, inserted] = seen.emplace(l, static_cast<int>(seen.size()));
        out.push_back(it->second);
    }
    return out;
}

ContingencyTable::ContingencyTable(const std::vector<int>& x, const std::vector<int>& y,
                                   const std::vector<double>& weights) {
    if (x.size() != y.size() || x.size() != weights.size())
        throw DataError("label/weight length mismatch");
    if (x.empty()) throw DataError("empty label vectors");
    int rmax = -1, smax = -1;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || y[i] < 0) throw DataError("negative label index");
        if (weights[i] < 0) throw DataError("negative weight");
        rmax = std::max(rmax, x[i]);
        smax = std::max(smax, y[i]);
    }
    r_ = static_cast<std::size_t>(rmax) + 1;
    s_ = static_cast<std::size_t>(smax) + 1;
    n_.assign(r_ * s_, 0.0);
    q_.assign(r_ * s_, 0.0);
    a_.assign(r_, 0.0);
    b_.assign(s_, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = weights[i];
        const std::size_t cell = static_cast<std::size_t>(x[i]) * s_ + static_cast<std::size_t>(y[i]);
        n_[cell] += w;
        q_[cell] += w * w;
        a_[static_cast<std::size_t>(x[i])] += w;
        b_[static_cast<std::size_t>(y[i])] += w;
        total_ += w;
        total_sq_ += w * w;
    }
    if (!(total_ > 0.0)) throw DataError("contingency table with zero total weight");
}

bool ContingencyTable::identical_partitions() const {
    // Each nonempty row must meet exactly one nonempty column and vice versa.
    for (std::size_t i = 0; i < r_; ++i) {
        if (a_[i] == 0.0) continue;
        std::size_t nonzero = 0;
        for (std::size_t j = 0; j < s_; ++j)
            if (n_[i * s_ + j] != 0.0) ++nonzero;
        if (nonzero != 1) return false;
    }
    for (std::size_t j = 0; j < s_; ++j) {
        if (b_[j] == 0.0) continue;
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < r_; ++i)
            if (n_[i * s_ + j] != 0.0) ++nonzero;
        if (nonzero != 1) return false;
    }
    return true;
}

ContingencyTable contingency(const std::vector<int>& x, const std::vector<int>& y,
                             const std::vector<double>& weights) {
    return ContingencyTable(x, y, weights);
}

PairCounts pair_counts(const ContingencyTable& ct) {
    auto pairs2 = [](double w, double q) { return (w * w - q) / 2.0; };
    const double total_pairs = pairs2(ct.total(), ct.total_sq());
    double same_x = 0.0, same_y = 0.0, same_both = 0.0;
    for (std::size_t i = 0; i < ct.rows(); ++i) {
        double row_q = 0.0;
        for (std::size_t j = 0; j < ct.cols(); ++j) {
            same_both += pairs2(ct.cell(i, j), ct.cell_sq(i, j));
            row_q += ct.cell_sq(i, j);
        }
        same_x += pairs2(ct.row_sum(i), row_q);
    }
    for (std::size_t j = 0; j < ct.cols(); ++j) {
        double col_q = 0.0;
        for (std::size_t i = 0; i < ct.rows(); ++i) col_q += ct.cell_sq(i, j);
        same_y += pairs2(ct.col_sum(j), col_q);
    }
    PairCounts pc;
    pc.n11 = same_both;
    pc.n01 = same_x - same_both;
    pc.n10 = same_y - same_both;
    pc.n00 = total_pairs - same_x - same_y + same_both;
    return pc;
}

double ari(const ContingencyTable& ct) {
    const PairCounts pc = pair_counts(ct);
    const double num = 2.0 * (pc.n00 * pc.n11 - pc.n01 * pc.n10);
    const double den = (pc.n00 + pc.n01) * (pc.n01 + pc.n11) + (pc.n00 + pc.n10) * (pc.n10 + pc.n11);
    if (den == 0.0) {
        double populated_rows = 0, populated_cols = 0;
        for (std::size_t i = 0; i < ct.rows(); ++i)
            if (ct.row_sum(i) > 0) ++populated_rows;
        for (std::size_t j = 0; j < ct.cols(); ++j)
            if (ct.col_sum(j) > 0) ++populated_cols;
        return populated_rows == 1 && populated_cols == 1 ? 1.0 : 0.0;
    }
    return num / den;
}

double fms(const ContingencyTable& ct) {
    const PairCounts pc = pair_counts(ct);
    if (pc.n11 <= 0.0) return 0.0;
    return std::sqrt(pc.n11 / (pc.n11 + pc.n10) * (pc.n11 / (pc.n11 + pc.n01)));
}

namespace {

struct IntTable {
    std::size_t r, s;
    std::vector<long long> n;
    std::vector<long long> a, b;
    long long total = 0;
};

IntTable integer_table(const ContingencyTable& ct, bool require_exact, bool* rounded) {
    IntTable t;
    t.r = ct.rows();
    t.s = ct.cols();
    t.n.assign(t.r * t.s, 0);
    t.a.assign(t.r, 0);
    t.b.assign(t.s, 0);
    bool any_rounded = false;
    for (std::size_t i = 0; i < t.r; ++i)
        for (std::size_t j = 0; j < t.s; ++j) {
            const double v = ct.cell(i, j);
            const long long iv = std::llround(v);
            if (std::abs(v - static_cast<double>(iv)) > 1e-9) {
                if (require_exact)
                    throw DataError("expected integer counts for exact expected mutual information");
                any_rounded = true;
            }
            t.n[i * t.s + j] = iv;
            t.a[i] += iv;
            t.b[j] += iv;
            t.total += iv;
        }
    if (rounded) *rounded = any_rounded;
    if (t.total <= 0) throw DataError("contingency table empty after rounding");
    return t;
}

// Expected mutual information under the permutation (hypergeometric) model.
double expected_mi(const IntTable& t) {
    const auto N = static_cast<std::size_t>(t.total);
    std::vector<double> lf(N + 1, 0.0);
    for (std::size_t i = 2; i <= N; ++i) lf[i] = lf[i - 1] + std::log(static_cast<double>(i));
    const double logN = std::log(static_cast<double>(t.total));

    double emi = 0.0;
    for (std::size_t i = 0; i < t.r; ++i) {
        const long long A = t.a[i];
        if (A == 0) continue;
        for (std::size_t j = 0; j < t.s; ++j) {
            const long long B = t.b[j];
            if (B == 0) continue;
            const long long lo = std::max<long long>(1, A + B - t.total);
            const long long hi = std::min(A, B);
            const double log_ab = std::log(static_cast<double>(A)) + std::log(static_cast<double>(B));
            for (long long v = lo; v <= hi; ++v) {
                const double term = (static_cast<double>(v) / static_cast<double>(t.total)) *
                                    (logN + std::log(static_cast<double>(v)) - log_ab);
                const double log_pmf =
                    lf[static_cast<std::size_t>(A)] + lf[static_cast<std::size_t>(B)] +
                    lf[static_cast<std::size_t>(t.total - A)] + lf[static_cast<std::size_t>(t.total - B)] -
                    lf[N] - lf[static_cast<std::size_t>(v)] - lf[static_cast<std::size_t>(A - v)] -
                    lf[static_cast<std::size_t>(B - v)] -
                    lf[static_cast<std::size_t>(t.total - A - B + v)];
                emi += term * std::exp(log_pmf);
            }
        }
    }
    return emi;
}

} // namespace

double ami(const ContingencyTable& ct, bool require_exact, bool* rounded) {
    const IntTable t = integer_table(ct, require_exact, rounded);
    const double N = static_cast<double>(t.total);

    double mi = 0.0, hx = 0.0, hy = 0.0;
    for (std::size_t i = 0; i < t.r; ++i) {
        if (t.a[i] == 0) continue;
        const double p = static_cast<double>(t.a[i]) / N;
        hx -= p * std::log(p);
    }
    for (std::size_t j = 0; j < t.s; ++j) {
        if (t.b[j] == 0) continue;
        const double p = static_cast<double>(t.b[j]) / N;
        hy -= p * std::log(p);
    }
    for (std::size_t i = 0; i < t.r; ++i)
        for (std::size_t j = 0; j < t.s; ++j) {
            const long long v = t.n[i * t.s + j];
            if (v == 0) continue;
            const double p = static_cast<double>(v) / N;
            // p * log( p / (a/N * b/N) )
            mi += p * std::log(static_cast<double>(v) * N /
                               (static_cast<double>(t.a[i]) * static_cast<double>(t.b[j])));
        }

    const double emi = expected_mi(t);
    const double den = std::max(hx, hy) - emi;
    if (std::abs(den) < 1e-12) return ct.identical_partitions() ? 1.0 : 0.0;
    return (mi - emi) / den;
}

} // namespace seqa
