#include "seqa/mantel.hpp"

#include "seqa/error.hpp"
#include "seqa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>
#include <vector>

namespace seqa {

namespace {

// Neumaier-compensated sum; keeps dot products stable under reordering.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

double csum(const std::vector<double>& v) {
    KahanSum k;
    for (double x : v) k.add(x);
    return k.value();
}

// Average ranks with ties sharing their midrank.
std::vector<double> midranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = rank;
        i = j;
    }
    return ranks;
}

struct CenteredStats {
    double mean = 0.0;
    double ss = 0.0; // sum of squared deviations
};

CenteredStats center(const std::vector<double>& v) {
    CenteredStats st;
    st.mean = csum(v) / static_cast<double>(v.size());
    KahanSum ss;
    for (double x : v) {
        const double d = x - st.mean;
        ss.add(d * d);
    }
    st.ss = ss.value();
    return st;
}

double correlation(const std::vector<double>& a, const CenteredStats& sa,
                   const std::vector<double>& b, const CenteredStats& sb) {
    KahanSum dot;
    for (std::size_t i = 0; i < a.size(); ++i) dot.add((a[i] - sa.mean) * (b[i] - sb.mean));
    return dot.value() / std::sqrt(sa.ss * sb.ss);
}

} // namespace

MantelResult mantel_test(const DissimilarityMatrix& m1, const DissimilarityMatrix& m2,
                         int permutations, std::uint64_t seed, const MantelOptions& options) {
    if (m1.size() != m2.size()) throw DataError("matrix dimension mismatch");
    if (m1.labels() != m2.labels()) throw DataError("matrix label mismatch");
    if (permutations < 1) throw ConfigError("permutation count must be >= 1");
    const std::size_t n = m1.size();
    if (n < 3) throw DataError("mantel test needs n >= 3");

    std::vector<double> v1 = m1.values();
    std::vector<double> v2 = m2.values();
    if (options.spearman) {
        v1 = midranks(v1);
        v2 = midranks(v2);
    }
    const CenteredStats s1 = center(v1);
    const CenteredStats s2 = center(v2);
    if (!(s1.ss > 0.0) || !(s2.ss > 0.0)) throw DegeneracyError("constant matrix");

    double r_obs;
    if (m1.values() == m2.values()) {
        r_obs = 1.0; // self-correlation is exact
    } else {
        r_obs = correlation(v1, s1, v2, s2);
    }
    const double threshold = std::abs(r_obs);

    // r of a permuted copy reuses s2: the variance of a permutation of v2
    // is the variance of v2.
    auto count_extreme = [&](int b_lo, int b_hi) {
        int count = 0;
        std::vector<std::size_t> perm(n);
        std::vector<double> v2p(v2.size());
        for (int b = b_lo; b < b_hi; ++b) {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            rng.shuffle(perm);
            std::size_t k = 0;
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t pi = perm[i];
                for (std::size_t j = 0; j < i; ++j, ++k) {
                    const std::size_t pj = perm[j];
                    const auto [lo, hi] = std::minmax(pi, pj);
                    v2p[k] = v2[hi * (hi - 1) / 2 + lo];
                }
            }
            if (std::abs(correlation(v1, s1, v2p, s2)) >= threshold) ++count;
        }
        return count;
    };

    int extreme = 0;
    const int threads = std::max(1, std::min(options.threads, permutations));
    if (threads == 1) {
        extreme = count_extreme(1, permutations + 1);
    } else {
        std::vector<int> partial(static_cast<std::size_t>(threads), 0);
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            const int lo = 1 + permutations * t / threads;
            const int hi = 1 + permutations * (t + 1) / threads;
            pool.emplace_back([&, t, lo, hi] { partial[static_cast<std::size_t>(t)] = count_extreme(lo, hi); });
        }
        for (auto& th : pool) th.join();
        for (int c : partial) extreme += c;
    }

    MantelResult res;
    res.r = r_obs;
    res.permutations = permutations;
    res.p_value = (1.0 + static_cast<double>(extreme)) / (static_cast<double>(permutations) + 1.0);
    res.seed = seed;
    return res;
}

} // namespace seqa
