#include "seqa/quality.hpp"

#include "seqa/error.hpp"
#include "seqa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace seqa {

namespace {

void check_assignment(const DissimilarityMatrix& m, const ClusterAssignment& a) {
    if (a.labels.size() != m.size()) throw DataError("assignment/matrix size mismatch");
    if (m.size() < 2 || a.k < 2) throw ConfigError("quality indices need n >= 2 and k >= 2");
    std::vector<char> seen(static_cast<std::size_t>(a.k), 0);
    for (int l : a.labels) {
        if (l < 0 || l >= a.k) throw DataError("cluster label out of range");
        seen[static_cast<std::size_t>(l)] = 1;
    }
    for (int c = 0; c < a.k; ++c)
        if (!seen[static_cast<std::size_t>(c)]) throw DataError("empty cluster " + std::to_string(c));
}

double weighted_silhouette(const DissimilarityMatrix& m, const ClusterAssignment& a,
                           const std::vector<double>& cluster_weight) {
    const std::size_t n = m.size();
    const auto& w = m.weights();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int ci = a.labels[i];
        std::vector<double> to_cluster(static_cast<std::size_t>(a.k), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            to_cluster[static_cast<std::size_t>(a.labels[j])] += w[j] * m.at(i, j);
        }
        const double own_weight = cluster_weight[static_cast<std::size_t>(ci)] - w[i];
        double s = 0.0;
        if (own_weight > 0.0) {
            const double ai = to_cluster[static_cast<std::size_t>(ci)] / own_weight;
            double bi = std::numeric_limits<double>::infinity();
            for (int c = 0; c < a.k; ++c) {
                if (c == ci) continue;
                bi = std::min(bi, to_cluster[static_cast<std::size_t>(c)] /
                                      cluster_weight[static_cast<std::size_t>(c)]);
            }
            const double denom = std::max(ai, bi);
            if (denom > 0.0) s = (bi - ai) / denom;
        }
        // own_weight == 0: the case is alone in its cluster, silhouette 0
        num += w[i] * s;
        den += w[i];
    }
    return den > 0.0 ? num / den : 0.0;
}

struct PairStats {
    double hg = 0.0;
    double pbc = 0.0;
    double hc = 0.0;
};

PairStats pair_indices(const DissimilarityMatrix& m, const ClusterAssignment& a) {
    const std::size_t n = m.size();
    const auto& w = m.weights();

    struct Pair {
        double d;
        double weight;
        bool within;
    };
    std::vector<Pair> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const double ww = w[i] * w[j];
            if (ww == 0.0) continue;
            pairs.push_back({m.at(i, j), ww, a.labels[i] == a.labels[j]});
        }

    PairStats out;
    if (pairs.empty()) return out;

    // Point-biserial correlation of distance with the different-cluster
    // indicator (so that larger is better).
    double sw = 0.0, sd = 0.0, sz = 0.0, sdd = 0.0, szz = 0.0, sdz = 0.0;
    double total_within = 0.0, s_within = 0.0;
    for (const auto& p : pairs) {
        const double z = p.within ? 0.0 : 1.0;
        sw += p.weight;
        sd += p.weight * p.d;
        sz += p.weight * z;
        sdd += p.weight * p.d * p.d;
        szz += p.weight * z * z;
        sdz += p.weight * p.d * z;
        if (p.within) {
            total_within += p.weight;
            s_within += p.weight * p.d;
        }
    }
    const double var_d = sdd - sd * sd / sw;
    const double var_z = szz - sz * sz / sw;
    const double cov = sdz - sd * sz / sw;
    out.pbc = (var_d > 0.0 && var_z > 0.0) ? cov / std::sqrt(var_d * var_z) : 0.0;

    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });

    // Gamma: concordant when a within pair is strictly closer than a between
    // pair, discordant when strictly farther; equal distances are ties.
    double concordant = 0.0, discordant = 0.0, within_below = 0.0;
    std::size_t i = 0;
    while (i < pairs.size()) {
        std::size_t j = i;
        double group_within = 0.0, group_between = 0.0;
        while (j < pairs.size() && pairs[j].d == pairs[i].d) {
            (pairs[j].within ? group_within : group_between) += pairs[j].weight;
            ++j;
        }
        concordant += group_between * within_below;
        discordant += group_between * (total_within - within_below - group_within);
        within_below += group_within;
        i = j;
    }
    out.hg = (concordant + discordant > 0.0) ? (concordant - discordant) / (concordant + discordant) : 0.0;

    // C index: S against the smallest/largest possible distance sums of the
    // same total pair weight.
    double s_min = 0.0, s_max = 0.0;
    double take = total_within;
    for (const auto& p : pairs) {
        if (take <= 0.0) break;
        const double t = std::min(take, p.weight);
        s_min += t * p.d;
        take -= t;
    }
    take = total_within;
    for (auto it = pairs.rbegin(); it != pairs.rend() && take > 0.0; ++it) {
        const double t = std::min(take, it->weight);
        s_max += t * it->d;
        take -= t;
    }
    const double span = s_max - s_min;
    out.hc = span > 0.0 ? (s_within - s_min) / span : 0.0;
    out.hc = std::min(1.0, std::max(0.0, out.hc));
    return out;
}

} // namespace

QualityIndices cluster_quality(const DissimilarityMatrix& m, const ClusterAssignment& a) {
    check_assignment(m, a);
    const auto& w = m.weights();
    std::vector<double> cluster_weight(static_cast<std::size_t>(a.k), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        cluster_weight[static_cast<std::size_t>(a.labels[i])] += w[i];
    for (int c = 0; c < a.k; ++c)
        if (!(cluster_weight[static_cast<std::size_t>(c)] > 0.0))
            throw DegeneracyError("cluster " + std::to_string(c) + " has zero total weight");

    QualityIndices q;
    q.aswW = weighted_silhouette(m, a, cluster_weight);
    const PairStats ps = pair_indices(m, a);
    q.hg = ps.hg;
    q.pbc = ps.pbc;
    q.hc = ps.hc;
    return q;
}

std::vector<QualityRow> quality_over_k(const DissimilarityMatrix& m, int k_lo, int k_hi,
                                       std::uint64_t seed, MedoidInit init) {
    if (k_lo < 2 || k_hi < k_lo || static_cast<std::size_t>(k_hi) > m.size())
        throw ConfigError("k range must satisfy 2 <= lo <= hi <= n");
    std::vector<QualityRow> rows;
    rows.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    for (int k = k_lo; k <= k_hi; ++k) {
        const ClusterAssignment a =
            weighted_k_medoids(m, k, mix_seed(seed, static_cast<std::uint64_t>(k)), init);
        QualityRow row;
        row.k = k;
        row.values = cluster_quality(m, a);
        rows.push_back(row);
    }
    standardize_quality(rows);
    return rows;
}

void standardize_quality(std::vector<QualityRow>& rows) {
    if (rows.empty()) return;
    auto standardize = [&rows](double QualityIndices::*field) {
        const double n = static_cast<double>(rows.size());
        double mean = 0.0;
        for (const auto& r : rows) mean += r.values.*field;
        mean /= n;
        double var = 0.0;
        for (const auto& r : rows) {
            const double d = r.values.*field - mean;
            var += d * d;
        }
        const double sd = std::sqrt(var / n);
        for (auto& r : rows) r.standardized.*field = sd > 0.0 ? (r.values.*field - mean) / sd : 0.0;
    };
    standardize(&QualityIndices::aswW);
    standardize(&QualityIndices::hg);
    standardize(&QualityIndices::pbc);
    standardize(&QualityIndices::hc);
}

std::vector<Representative> representative_sequences(const SequenceDataset& ds,
                                                     const ClusterAssignment& a) {
    if (a.labels.size() != ds.size()) throw DataError("assignment/dataset size mismatch");
    struct Group {
        double weight = 0.0;
        std::size_t first_case = 0;
    };
    std::vector<std::map<std::vector<int>, Group>> per_cluster(static_cast<std::size_t>(a.k));
    std::vector<double> cluster_weight(static_cast<std::size_t>(a.k), 0.0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const int c = a.labels[i];
        if (c < 0 || c >= a.k) throw DataError("cluster label out of range");
        const auto& s = ds.sequences()[i];
        auto [it, inserted] = per_cluster[static_cast<std::size_t>(c)].try_emplace(s.events);
        if (inserted) it->second.first_case = i;
        it->second.weight += s.weight;
        cluster_weight[static_cast<std::size_t>(c)] += s.weight;
    }

    std::vector<Representative> out;
    out.reserve(static_cast<std::size_t>(a.k));
    for (int c = 0; c < a.k; ++c) {
        const auto& groups = per_cluster[static_cast<std::size_t>(c)];
        if (groups.empty()) throw DataError("empty cluster " + std::to_string(c));
        const std::pair<const std::vector<int>, Group>* best = nullptr;
        for (const auto& g : groups) {
            if (!best || g.second.weight > best->second.weight ||
                (g.second.weight == best->second.weight && g.second.first_case < best->second.first_case))
                best = &g;
        }
        Representative rep;
        rep.cluster = c;
        rep.events = best->first;
        rep.weight = best->second.weight;
        const double cw = cluster_weight[static_cast<std::size_t>(c)];
        rep.share = cw > 0.0 ? best->second.weight / cw : 0.0;
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace seqa
