#include "seqa/kmedoids.hpp"

#include "seqa/error.hpp"
#include "seqa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace seqa {

namespace {

// Greedy BUILD: first the point minimizing total weighted distance, then the
// point with the largest weighted reduction of nearest-medoid distances.
// Ties resolve to the lowest case index.
std::vector<std::size_t> build_init(const DissimilarityMatrix& m, int k) {
    const std::size_t n = m.size();
    const auto& w = m.weights();
    std::vector<std::size_t> medoids;
    medoids.reserve(static_cast<std::size_t>(k));

    std::size_t first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += w[j] * m.at(j, i);
        if (total < best) {
            best = total;
            first = i;
        }
    }
    medoids.push_back(first);

    std::vector<double> nearest(n);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = m.at(j, first);
    std::vector<char> is_medoid(n, 0);
    is_medoid[first] = 1;

    while (medoids.size() < static_cast<std::size_t>(k)) {
        std::size_t pick = n;
        double best_gain = -1.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = m.at(j, c);
                if (d < nearest[j]) gain += w[j] * (nearest[j] - d);
            }
            if (gain > best_gain) {
                best_gain = gain;
                pick = c;
            }
        }
        medoids.push_back(pick);
        is_medoid[pick] = 1;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], m.at(j, pick));
    }
    return medoids;
}

std::vector<std::size_t> random_init(const DissimilarityMatrix& m, int k, std::uint64_t seed) {
    std::vector<std::size_t> pool(m.size());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Rng rng(mix_seed(seed, 0x6d65646f69647ULL));
    rng.shuffle(pool);
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

} // namespace

ClusterAssignment weighted_k_medoids(const DissimilarityMatrix& m, int k, std::uint64_t seed,
                                     MedoidInit init) {
    const std::size_t n = m.size();
    if (k < 1 || static_cast<std::size_t>(k) > n)
        throw ConfigError("k must be in [1, n]; got k=" + std::to_string(k) + ", n=" + std::to_string(n));
    const auto& w = m.weights();
    const double total_weight = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total_weight > 0)) throw DegeneracyError("all-zero case weights");
    for (double wi : w)
        if (wi < 0) throw DataError("negative case weight");

    std::vector<std::size_t> medoids =
        init == MedoidInit::Build ? build_init(m, k) : random_init(m, k, seed);
    std::sort(medoids.begin(), medoids.end());

    std::vector<char> is_medoid(n, 0);
    for (std::size_t mi : medoids) is_medoid[mi] = 1;

    // dysma/dysmb: distance to the nearest and second-nearest medoid.
    std::vector<double> dysma(n), dysmb(n);
    std::vector<int> nearest_idx(n);
    auto recompute_nearest = [&] {
        for (std::size_t j = 0; j < n; ++j) {
            dysma[j] = std::numeric_limits<double>::infinity();
            dysmb[j] = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < medoids.size(); ++c) {
                const double d = m.at(j, medoids[c]);
                if (d < dysma[j]) {
                    dysmb[j] = dysma[j];
                    dysma[j] = d;
                    nearest_idx[j] = static_cast<int>(c);
                } else if (d < dysmb[j]) {
                    dysmb[j] = d;
                }
            }
        }
    };
    recompute_nearest();

    double objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) objective += w[j] * dysma[j];

    if (static_cast<std::size_t>(k) < n) {
        for (;;) {
            double best_delta = 0.0;
            std::size_t best_h = n, best_m = n;
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                for (std::size_t c = 0; c < medoids.size(); ++c) {
                    double delta = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (w[j] == 0.0) continue;
                        const double djh = m.at(j, h);
                        if (nearest_idx[j] == static_cast<int>(c)) {
                            delta += w[j] * (std::min(djh, dysmb[j]) - dysma[j]);
                        } else if (djh < dysma[j]) {
                            delta += w[j] * (djh - dysma[j]);
                        }
                    }
                    if (delta < best_delta) {
                        best_delta = delta;
                        best_h = h;
                        best_m = medoids[c];
                    }
                }
            }
            // Stop on non-improving or noise-level swaps; each accepted swap
            // strictly lowers the objective, so the loop terminates.
            if (best_h == n || best_delta >= -1e-12 * (1.0 + std::abs(objective))) break;
            is_medoid[best_m] = 0;
            is_medoid[best_h] = 1;
            *std::find(medoids.begin(), medoids.end(), best_m) = best_h;
            std::sort(medoids.begin(), medoids.end());
            recompute_nearest();
            objective += best_delta;
        }
    }

    ClusterAssignment a;
    a.k = k;
    a.medoids = medoids;
    a.labels.assign(n, 0);
    std::vector<int> medoid_cluster(n, -1);
    for (std::size_t c = 0; c < medoids.size(); ++c) medoid_cluster[medoids[c]] = static_cast<int>(c);
    a.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (medoid_cluster[j] >= 0) {
            a.labels[j] = medoid_cluster[j]; // a medoid belongs to its own cluster
            continue;
        }
        int best_c = 0;
        double best_d = m.at(j, medoids[0]);
        for (std::size_t c = 1; c < medoids.size(); ++c) {
            const double d = m.at(j, medoids[c]);
            if (d < best_d) {
                best_d = d;
                best_c = static_cast<int>(c);
            }
        }
        a.labels[j] = best_c;
        a.objective += w[j] * best_d;
    }
    return a;
}

ClusterAssignment cluster_distinct(const SequenceDataset& ds, const DissimilarityMatrix& case_matrix,
                                   int k, std::uint64_t seed, MedoidInit init) {
    if (ds.size() != case_matrix.size()) throw DataError("dataset/matrix size mismatch");
    const DistinctSequences uniq = distinct_sequences(ds);
    const DissimilarityMatrix um = case_matrix.submatrix(uniq.first_case, uniq.weights);
    const ClusterAssignment ua = weighted_k_medoids(um, k, seed, init);

    ClusterAssignment a;
    a.k = ua.k;
    a.objective = ua.objective;
    a.medoids.reserve(ua.medoids.size());
    for (std::size_t mu : ua.medoids) a.medoids.push_back(uniq.first_case[mu]);
    std::sort(a.medoids.begin(), a.medoids.end());
    // submatrix preserves first_case order, so medoid ranks survive sorting
    a.labels.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) a.labels.push_back(ua.labels[uniq.case_to_unique[i]]);
    return a;
}

} // namespace seqa
