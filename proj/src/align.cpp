#include "seqa/align.hpp"

#include "seqa/error.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace seqa {

double om_distance_precomputed(const std::vector<int>& x, const std::vector<double>& indel_x,
                               const std::vector<int>& y, const std::vector<double>& indel_y,
                               const SubstitutionMatrix& sub, std::vector<double>& scratch) {
    const std::size_t n = x.size(), m = y.size();
    const std::size_t k = sub.size();
    const double* cost = sub.values().data();

    scratch.resize(m + 1);
    double* row = scratch.data();
    row[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) row[j] = row[j - 1] + indel_y[j - 1];

    for (std::size_t i = 1; i <= n; ++i) {
        const double del = indel_x[i - 1];
        const double* subrow = cost + static_cast<std::size_t>(x[i - 1]) * k;
        double diag = row[0];
        row[0] += del;
        for (std::size_t j = 1; j <= m; ++j) {
            const double s = diag + subrow[y[j - 1]];
            const double d = row[j] + del;
            const double ins = row[j - 1] + indel_y[j - 1];
            diag = row[j];
            row[j] = std::min(s, std::min(d, ins));
        }
    }
    return row[m];
}

static void check_over_alphabet(const std::vector<int>& s, std::size_t k) {
    for (int e : s)
        if (e < 0 || static_cast<std::size_t>(e) >= k)
            throw DataError("event index " + std::to_string(e) + " outside scheme alphabet");
}

double om_distance(const std::vector<int>& x, const std::vector<int>& y, const CostScheme& scheme) {
    if (x.empty() || y.empty()) throw DataError("om_distance requires nonempty sequences");
    check_over_alphabet(x, scheme.substitution.size());
    check_over_alphabet(y, scheme.substitution.size());
    std::vector<double> scratch;
    return om_distance_precomputed(x, scheme.indel_costs(x), y, scheme.indel_costs(y),
                                   scheme.substitution, scratch);
}

namespace {

// Row index of condensed entry k in the lower triangle (i > j).
std::size_t condensed_row(std::size_t k) {
    auto i = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(k))) / 2.0);
    while (i * (i - 1) / 2 > k) --i;
    while ((i + 1) * i / 2 <= k) ++i;
    return i;
}

void fill_block(const std::vector<const std::vector<int>*>& seqs,
                const std::vector<std::vector<double>>& indels, const SubstitutionMatrix& sub,
                std::size_t lo, std::size_t hi, double* out) {
    std::vector<double> scratch;
    std::size_t i = condensed_row(lo);
    std::size_t j = lo - i * (i - 1) / 2;
    for (std::size_t k = lo; k < hi; ++k) {
        out[k] = om_distance_precomputed(*seqs[i], indels[i], *seqs[j], indels[j], sub, scratch);
        if (++j == i) {
            ++i;
            j = 0;
        }
    }
}

std::vector<double> condensed_distances(const std::vector<const std::vector<int>*>& seqs,
                                        const CostScheme& scheme, int threads) {
    const std::size_t n = seqs.size();
    const std::size_t total = n * (n - (n > 0 ? 1 : 0)) / 2;
    std::vector<std::vector<double>> indels(n);
    for (std::size_t i = 0; i < n; ++i) indels[i] = scheme.indel_costs(*seqs[i]);

    std::vector<double> values(total);
    const std::size_t nthreads =
        std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(threads), total ? total : 1));
    if (nthreads <= 1 || total < 2) {
        if (total > 0) fill_block(seqs, indels, scheme.substitution, 0, total, values.data());
        return values;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t lo = total * t / nthreads;
        const std::size_t hi = total * (t + 1) / nthreads;
        pool.emplace_back(fill_block, std::cref(seqs), std::cref(indels),
                          std::cref(scheme.substitution), lo, hi, values.data());
    }
    for (auto& th : pool) th.join();
    return values;
}

} // namespace

DissimilarityMatrix pairwise_matrix(const SequenceDataset& ds, const CostScheme& scheme,
                                    const PairwiseOptions& options) {
    if (ds.size() == 0) throw DataError("empty dataset");
    for (const auto& s : ds.sequences()) check_over_alphabet(s.events, scheme.substitution.size());

    const std::size_t n = ds.size();
    std::vector<double> values;
    if (options.dedupe) {
        const DistinctSequences uniq = distinct_sequences(ds);
        std::vector<const std::vector<int>*> seqs;
        seqs.reserve(uniq.sequences.size());
        for (const auto& s : uniq.sequences) seqs.push_back(&s);
        const std::vector<double> uvalues = condensed_distances(seqs, scheme, options.threads);
        values.resize(n * (n - 1) / 2);
        std::size_t k = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const std::size_t ui = uniq.case_to_unique[i];
            for (std::size_t j = 0; j < i; ++j, ++k) {
                const std::size_t uj = uniq.case_to_unique[j];
                if (ui == uj) {
                    values[k] = 0.0;
                } else {
                    const auto [lo, hi] = std::minmax(ui, uj);
                    values[k] = uvalues[hi * (hi - 1) / 2 + lo];
                }
            }
        }
    } else {
        std::vector<const std::vector<int>*> seqs;
        seqs.reserve(n);
        for (const auto& s : ds.sequences()) seqs.push_back(&s.events);
        values = condensed_distances(seqs, scheme, options.threads);
    }

    if (options.normalize == PairwiseOptions::Normalize::MaxLen) {
        std::size_t k = 0;
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j, ++k) {
                const double len = static_cast<double>(
                    std::max(ds.sequences()[i].events.size(), ds.sequences()[j].events.size()));
                values[k] /= len;
            }
    }
    return DissimilarityMatrix(ds.case_ids(), ds.weights(), std::move(values), scheme.name);
}

} // namespace seqa
