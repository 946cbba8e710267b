#pragma once

#include "seqa/dataset.hpp"
#include "seqa/dissim.hpp"
#include "seqa/kmedoids.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace seqa {

// Clustering quality indices over a weighted dissimilarity matrix.
//   aswW  weighted average silhouette width            [-1, 1], maximize
//   hg    weighted Goodman-Kruskal gamma between        [-1, 1], maximize
//         pair distances and co-membership
//   pbc   weighted point-biserial correlation, oriented [-1, 1], maximize
//         so that well-separated clusterings score high
//   hc    weighted C index                              [0, 1], minimize
// Pairs (i, j), i < j, carry weight w_i * w_j. Degenerate denominators
// (all distances equal, single populated side) score 0.
struct QualityIndices {
    double aswW = 0.0;
    double hg = 0.0;
    double pbc = 0.0;
    double hc = 0.0;
};

QualityIndices cluster_quality(const DissimilarityMatrix& m, const ClusterAssignment& a);

struct QualityRow {
    int k = 0;
    QualityIndices values;
    QualityIndices standardized; // z-scores across the swept k range
};

// One clustering per k with per-index standardized values; each run draws
// its seed stream from (seed, k).
std::vector<QualityRow> quality_over_k(const DissimilarityMatrix& m, int k_lo, int k_hi,
                                       std::uint64_t seed = 0, MedoidInit init = MedoidInit::Build);

// Fills the standardized fields: (value - mean) / population stdev across
// the rows, 0 when the stdev vanishes.
void standardize_quality(std::vector<QualityRow>& rows);

struct Representative {
    int cluster = 0;
    std::vector<int> events; // alphabet indices of the dominant sequence
    double share = 0.0;      // its fraction of the cluster's total weight
    double weight = 0.0;
};

// The distinct sequence holding the largest aggregated weight within each
// cluster; ties resolve to the earliest first occurrence in case order.
std::vector<Representative> representative_sequences(const SequenceDataset& ds,
                                                     const ClusterAssignment& a);

} // namespace seqa
