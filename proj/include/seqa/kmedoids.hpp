#pragma once

#include "seqa/dataset.hpp"
#include "seqa/dissim.hpp"

#include <cstdint>
#include <vector>

namespace seqa {

struct ClusterAssignment {
    int k = 0;
    std::vector<int> labels;           // per case, 0..k-1
    std::vector<std::size_t> medoids;  // ascending case indices, one per cluster
    double objective = 0.0;            // sum_i w_i * d(i, medoid(label_i))
};

enum class MedoidInit { Build, Random };

// Weighted k-medoids (PAM): greedy BUILD (or seeded random medoids) followed
// by steepest-descent SWAP passes until no single swap lowers the weighted
// objective. Deterministic given (matrix, k, seed, init). Cluster indices
// follow ascending medoid case order; non-medoid ties go to the lowest
// medoid index.
ClusterAssignment weighted_k_medoids(const DissimilarityMatrix& m, int k, std::uint64_t seed = 0,
                                     MedoidInit init = MedoidInit::Build);

// Clusters the distinct-sequence submatrix with aggregated weights, then
// expands labels back to cases. Exact: identical sequences share rows of the
// case matrix. Medoid indices refer to case positions.
ClusterAssignment cluster_distinct(const SequenceDataset& ds, const DissimilarityMatrix& case_matrix,
                                   int k, std::uint64_t seed = 0, MedoidInit init = MedoidInit::Build);

} // namespace seqa
