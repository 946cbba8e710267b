#pragma once

#include "seqa/costs.hpp"
#include "seqa/dataset.hpp"
#include "seqa/dissim.hpp"

#include <vector>

namespace seqa {

// Minimum total transformation cost (substitutions + indels) turning x into
// y, by the Needleman-Wunsch recurrence in O(|x|·|y|).
//
// Indel costs are anchored to each element's own sequence: deleting x[i]
// costs the indel of x[i] between its neighbors in x, inserting y[j] costs
// the indel of y[j] between its neighbors in y. For constant indel models
// this is the flat cost; for localized models the per-position costs come
// from CostScheme::indel_costs. Keeping the context in the source sequence
// makes the cost of an operation independent of the alignment being built,
// so the distance stays symmetric.
double om_distance(const std::vector<int>& x, const std::vector<int>& y, const CostScheme& scheme);

// Same recurrence with the per-position indel costs precomputed by the
// caller (one vector per sequence); this is the kernel pairwise_matrix uses.
double om_distance_precomputed(const std::vector<int>& x, const std::vector<double>& indel_x,
                               const std::vector<int>& y, const std::vector<double>& indel_y,
                               const SubstitutionMatrix& sub, std::vector<double>& scratch);

struct PairwiseOptions {
    bool dedupe = true; // compute once per unique sequence pair
    int threads = 1;
    enum class Normalize { None, MaxLen } normalize = Normalize::None;
};

// Full pairwise dissimilarity matrix over the dataset's cases. Output is
// bit-identical regardless of dedupe and thread count.
DissimilarityMatrix pairwise_matrix(const SequenceDataset& ds, const CostScheme& scheme,
                                    const PairwiseOptions& options = {});

} // namespace seqa
