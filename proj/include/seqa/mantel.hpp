#pragma once

#include "seqa/dissim.hpp"

#include <cstdint>

namespace seqa {

struct MantelResult {
    double r = 0.0;
    int permutations = 0;
    double p_value = 1.0; // (1 + #{|r_perm| >= |r_obs|}) / (B + 1), two-sided
    std::uint64_t seed = 0;
};

struct MantelOptions {
    bool spearman = false; // rank-transform both triangles first
    int threads = 1;
};

// Correlation between two condensed triangles with a permutation test:
// each permutation relabels the cases of m2 and applies the relabeling to
// rows and columns simultaneously. Permutation b draws its generator from
// (seed, b), so the p-value does not depend on scheduling.
MantelResult mantel_test(const DissimilarityMatrix& m1, const DissimilarityMatrix& m2,
                         int permutations, std::uint64_t seed, const MantelOptions& options = {});

} // namespace seqa
