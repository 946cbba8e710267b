#pragma once

#include "seqa/agreement.hpp"
#include "seqa/align.hpp"
#include "seqa/costs.hpp"
#include "seqa/dataset.hpp"
#include "seqa/encoding.hpp"
#include "seqa/kmedoids.hpp"
#include "seqa/mantel.hpp"
#include "seqa/quality.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace seqa {

// End-to-end run description: ingest -> encode -> costs -> matrix ->
// cluster -> evaluate. Every field is validated before any computation.
struct PipelineConfig {
    std::string input;
    FileFormat format = FileFormat::Long;
    std::string scheme; // optional encoding scheme CSV
    bool strict_encoding = true;

    std::string measure = "OMlev";
    int q = 1;
    bool weighted_rates = true;
    RateDenominator denominator = RateDenominator::Successor;
    bool normalize_max2 = true;
    std::optional<double> e, g; // required for LOMtr / LOMsf

    std::optional<int> k;
    std::optional<std::pair<int, int>> k_range; // mutually exclusive with k
    std::uint64_t seed = 0;
    bool seed_set = false; // random init demands an explicit seed
    MedoidInit init = MedoidInit::Build;

    std::string benchmark; // optional label column in the input file
    std::string out_dir;
    int threads = 1;
    bool dedupe = true;
    bool binary_matrix = false;
};

void validate_config(const PipelineConfig& cfg);

// Flat key=value file; '#' starts a comment line. Unknown keys are config
// errors so long runs cannot fail late on a typo.
PipelineConfig parse_config_file(const std::string& path);
void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& where);

struct AgreementReport {
    double ari = 0.0;
    double ami = 0.0;
    double fms = 0.0;
    std::size_t n = 0; // cases compared
    std::size_t r = 0; // benchmark categories
    std::size_t s = 0; // clusters
    bool ami_rounded = false;
};

AgreementReport agreement_report(const std::vector<int>& x, const std::vector<int>& y,
                                 const std::vector<double>& weights);

struct PipelineResult {
    DatasetStats stats;
    CostScheme scheme;
    DissimilarityMatrix matrix;
    std::optional<ClusterAssignment> assignment;
    std::vector<QualityRow> quality;
    std::vector<Representative> representatives;
    std::optional<AgreementReport> agreement;
    std::vector<std::string> outputs;  // file names written under out_dir
    std::vector<std::string> warnings;
};

// Runs every stage and writes the report bundle plus a manifest that
// records all parameters for exact re-runs. A stage failure removes the
// files written so far and rethrows with the stage name.
PipelineResult run_pipeline(const PipelineConfig& cfg);

struct SweepRow {
    double e = 0.0;
    double g = 0.0; // always 1 - 2e
    double ari = 0.0;
    double ami = 0.0;
    double fms = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::size_t optimum = 0; // index of the max-ARI row; ties keep smaller e
};

struct SweepGrid {
    double start = 0.0;
    double stop = 0.4;
    double step = 0.01;
};

// Indel-parameter sensitivity scan for localized measures: for each e in
// the grid g is set to 1 - 2e, the matrix is recomputed on the cached
// substitution costs, reclustered with the same seed and scored against
// the benchmark.
SweepResult sensitivity_sweep(const PipelineConfig& cfg, const SweepGrid& grid);
std::string sweep_to_csv(const SweepResult& sweep);

struct MantelReport {
    std::vector<std::string> names;
    std::vector<double> r; // row-major full matrices, diagonal 1 / 0
    std::vector<double> p;
    int permutations = 0;
    std::uint64_t seed = 0;
};

MantelReport mantel_report(const std::vector<DissimilarityMatrix>& matrices,
                           const std::vector<std::string>& names, int permutations,
                           std::uint64_t seed, const MantelOptions& options = {});
std::string mantel_r_csv(const MantelReport& rep);
std::string mantel_p_csv(const MantelReport& rep);

struct Flow {
    std::string stage_from;
    std::string category_from;
    std::string stage_to;
    std::string category_to;
    double weight = 0.0;
};

// Flow table between consecutive label sets (alluvial-diagram data).
std::vector<Flow> alluvial_export(const std::vector<std::pair<std::string, std::vector<std::string>>>& stages,
                                  const std::vector<double>& weights);
std::string flows_to_csv(const std::vector<Flow>& flows);

} // namespace seqa
