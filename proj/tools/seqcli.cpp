// seqcli: encode event-sequence datasets, build cost schemes, compute
// optimal-matching dissimilarity matrices, cluster them and evaluate the
// results. Subcommands mirror the pipeline stages; `pipeline` runs the
// whole chain from a config file or flags.

#include "seqa/agreement.hpp"
#include "seqa/align.hpp"
#include "seqa/costs.hpp"
#include "seqa/csv.hpp"
#include "seqa/dataset.hpp"
#include "seqa/dissim.hpp"
#include "seqa/encoding.hpp"
#include "seqa/error.hpp"
#include "seqa/format.hpp"
#include "seqa/kmedoids.hpp"
#include "seqa/mantel.hpp"
#include "seqa/pipeline.hpp"
#include "seqa/quality.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace seqa;

namespace {

struct DatasetFlags {
    std::string input;
    std::string format = "long";
    std::string scheme;
    bool no_strict = false;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& f, bool required = true) {
    auto* opt = cmd->add_option("--input", f.input, "dataset CSV");
    if (required) opt->required();
    cmd->add_option("--format", f.format, "long|wide")->check(CLI::IsMember({"long", "wide"}));
    cmd->add_option("--scheme", f.scheme, "encoding scheme CSV applied before analysis");
    cmd->add_flag("--no-strict", f.no_strict, "pass unmapped codes through instead of failing");
}

SequenceDataset load_flagged(const DatasetFlags& f, std::vector<std::string>* warnings = nullptr) {
    SequenceDataset ds = load_dataset(f.input, parse_format(f.format));
    if (!f.scheme.empty()) {
        EncodedDataset enc = apply_encoding(ds, load_encoding_scheme(f.scheme), !f.no_strict);
        if (warnings)
            for (const auto& c : enc.unmapped_codes)
                warnings->push_back("unmapped code passed through: " + c);
        ds = std::move(enc.dataset);
    }
    return ds;
}

struct MeasureFlags {
    std::string measure = "OMlev";
    int q = 1;
    bool unweighted = false;
    std::string denominator = "successor";
    bool raw_costs = false; // keep Eq-4 values unscaled
    std::optional<double> e, g;
};

void add_measure_flags(CLI::App* cmd, MeasureFlags& f) {
    cmd->add_option("--measure", f.measure, "OMlev|OMtr|OMsf|LOMtr|LOMsf")
        ->check(CLI::IsMember({"OMlev", "OMtr", "OMsf", "LOMtr", "LOMsf"}));
    cmd->add_option("--q", f.q, "transition lag (default 1)");
    cmd->add_flag("--unweighted", f.unweighted, "ignore case weights when counting transitions");
    cmd->add_option("--denominator", f.denominator,
                    "transition-rate denominator: successor|all")
        ->check(CLI::IsMember({"successor", "all"}));
    cmd->add_flag("--raw-costs", f.raw_costs, "skip rescaling shared-future costs to max 2");
    cmd->add_option("--e", [&f](const CLI::results_t& r) { f.e = std::stod(r[0]); return true; },
                    "localized indel weight on gamma_max");
    cmd->add_option("--g", [&f](const CLI::results_t& r) { f.g = std::stod(r[0]); return true; },
                    "localized indel weight on the neighbor mean");
}

CostOptions to_cost_options(const MeasureFlags& f) {
    CostOptions opt;
    opt.lag = f.q;
    opt.weighted = !f.unweighted;
    opt.denominator = f.denominator == "all" ? RateDenominator::All : RateDenominator::Successor;
    opt.normalize_max2 = !f.raw_costs;
    if (is_localized_measure(f.measure)) {
        if (!f.e || !f.g) throw ConfigError(f.measure + " requires --e and --g");
        opt.e = *f.e;
        opt.g = *f.g;
    } else if (f.e || f.g) {
        throw ConfigError("--e/--g apply only to LOMtr and LOMsf");
    }
    return opt;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path);
    out << text;
    if (!out) throw DataError("write failed: " + out_path);
}

void emit_json(const std::string& out_path, const json& j) { emit(out_path, j.dump(2) + "\n"); }

json stats_json(const DatasetStats& st) {
    json hist = json::array();
    for (const auto& bin : st.length_histogram)
        hist.push_back({{"length", bin.length}, {"count", bin.count}, {"weight", bin.weight}});
    return json{{"count", st.count},
                {"total_weight", st.total_weight},
                {"min_length", st.min_length},
                {"max_length", st.max_length},
                {"mean_length", st.mean_length},
                {"weighted_mean_length", st.weighted_mean_length},
                {"distinct_sequences", st.distinct_sequences},
                {"alphabet_size", st.alphabet_size},
                {"length_histogram", hist}};
}

// Assignment CSV (case_id,cluster) reordered to the dataset's case order.
std::vector<int> read_assignment(const std::string& path, const std::vector<std::string>& case_ids) {
    const csv::Table t = csv::read_file(path);
    if (t.header.size() < 2 || t.header[0] != "case_id" || t.header[1] != "cluster")
        throw DataError(path + ": expected header case_id,cluster");
    std::map<std::string, int> by_id;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (t.rows[r].size() != t.header.size())
            throw DataError(path + ":" + std::to_string(t.line_numbers[r]) + ": field count mismatch");
        const auto& id = t.rows[r][0];
        if (!by_id.emplace(id, static_cast<int>(parse_long(t.rows[r][1], path + ": cluster"))).second)
            throw DataError(path + ": duplicate case_id '" + id + "'");
    }
    std::vector<int> labels;
    labels.reserve(case_ids.size());
    for (const auto& id : case_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw DataError(path + ": missing case_id '" + id + "'");
        labels.push_back(it->second);
    }
    if (by_id.size() != case_ids.size())
        throw DataError(path + ": case count mismatch with dataset");
    return labels;
}

std::vector<std::string> read_label_column(const std::string& path,
                                           const std::vector<std::string>& case_ids) {
    const csv::Table t = csv::read_file(path);
    if (t.header.size() < 2 || t.header[0] != "case_id")
        throw DataError(path + ": expected header case_id,<label>");
    std::map<std::string, std::string> by_id;
    for (const auto& row : t.rows) {
        if (row.size() != t.header.size()) throw DataError(path + ": field count mismatch");
        by_id[row[0]] = row[1];
    }
    std::vector<std::string> labels;
    labels.reserve(case_ids.size());
    for (const auto& id : case_ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw DataError(path + ": missing case_id '" + id + "'");
        labels.push_back(it->second);
    }
    return labels;
}

std::string assignment_csv(const std::vector<std::string>& ids, const std::vector<int>& labels) {
    std::string out = "case_id,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += csv::quote_field(ids[i]);
        out.push_back(',');
        out += std::to_string(labels[i]);
        out.push_back('\n');
    }
    return out;
}

std::string quality_csv(const std::vector<QualityRow>& rows) {
    std::string out = "k,aswW,hg,pbc,hc,aswW_z,hg_z,pbc_z,hc_z\n";
    for (const auto& r : rows) {
        out += std::to_string(r.k);
        for (double v : {r.values.aswW, r.values.hg, r.values.pbc, r.values.hc, r.standardized.aswW,
                         r.standardized.hg, r.standardized.pbc, r.standardized.hc}) {
            out.push_back(',');
            out += format_g17(v);
        }
        out.push_back('\n');
    }
    return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"event-sequence dissimilarity, clustering and evaluation toolkit"};
    app.require_subcommand(1);

    // ---- stats ----
    DatasetFlags stats_ds;
    std::string stats_out;
    auto* cmd_stats = app.add_subcommand("stats", "summarize a dataset");
    add_dataset_flags(cmd_stats, stats_ds);
    cmd_stats->add_option("--out", stats_out, "output JSON path (default stdout)");

    // ---- encode ----
    DatasetFlags enc_ds;
    std::string enc_out;
    auto* cmd_encode = app.add_subcommand("encode", "apply an encoding scheme and write a long CSV");
    add_dataset_flags(cmd_encode, enc_ds);
    cmd_encode->add_option("--output", enc_out, "encoded dataset path")->required();

    // ---- costs ----
    DatasetFlags costs_ds;
    MeasureFlags costs_measure;
    std::string costs_out;
    auto* cmd_costs = app.add_subcommand("costs", "build a substitution-cost scheme");
    add_dataset_flags(cmd_costs, costs_ds);
    add_measure_flags(cmd_costs, costs_measure);
    cmd_costs->add_option("--out", costs_out, "output directory")->required();

    // ---- distmat ----
    DatasetFlags dm_ds;
    MeasureFlags dm_measure;
    std::string dm_out, dm_normalize = "none";
    int dm_threads = 1;
    bool dm_no_dedupe = false, dm_binary = false;
    auto* cmd_distmat = app.add_subcommand("distmat", "compute the pairwise dissimilarity matrix");
    add_dataset_flags(cmd_distmat, dm_ds);
    add_measure_flags(cmd_distmat, dm_measure);
    cmd_distmat->add_option("--out", dm_out, "matrix file path")->required();
    cmd_distmat->add_option("--threads", dm_threads, "worker threads");
    cmd_distmat->add_flag("--no-dedupe", dm_no_dedupe, "align every case pair directly");
    cmd_distmat->add_flag("--binary", dm_binary, "write the binary container");
    cmd_distmat->add_option("--normalize", dm_normalize, "distance normalization: none|maxlen")
        ->check(CLI::IsMember({"none", "maxlen"}));

    // ---- cluster ----
    std::string cl_matrix, cl_out, cl_init = "build";
    DatasetFlags cl_ds;
    int cl_k = 0;
    std::uint64_t cl_seed = 0;
    auto* cmd_cluster = app.add_subcommand("cluster", "weighted k-medoids on a matrix file");
    cmd_cluster->add_option("--matrix", cl_matrix, "dissimilarity matrix file")->required();
    cmd_cluster->add_option("--k", cl_k, "cluster count")->required();
    cmd_cluster->add_option("--seed", cl_seed, "random seed");
    cmd_cluster->add_option("--init", cl_init, "build|random")->check(CLI::IsMember({"build", "random"}));
    add_dataset_flags(cmd_cluster, cl_ds, false);
    cmd_cluster->add_option("--out", cl_out, "output directory")->required();

    // ---- quality ----
    std::string q_matrix, q_assignment, q_out, q_init = "build", q_range;
    std::uint64_t q_seed = 0;
    auto* cmd_quality = app.add_subcommand("quality", "clustering quality indices");
    cmd_quality->add_option("--matrix", q_matrix, "dissimilarity matrix file")->required();
    cmd_quality->add_option("--k-range", q_range, "a:b sweep of cluster counts");
    cmd_quality->add_option("--assignment", q_assignment, "score an existing assignment CSV");
    cmd_quality->add_option("--seed", q_seed, "random seed");
    cmd_quality->add_option("--init", q_init, "build|random")->check(CLI::IsMember({"build", "random"}));
    cmd_quality->add_option("--out", q_out, "quality table path (default stdout)");

    // ---- agree ----
    DatasetFlags ag_ds;
    std::string ag_assignment, ag_assignment2, ag_benchmark, ag_out;
    auto* cmd_agree = app.add_subcommand("agree", "agreement between a clustering and a benchmark");
    add_dataset_flags(cmd_agree, ag_ds);
    cmd_agree->add_option("--assignment", ag_assignment, "assignment CSV")->required();
    cmd_agree->add_option("--assignment2", ag_assignment2, "second assignment CSV to compare against");
    cmd_agree->add_option("--benchmark", ag_benchmark, "label column in the input file");
    cmd_agree->add_option("--out", ag_out, "output JSON path (default stdout)");

    // ---- mantel ----
    std::vector<std::string> mt_paths;
    std::string mt_out;
    int mt_perms = 999, mt_threads = 1;
    std::uint64_t mt_seed = 0;
    bool mt_spearman = false;
    auto* cmd_mantel = app.add_subcommand("mantel", "matrix correlation with a permutation test");
    cmd_mantel->add_option("--matrices", mt_paths, "two or more matrix files")->required()->expected(-2);
    cmd_mantel->add_option("--permutations", mt_perms, "permutation count (default 999)");
    cmd_mantel->add_option("--seed", mt_seed, "random seed");
    cmd_mantel->add_flag("--spearman", mt_spearman, "rank correlation instead of Pearson");
    cmd_mantel->add_option("--threads", mt_threads, "worker threads");
    cmd_mantel->add_option("--out", mt_out, "output directory for r/p tables");

    // ---- sweep ----
    DatasetFlags sw_ds;
    MeasureFlags sw_measure;
    std::string sw_out, sw_benchmark, sw_init = "build";
    int sw_k = 0, sw_threads = 1;
    std::uint64_t sw_seed = 0;
    double sw_start = 0.0, sw_stop = 0.4, sw_step = 0.01;
    auto* cmd_sweep = app.add_subcommand("sweep", "indel-parameter sensitivity scan (g = 1 - 2e)");
    add_dataset_flags(cmd_sweep, sw_ds);
    add_measure_flags(cmd_sweep, sw_measure);
    cmd_sweep->add_option("--k", sw_k, "cluster count")->required();
    cmd_sweep->add_option("--seed", sw_seed, "random seed");
    cmd_sweep->add_option("--init", sw_init, "build|random")->check(CLI::IsMember({"build", "random"}));
    cmd_sweep->add_option("--benchmark", sw_benchmark, "label column in the input file")->required();
    cmd_sweep->add_option("--e-start", sw_start, "grid start (default 0)");
    cmd_sweep->add_option("--e-stop", sw_stop, "grid stop (default 0.4)");
    cmd_sweep->add_option("--e-step", sw_step, "grid step (default 0.01)");
    cmd_sweep->add_option("--threads", sw_threads, "worker threads");
    cmd_sweep->add_option("--out", sw_out, "output directory")->required();

    // ---- alluvial ----
    DatasetFlags al_ds;
    std::vector<std::string> al_assignments;
    std::string al_benchmark, al_out;
    auto* cmd_alluvial = app.add_subcommand("alluvial", "flow table between consecutive clusterings");
    add_dataset_flags(cmd_alluvial, al_ds, false);
    cmd_alluvial->add_option("--benchmark", al_benchmark, "label column used as the first stage");
    cmd_alluvial->add_option("--assignments", al_assignments, "assignment CSVs, one per stage")
        ->required()
        ->expected(-1);
    cmd_alluvial->add_option("--out", al_out, "flow table path (default stdout)");

    // ---- pipeline ----
    std::string pl_config;
    std::vector<std::string> pl_set, pl_flags;
    auto* cmd_pipeline = app.add_subcommand("pipeline", "run ingest -> encode -> costs -> matrix -> "
                                                        "cluster -> evaluate and write a bundle");
    cmd_pipeline->add_option("--config", pl_config, "flat key=value config file");
    cmd_pipeline->add_option("--set", pl_set, "config overrides as key=value")->expected(-1);
    // the common flags, applied on top of the config file
    auto pl_key = [&pl_flags](const std::string& key) {
        return [&pl_flags, key](const CLI::results_t& r) {
            pl_flags.push_back(key + "=" + r[0]);
            return true;
        };
    };
    cmd_pipeline->add_option("--input", pl_key("input"), "dataset CSV");
    cmd_pipeline->add_option("--format", pl_key("format"), "long|wide");
    cmd_pipeline->add_option("--scheme", pl_key("scheme"), "encoding scheme CSV");
    cmd_pipeline->add_option("--measure", pl_key("measure"), "OMlev|OMtr|OMsf|LOMtr|LOMsf");
    cmd_pipeline->add_option("--q", pl_key("q"), "transition lag");
    cmd_pipeline->add_option("--e", pl_key("e"), "localized indel weight on gamma_max");
    cmd_pipeline->add_option("--g", pl_key("g"), "localized indel weight on the neighbor mean");
    cmd_pipeline->add_option("--k", pl_key("k"), "cluster count");
    cmd_pipeline->add_option("--k-range", pl_key("k_range"), "a:b sweep of cluster counts");
    cmd_pipeline->add_option("--seed", pl_key("seed"), "random seed");
    cmd_pipeline->add_option("--init", pl_key("init"), "build|random");
    cmd_pipeline->add_option("--benchmark", pl_key("benchmark"), "label column in the input file");
    cmd_pipeline->add_option("--out", pl_key("out"), "bundle directory");
    cmd_pipeline->add_option("--threads", pl_key("threads"), "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_stats->parsed()) {
            std::vector<std::string> warnings;
            const SequenceDataset ds = load_flagged(stats_ds, &warnings);
            print_warnings(warnings);
            emit_json(stats_out, stats_json(dataset_stats(ds)));
        } else if (cmd_encode->parsed()) {
            std::vector<std::string> warnings;
            if (enc_ds.scheme.empty()) throw ConfigError("encode requires --scheme");
            const SequenceDataset ds = load_flagged(enc_ds, &warnings);
            print_warnings(warnings);
            save_dataset(ds, enc_out);
        } else if (cmd_costs->parsed()) {
            const SequenceDataset ds = load_flagged(costs_ds);
            const CostScheme scheme = make_cost_scheme(costs_measure.measure, ds, to_cost_options(costs_measure));
            fs::create_directories(costs_out);
            scheme.substitution.save((fs::path(costs_out) / "substitution.csv").string());
            json j{{"name", scheme.name},
                   {"gamma_max", scheme.substitution.gamma_max()},
                   {"lag", scheme.lag},
                   {"alphabet_size", scheme.substitution.size()}};
            j["indel"] = scheme.indel.kind == IndelModel::Kind::Constant
                             ? json{{"kind", "constant"}, {"c", scheme.indel.c}}
                             : json{{"kind", "localized"}, {"e", scheme.indel.e}, {"g", scheme.indel.g}};
            emit_json((fs::path(costs_out) / "costscheme.json").string(), j);
        } else if (cmd_distmat->parsed()) {
            const SequenceDataset ds = load_flagged(dm_ds);
            const CostScheme scheme = make_cost_scheme(dm_measure.measure, ds, to_cost_options(dm_measure));
            PairwiseOptions opt;
            opt.dedupe = !dm_no_dedupe;
            opt.threads = dm_threads;
            if (dm_normalize == "maxlen") opt.normalize = PairwiseOptions::Normalize::MaxLen;
            write_matrix(pairwise_matrix(ds, scheme, opt), dm_out, dm_binary);
        } else if (cmd_cluster->parsed()) {
            const DissimilarityMatrix m = read_matrix(cl_matrix);
            const MedoidInit init = cl_init == "random" ? MedoidInit::Random : MedoidInit::Build;
            if (init == MedoidInit::Random && cmd_cluster->count("--seed") == 0)
                throw ConfigError("random init requires an explicit --seed");
            ClusterAssignment a;
            std::vector<std::string> ids = m.labels();
            if (!cl_ds.input.empty()) {
                const SequenceDataset ds = load_flagged(cl_ds);
                if (ds.case_ids() != m.labels())
                    throw DataError("matrix labels do not match the dataset case order");
                a = cluster_distinct(ds, m, cl_k, cl_seed, init);
            } else {
                a = weighted_k_medoids(m, cl_k, cl_seed, init);
            }
            fs::create_directories(cl_out);
            emit((fs::path(cl_out) / "assignment.csv").string(), assignment_csv(ids, a.labels));
            json cj{{"k", a.k}, {"objective", a.objective}};
            json medoids = json::array();
            for (std::size_t mi : a.medoids) medoids.push_back(ids[mi]);
            cj["medoids"] = medoids;
            emit_json((fs::path(cl_out) / "cluster.json").string(), cj);
        } else if (cmd_quality->parsed()) {
            const DissimilarityMatrix m = read_matrix(q_matrix);
            const MedoidInit init = q_init == "random" ? MedoidInit::Random : MedoidInit::Build;
            if (init == MedoidInit::Random && cmd_quality->count("--seed") == 0)
                throw ConfigError("random init requires an explicit --seed");
            std::vector<QualityRow> rows;
            if (!q_range.empty()) {
                const auto colon = q_range.find(':');
                if (colon == std::string::npos) throw ConfigError("--k-range must be a:b");
                rows = quality_over_k(m, static_cast<int>(parse_long(q_range.substr(0, colon), "k-range")),
                                      static_cast<int>(parse_long(q_range.substr(colon + 1), "k-range")),
                                      q_seed, init);
            } else if (!q_assignment.empty()) {
                ClusterAssignment a;
                a.labels = read_assignment(q_assignment, m.labels());
                a.k = *std::max_element(a.labels.begin(), a.labels.end()) + 1;
                QualityRow row;
                row.k = a.k;
                row.values = cluster_quality(m, a);
                rows = {row};
                standardize_quality(rows);
            } else {
                throw ConfigError("quality needs --k-range or --assignment");
            }
            emit(q_out, quality_csv(rows));
        } else if (cmd_agree->parsed()) {
            const SequenceDataset ds = load_flagged(ag_ds);
            const std::vector<std::string> ids = ds.case_ids();
            const std::vector<int> a = read_assignment(ag_assignment, ids);
            std::vector<int> b;
            if (!ag_assignment2.empty()) {
                b = read_assignment(ag_assignment2, ids);
            } else if (!ag_benchmark.empty()) {
                b = encode_labels(ds.attribute(ag_benchmark));
            } else {
                throw ConfigError("agree needs --benchmark or --assignment2");
            }
            const AgreementReport rep = agreement_report(b, a, ds.weights());
            if (rep.ami_rounded)
                std::cerr << "warning: non-integer weights rounded for expected mutual information\n";
            emit_json(ag_out, json{{"ari", rep.ari},
                                   {"ami", rep.ami},
                                   {"fms", rep.fms},
                                   {"n", rep.n},
                                   {"r", rep.r},
                                   {"s", rep.s}});
        } else if (cmd_mantel->parsed()) {
            std::vector<DissimilarityMatrix> ms;
            std::vector<std::string> names;
            ms.reserve(mt_paths.size());
            for (const auto& p : mt_paths) {
                ms.push_back(read_matrix(p));
                std::string name = ms.back().scheme_name();
                if (name.empty() || std::count(names.begin(), names.end(), name))
                    name = fs::path(p).stem().string();
                names.push_back(name);
            }
            MantelOptions opt;
            opt.spearman = mt_spearman;
            opt.threads = mt_threads;
            const MantelReport rep = mantel_report(ms, names, mt_perms, mt_seed, opt);
            if (!mt_out.empty()) {
                fs::create_directories(mt_out);
                emit((fs::path(mt_out) / "mantel_r.csv").string(), mantel_r_csv(rep));
                emit((fs::path(mt_out) / "mantel_p.csv").string(), mantel_p_csv(rep));
            }
            if (ms.size() == 2) {
                const json j{{"r", rep.r[1]},
                             {"permutations", rep.permutations},
                             {"p_value", rep.p[1]},
                             {"seed", rep.seed}};
                if (mt_out.empty()) emit_json("", j);
                else emit_json((fs::path(mt_out) / "mantel.json").string(), j);
            } else if (mt_out.empty()) {
                emit("", mantel_r_csv(rep));
            }
        } else if (cmd_sweep->parsed()) {
            PipelineConfig cfg;
            cfg.input = sw_ds.input;
            cfg.format = parse_format(sw_ds.format);
            cfg.scheme = sw_ds.scheme;
            cfg.strict_encoding = !sw_ds.no_strict;
            cfg.measure = sw_measure.measure;
            cfg.q = sw_measure.q;
            cfg.weighted_rates = !sw_measure.unweighted;
            cfg.denominator = sw_measure.denominator == "all" ? RateDenominator::All
                                                              : RateDenominator::Successor;
            cfg.normalize_max2 = !sw_measure.raw_costs;
            cfg.k = sw_k;
            cfg.seed = sw_seed;
            cfg.seed_set = cmd_sweep->count("--seed") > 0;
            cfg.init = sw_init == "random" ? MedoidInit::Random : MedoidInit::Build;
            cfg.benchmark = sw_benchmark;
            cfg.threads = sw_threads;
            const SweepResult sweep = sensitivity_sweep(cfg, {sw_start, sw_stop, sw_step});
            fs::create_directories(sw_out);
            emit((fs::path(sw_out) / "sweep.csv").string(), sweep_to_csv(sweep));
            const SweepRow& best = sweep.rows[sweep.optimum];
            emit_json((fs::path(sw_out) / "sweep_optimum.json").string(),
                      json{{"e", best.e}, {"g", best.g}, {"ari", best.ari}, {"ami", best.ami},
                           {"fms", best.fms}, {"k", sw_k}, {"seed", sw_seed}});
        } else if (cmd_alluvial->parsed()) {
            std::vector<std::pair<std::string, std::vector<std::string>>> stages;
            std::vector<std::string> ids;
            std::vector<double> weights;
            if (!al_ds.input.empty()) {
                const SequenceDataset ds = load_flagged(al_ds);
                ids = ds.case_ids();
                weights = ds.weights();
                if (!al_benchmark.empty()) stages.emplace_back(al_benchmark, ds.attribute(al_benchmark));
            } else if (!al_benchmark.empty()) {
                throw ConfigError("--benchmark needs --input");
            }
            for (const auto& path : al_assignments) {
                if (ids.empty()) {
                    // No dataset: take case order from the first file, unit weights.
                    const csv::Table t = csv::read_file(path);
                    for (const auto& row : t.rows) ids.push_back(row.at(0));
                    weights.assign(ids.size(), 1.0);
                }
                stages.emplace_back(fs::path(path).stem().string(), read_label_column(path, ids));
            }
            emit(al_out, flows_to_csv(alluvial_export(stages, weights)));
        } else if (cmd_pipeline->parsed()) {
            PipelineConfig cfg;
            if (!pl_config.empty()) cfg = parse_config_file(pl_config);
            for (const auto& kv : pl_flags) {
                const auto eq = kv.find('=');
                apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1), "--" + kv.substr(0, eq));
            }
            for (const auto& kv : pl_set) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
                apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1), "--set " + kv);
            }
            const PipelineResult result = run_pipeline(cfg);
            print_warnings(result.warnings);
            std::cerr << "bundle written to " << cfg.out_dir << " (" << result.outputs.size()
                      << " files)\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DegeneracyError& e) {
        std::cerr << "degeneracy: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
