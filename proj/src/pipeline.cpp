#include "seqa/pipeline.hpp"

#include "seqa/csv.hpp"
#include "seqa/error.hpp"
#include "seqa/format.hpp"
#include "seqa/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

namespace fs = std::filesystem;
using nlohmann::json;

namespace seqa {

namespace {

const std::set<std::string> kMeasures = {"OMlev", "OMtr", "OMsf", "LOMtr", "LOMsf"};

bool parse_bool(const std::string& v, const std::string& where) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(where + ": expected a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

void validate_config(const PipelineConfig& cfg) {
    if (cfg.input.empty()) throw ConfigError("input path is required");
    if (!kMeasures.count(cfg.measure)) throw ConfigError("unknown measure '" + cfg.measure + "'");
    if (cfg.q < 1) throw ConfigError("q must be >= 1");
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    const bool localized = is_localized_measure(cfg.measure);
    if (localized) {
        if (!cfg.e || !cfg.g) throw ConfigError(cfg.measure + " requires e and g");
        if (*cfg.e < 0 || *cfg.g < 0) throw ConfigError("e and g must be nonnegative");
        if (2 * *cfg.e + *cfg.g < 1)
            throw ConfigError("indel parameters must satisfy 2e + g >= 1 (got e=" + format_g17(*cfg.e) +
                              ", g=" + format_g17(*cfg.g) + ")");
    } else if (cfg.e || cfg.g) {
        throw ConfigError("e/g apply only to LOMtr and LOMsf");
    }
    if (cfg.k && cfg.k_range) throw ConfigError("k and k_range are mutually exclusive");
    if (cfg.k && *cfg.k < 1) throw ConfigError("k must be >= 1");
    if (cfg.k_range) {
        const auto [lo, hi] = *cfg.k_range;
        if (lo < 2 || hi < lo) throw ConfigError("k_range must satisfy 2 <= lo <= hi");
    }
    if (cfg.init == MedoidInit::Random && !cfg.seed_set)
        throw ConfigError("random init requires an explicit seed");
}

void apply_config_entry(PipelineConfig& cfg, const std::string& key, const std::string& value,
                        const std::string& where) {
    if (key == "input") cfg.input = value;
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "scheme") cfg.scheme = value;
    else if (key == "strict") cfg.strict_encoding = parse_bool(value, where);
    else if (key == "measure") cfg.measure = value;
    else if (key == "q") cfg.q = static_cast<int>(parse_long(value, where));
    else if (key == "weighted") cfg.weighted_rates = parse_bool(value, where);
    else if (key == "denominator") {
        if (value == "successor") cfg.denominator = RateDenominator::Successor;
        else if (value == "all") cfg.denominator = RateDenominator::All;
        else throw ConfigError(where + ": denominator must be successor or all");
    } else if (key == "normalize") cfg.normalize_max2 = parse_bool(value, where);
    else if (key == "e") cfg.e = parse_double(value, where);
    else if (key == "g") cfg.g = parse_double(value, where);
    else if (key == "k") cfg.k = static_cast<int>(parse_long(value, where));
    else if (key == "k_range") {
        const auto colon = value.find(':');
        if (colon == std::string::npos) throw ConfigError(where + ": k_range must be lo:hi");
        cfg.k_range = {static_cast<int>(parse_long(value.substr(0, colon), where)),
                       static_cast<int>(parse_long(value.substr(colon + 1), where))};
    } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_long(value, where));
        cfg.seed_set = true;
    }
    else if (key == "init") {
        if (value == "build") cfg.init = MedoidInit::Build;
        else if (value == "random") cfg.init = MedoidInit::Random;
        else throw ConfigError(where + ": init must be build or random");
    } else if (key == "benchmark") cfg.benchmark = value;
    else if (key == "out") cfg.out_dir = value;
    else if (key == "threads") cfg.threads = static_cast<int>(parse_long(value, where));
    else if (key == "dedupe") cfg.dedupe = parse_bool(value, where);
    else if (key == "binary") cfg.binary_matrix = parse_bool(value, where);
    else throw ConfigError(where + ": unknown key '" + key + "'");
}

PipelineConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    PipelineConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
        apply_config_entry(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)),
                           path + ":" + std::to_string(line_no));
    }
    return cfg;
}

AgreementReport agreement_report(const std::vector<int>& x, const std::vector<int>& y,
                                 const std::vector<double>& weights) {
    const ContingencyTable ct(x, y, weights);
    AgreementReport rep;
    rep.ari = ari(ct);
    rep.ami = ami(ct, false, &rep.ami_rounded);
    rep.fms = fms(ct);
    rep.n = x.size();
    rep.r = ct.rows();
    rep.s = ct.cols();
    return rep;
}

namespace {

// Removes everything written so far if a stage fails, so an aborted run
// leaves no partial bundle behind.
class BundleWriter {
public:
    explicit BundleWriter(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    void write_text(const std::string& name, const std::string& text) {
        std::ofstream out(path(name), std::ios::binary);
        if (!out) throw DataError("cannot write " + path(name));
        out << text;
        if (!out) throw DataError("write failed: " + path(name));
        written_.push_back(name);
    }

    void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

    void note(const std::string& name) { written_.push_back(name); }

    void remove_all() {
        for (const auto& name : written_) {
            std::error_code ec;
            fs::remove(dir_ / name, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    fs::path dir_;
    std::vector<std::string> written_;
};

json stats_to_json(const DatasetStats& st) {
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

json scheme_to_json(const CostScheme& scheme) {
    json j{{"name", scheme.name},
           {"alphabet_size", scheme.substitution.size()},
           {"gamma_max", scheme.substitution.gamma_max()},
           {"lag", scheme.lag}};
    if (scheme.indel.kind == IndelModel::Kind::Constant) {
        j["indel"] = {{"kind", "constant"}, {"c", scheme.indel.c}};
    } else {
        j["indel"] = {{"kind", "localized"}, {"e", scheme.indel.e}, {"g", scheme.indel.g}};
    }
    if (scheme.name == "OMsf" || scheme.name == "LOMsf") j["normalize_max2"] = scheme.normalize_max2;
    return j;
}

json config_to_json(const PipelineConfig& cfg) {
    json j{{"input", cfg.input},
           {"format", cfg.format == FileFormat::Long ? "long" : "wide"},
           {"measure", cfg.measure},
           {"q", cfg.q},
           {"weighted", cfg.weighted_rates},
           {"denominator", cfg.denominator == RateDenominator::Successor ? "successor" : "all"},
           {"normalize", cfg.normalize_max2},
           {"seed", cfg.seed},
           {"init", cfg.init == MedoidInit::Build ? "build" : "random"},
           {"threads", cfg.threads},
           {"dedupe", cfg.dedupe},
           {"binary", cfg.binary_matrix},
           {"strict", cfg.strict_encoding}};
    if (!cfg.scheme.empty()) j["scheme"] = cfg.scheme;
    if (cfg.e) j["e"] = *cfg.e;
    if (cfg.g) j["g"] = *cfg.g;
    if (cfg.k) j["k"] = *cfg.k;
    if (cfg.k_range) j["k_range"] = std::to_string(cfg.k_range->first) + ":" + std::to_string(cfg.k_range->second);
    if (!cfg.benchmark.empty()) j["benchmark"] = cfg.benchmark;
    if (!cfg.out_dir.empty()) j["out"] = cfg.out_dir;
    return j;
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

std::string assignment_csv(const SequenceDataset& ds, const ClusterAssignment& a) {
    std::string out = "case_id,cluster\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out += csv::quote_field(ds.sequences()[i].case_id);
        out.push_back(',');
        out += std::to_string(a.labels[i]);
        out.push_back('\n');
    }
    return out;
}

std::string representatives_csv(const SequenceDataset& ds, const std::vector<Representative>& reps) {
    std::string out = "cluster,share,events\n";
    for (const auto& rep : reps) {
        std::string events;
        for (std::size_t j = 0; j < rep.events.size(); ++j) {
            if (j) events.push_back(';');
            events += ds.alphabet().code(rep.events[j]);
        }
        out += std::to_string(rep.cluster);
        out.push_back(',');
        out += format_g17(rep.share);
        out.push_back(',');
        out += csv::quote_field(events);
        out.push_back('\n');
    }
    return out;
}

json agreement_to_json(const AgreementReport& rep) {
    return json{{"ari", rep.ari}, {"ami", rep.ami}, {"fms", rep.fms},
                {"n", rep.n},     {"r", rep.r},     {"s", rep.s}};
}

template <typename F>
auto run_stage(const char* stage, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        throw ConfigError("stage " + std::string(stage) + ": " + e.what());
    } catch (const DegeneracyError& e) {
        throw DegeneracyError("stage " + std::string(stage) + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage " + std::string(stage) + ": " + e.what());
    } catch (const std::exception& e) {
        throw DataError("stage " + std::string(stage) + ": " + e.what());
    }
}

CostOptions cost_options(const PipelineConfig& cfg) {
    CostOptions opt;
    opt.lag = cfg.q;
    opt.weighted = cfg.weighted_rates;
    opt.denominator = cfg.denominator;
    opt.normalize_max2 = cfg.normalize_max2;
    if (cfg.e) opt.e = *cfg.e;
    if (cfg.g) opt.g = *cfg.g;
    return opt;
}

std::vector<int> benchmark_indices(const SequenceDataset& ds, const std::string& column) {
    return encode_labels(ds.attribute(column));
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    run_stage("config", [&] {
        validate_config(cfg);
        if (cfg.out_dir.empty()) throw ConfigError("out directory is required");
        if (!cfg.k && !cfg.k_range) throw ConfigError("k or k_range is required");
    });

    PipelineResult result;
    BundleWriter bundle(cfg.out_dir);
    try {
        SequenceDataset ds = run_stage("load", [&] { return load_dataset(cfg.input, cfg.format); });

        if (!cfg.scheme.empty()) {
            EncodedDataset enc = run_stage("encode", [&] {
                return apply_encoding(ds, load_encoding_scheme(cfg.scheme), cfg.strict_encoding);
            });
            ds = std::move(enc.dataset);
            for (const auto& code : enc.unmapped_codes)
                result.warnings.push_back("unmapped code passed through: " + code);
        }
        if (!cfg.benchmark.empty())
            run_stage("load", [&] { return ds.attribute(cfg.benchmark); }); // fail early if absent

        run_stage("stats", [&] {
            result.stats = dataset_stats(ds);
            bundle.write_json("stats.json", stats_to_json(result.stats));
            return 0;
        });

        run_stage("costs", [&] {
            result.scheme = make_cost_scheme(cfg.measure, ds, cost_options(cfg));
            bundle.write_text("substitution.csv", result.scheme.substitution.to_csv());
            bundle.write_json("costscheme.json", scheme_to_json(result.scheme));
            return 0;
        });

        run_stage("distmat", [&] {
            PairwiseOptions opt;
            opt.dedupe = cfg.dedupe;
            opt.threads = cfg.threads;
            result.matrix = pairwise_matrix(ds, result.scheme, opt);
            const std::string name = cfg.binary_matrix ? "distmat.bin" : "distmat.txt";
            write_matrix(result.matrix, bundle.path(name), cfg.binary_matrix);
            bundle.note(name);
            return 0;
        });

        if (cfg.k) {
            run_stage("cluster", [&] {
                result.assignment = cluster_distinct(ds, result.matrix, *cfg.k, cfg.seed, cfg.init);
                bundle.write_text("assignment.csv", assignment_csv(ds, *result.assignment));
                json cj{{"k", result.assignment->k}, {"objective", result.assignment->objective}};
                json medoids = json::array();
                for (std::size_t mi : result.assignment->medoids)
                    medoids.push_back(ds.sequences()[mi].case_id);
                cj["medoids"] = medoids;
                bundle.write_json("cluster.json", cj);
                return 0;
            });

            run_stage("quality", [&] {
                if (*cfg.k >= 2 && ds.size() >= 2) {
                    QualityRow row;
                    row.k = *cfg.k;
                    row.values = cluster_quality(result.matrix, *result.assignment);
                    result.quality = {row};
                    bundle.write_text("quality.csv", quality_csv(result.quality));
                }
                return 0;
            });

            run_stage("representatives", [&] {
                result.representatives = representative_sequences(ds, *result.assignment);
                bundle.write_text("representatives.csv", representatives_csv(ds, result.representatives));
                return 0;
            });

            if (!cfg.benchmark.empty()) {
                run_stage("agree", [&] {
                    result.agreement = agreement_report(benchmark_indices(ds, cfg.benchmark),
                                                        result.assignment->labels, ds.weights());
                    if (result.agreement->ami_rounded)
                        result.warnings.push_back(
                            "non-integer weights rounded for expected mutual information");
                    bundle.write_json("agreement.json", agreement_to_json(*result.agreement));
                    return 0;
                });
            }
        } else {
            run_stage("quality", [&] {
                const auto [lo, hi] = *cfg.k_range;
                const DistinctSequences uniq = distinct_sequences(ds);
                const DissimilarityMatrix um = result.matrix.submatrix(uniq.first_case, uniq.weights);
                result.quality.clear();
                for (int k = lo; k <= hi; ++k) {
                    const ClusterAssignment ua =
                        weighted_k_medoids(um, k, mix_seed(cfg.seed, static_cast<std::uint64_t>(k)), cfg.init);
                    ClusterAssignment a;
                    a.k = ua.k;
                    a.labels.reserve(ds.size());
                    for (std::size_t i = 0; i < ds.size(); ++i)
                        a.labels.push_back(ua.labels[uniq.case_to_unique[i]]);
                    QualityRow row;
                    row.k = k;
                    row.values = cluster_quality(result.matrix, a);
                    result.quality.push_back(row);
                }
                standardize_quality(result.quality);
                bundle.write_text("quality.csv", quality_csv(result.quality));
                return 0;
            });
        }

        run_stage("manifest", [&] {
            json manifest{{"command", "pipeline"}, {"config", config_to_json(cfg)}};
            json outputs = json::array();
            for (const auto& name : bundle.written()) outputs.push_back(name);
            outputs.push_back("manifest.json");
            manifest["outputs"] = outputs;
            if (!result.warnings.empty()) manifest["warnings"] = result.warnings;
            bundle.write_json("manifest.json", manifest);
            return 0;
        });
    } catch (...) {
        bundle.remove_all();
        throw;
    }
    result.outputs = bundle.written();
    return result;
}

SweepResult sensitivity_sweep(const PipelineConfig& cfg, const SweepGrid& grid) {
    {
        // e/g come from the grid; fill placeholders for validation.
        PipelineConfig v = cfg;
        if (is_localized_measure(v.measure)) {
            if (!v.e) v.e = 0.0;
            if (!v.g) v.g = 1.0;
        }
        validate_config(v);
    }
    if (!is_localized_measure(cfg.measure))
        throw ConfigError("sensitivity sweep applies to LOMtr and LOMsf only");
    if (cfg.benchmark.empty()) throw ConfigError("sensitivity sweep requires a benchmark column");
    if (!cfg.k) throw ConfigError("sensitivity sweep requires a single k");
    if (!(grid.step > 0)) throw ConfigError("sweep step must be positive");
    if (grid.start < 0 || grid.stop < grid.start || grid.stop > 0.5)
        throw ConfigError("sweep grid must satisfy 0 <= start <= stop <= 0.5");

    SequenceDataset ds = load_dataset(cfg.input, cfg.format);
    if (!cfg.scheme.empty())
        ds = apply_encoding(ds, load_encoding_scheme(cfg.scheme), cfg.strict_encoding).dataset;
    const std::vector<int> bench = benchmark_indices(ds, cfg.benchmark);
    const std::vector<double> weights = ds.weights();

    // The substitution matrix does not depend on e/g; build it once.
    CostScheme base = make_cost_scheme(cfg.measure, ds, cost_options(cfg));

    const int count = static_cast<int>(std::floor((grid.stop - grid.start) / grid.step + 1e-9)) + 1;
    SweepResult sweep;
    sweep.rows.reserve(static_cast<std::size_t>(count));
    PairwiseOptions popt;
    popt.dedupe = cfg.dedupe;
    popt.threads = cfg.threads;
    for (int i = 0; i < count; ++i) {
        const double e = grid.start + static_cast<double>(i) * grid.step;
        const double g = 1.0 - 2.0 * e;
        CostScheme scheme = base;
        scheme.indel = IndelModel::localized(e, g);
        const DissimilarityMatrix m = pairwise_matrix(ds, scheme, popt);
        const ClusterAssignment a = cluster_distinct(ds, m, *cfg.k, cfg.seed, cfg.init);
        const AgreementReport rep = agreement_report(bench, a.labels, weights);
        sweep.rows.push_back({e, g, rep.ari, rep.ami, rep.fms});
        if (rep.ari > sweep.rows[sweep.optimum].ari) sweep.optimum = sweep.rows.size() - 1;
    }
    return sweep;
}

std::string sweep_to_csv(const SweepResult& sweep) {
    std::string out = "e,g,ari,ami,fms\n";
    for (const auto& r : sweep.rows) {
        out += format_g17(r.e);
        for (double v : {r.g, r.ari, r.ami, r.fms}) {
            out.push_back(',');
            out += format_g17(v);
        }
        out.push_back('\n');
    }
    return out;
}

MantelReport mantel_report(const std::vector<DissimilarityMatrix>& matrices,
                           const std::vector<std::string>& names, int permutations,
                           std::uint64_t seed, const MantelOptions& options) {
    if (matrices.size() < 2) throw ConfigError("mantel report needs at least two matrices");
    if (names.size() != matrices.size()) throw ConfigError("matrix/name count mismatch");
    for (std::size_t i = 1; i < matrices.size(); ++i)
        if (matrices[i].labels() != matrices[0].labels())
            throw DataError("matrix label mismatch between " + names[0] + " and " + names[i]);

    const std::size_t n = matrices.size();
    MantelReport rep;
    rep.names = names;
    rep.permutations = permutations;
    rep.seed = seed;
    rep.r.assign(n * n, 0.0);
    rep.p.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) rep.r[i * n + i] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const MantelResult mr = mantel_test(matrices[i], matrices[j], permutations,
                                                mix_seed(seed, i * n + j), options);
            rep.r[i * n + j] = rep.r[j * n + i] = mr.r;
            rep.p[i * n + j] = rep.p[j * n + i] = mr.p_value;
        }
    return rep;
}

static std::string mantel_csv(const MantelReport& rep, const std::vector<double>& cells) {
    const std::size_t n = rep.names.size();
    std::vector<std::string> header = {""};
    for (const auto& name : rep.names) header.push_back(name);
    std::string out = csv::join_record(header);
    out.push_back('\n');
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row = {rep.names[i]};
        for (std::size_t j = 0; j < n; ++j)
            row.push_back(i == j ? "" : format_g17(cells[i * n + j]));
        out += csv::join_record(row);
        out.push_back('\n');
    }
    return out;
}

std::string mantel_r_csv(const MantelReport& rep) { return mantel_csv(rep, rep.r); }
std::string mantel_p_csv(const MantelReport& rep) { return mantel_csv(rep, rep.p); }

std::vector<Flow> alluvial_export(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& stages,
    const std::vector<double>& weights) {
    if (stages.size() < 2) throw ConfigError("alluvial export needs at least two label sets");
    for (const auto& [name, labels] : stages)
        if (labels.size() != weights.size())
            throw DataError("label set '" + name + "' length mismatch");

    std::vector<Flow> flows;
    for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
        const auto& [from_name, from] = stages[s];
        const auto& [to_name, to] = stages[s + 1];
        std::map<std::pair<std::string, std::string>, std::size_t> index;
        std::vector<Flow> local;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const auto key = std::make_pair(from[i], to[i]);
            auto [it, inserted] = index.emplace(key, local.size());
            if (inserted) local.push_back({from_name, from[i], to_name, to[i], 0.0});
            local[it->second].weight += weights[i];
        }
        flows.insert(flows.end(), local.begin(), local.end());
    }
    return flows;
}

std::string flows_to_csv(const std::vector<Flow>& flows) {
    std::string out = "stage_from,category_from,stage_to,category_to,weight\n";
    for (const auto& f : flows) {
        out += csv::join_record({f.stage_from, f.category_from, f.stage_to, f.category_to,
                                 format_g17(f.weight)});
        out.push_back('\n');
    }
    return out;
}

} // namespace seqa
