#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "seqa/align.hpp"
#include "seqa/error.hpp"
#include "seqa/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace seqa;
namespace fs = std::filesystem;

namespace {

std::string data_file(const std::string& name) { return std::string(DATA_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("seqa_test_" + tag)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

PipelineConfig fixture_config(const fs::path& out) {
    PipelineConfig cfg;
    cfg.input = data_file("synthetic60.csv");
    cfg.format = FileFormat::Long;
    cfg.measure = "OMlev";
    cfg.k = 3;
    cfg.seed = 7;
    cfg.benchmark = "truth";
    cfg.out_dir = out.string();
    return cfg;
}

std::map<std::string, std::string> read_bundle(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        files[entry.path().filename().string()] = slurp(entry.path());
    return files;
}

} // namespace

TEST_CASE("config parsing is strict about keys and values") {
    const fs::path p = fs::temp_directory_path() / "seqa_cfg.txt";
    {
        std::ofstream out(p);
        out << "# comment\n"
            << "input = data.csv\n"
            << "format = wide\n"
            << "measure = LOMtr\n"
            << "e = 0.1\ng = 0.8\n"
            << "k = 15\nseed = 3\nout = bundle\n";
    }
    const PipelineConfig cfg = parse_config_file(p.string());
    CHECK(cfg.input == "data.csv");
    CHECK(cfg.format == FileFormat::Wide);
    CHECK(cfg.measure == "LOMtr");
    CHECK(cfg.e == 0.1);
    CHECK(cfg.g == 0.8);
    CHECK(cfg.k == 15);
    CHECK_NOTHROW(validate_config(cfg));
    {
        std::ofstream out(p, std::ios::app);
        out << "typo_key = 1\n";
    }
    CHECK_THROWS_WITH_AS(parse_config_file(p.string()), doctest::Contains("unknown key"), ConfigError);
    fs::remove(p);
}

TEST_CASE("config validation catches inconsistent requests") {
    PipelineConfig cfg;
    cfg.input = "x.csv";
    cfg.out_dir = "out";
    cfg.measure = "LOMtr";
    cfg.k = 3;
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("requires e and g"), ConfigError);
    cfg.e = 0.3;
    cfg.g = 0.2; // 2e + g = 0.8
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("2e + g >= 1"), ConfigError);
    cfg.e = 0.4;
    cfg.g = 0.2; // exactly 1.0
    CHECK_NOTHROW(validate_config(cfg));

    cfg.measure = "OMlev";
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("apply only to"), ConfigError);
    cfg.e.reset();
    cfg.g.reset();
    cfg.k_range = {2, 6};
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("mutually exclusive"), ConfigError);
    cfg.k.reset();
    CHECK_NOTHROW(validate_config(cfg));
    cfg.k_range = {1, 6};
    CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("the pipeline writes a complete deterministic bundle") {
    TempDir dir("bundle");
    const PipelineConfig cfg = fixture_config(dir.path);
    const PipelineResult result = run_pipeline(cfg);

    for (const char* name : {"stats.json", "substitution.csv", "costscheme.json", "distmat.txt",
                             "assignment.csv", "cluster.json", "quality.csv", "representatives.csv",
                             "agreement.json", "manifest.json"})
        CHECK(fs::exists(dir.path / name));

    CHECK(result.stats.count == 60);
    CHECK(result.agreement.has_value());
    CHECK(result.agreement->r == 3);
    CHECK(result.agreement->s == 3);
    CHECK(result.agreement->ari > 0.8); // planted clusters are recoverable

    const auto first = read_bundle(dir.path);
    const PipelineResult again = run_pipeline(cfg);
    CHECK(read_bundle(dir.path) == first); // byte-identical rerun
    CHECK(again.assignment->labels == result.assignment->labels);

    // quality.csv carries the documented header
    CHECK(first.at("quality.csv").rfind("k,aswW,hg,pbc,hc,aswW_z,hg_z,pbc_z,hc_z\n", 0) == 0);
}

TEST_CASE("a failing stage removes partial outputs") {
    TempDir dir("fail");
    PipelineConfig cfg = fixture_config(dir.path);
    cfg.benchmark = "no_such_column";
    CHECK_THROWS_WITH_AS(run_pipeline(cfg), doctest::Contains("no such column"), DataError);
    CHECK(fs::exists(dir.path));
    CHECK(fs::is_empty(dir.path));
}

TEST_CASE("a k-range run emits the quality table instead of an assignment") {
    TempDir dir("range");
    PipelineConfig cfg = fixture_config(dir.path);
    cfg.k.reset();
    cfg.k_range = {2, 5};
    const PipelineResult result = run_pipeline(cfg);
    CHECK_FALSE(result.assignment.has_value());
    CHECK(result.quality.size() == 4);
    CHECK_FALSE(fs::exists(dir.path / "assignment.csv"));
    CHECK(fs::exists(dir.path / "quality.csv"));
    int best_k = 0;
    double best = -2;
    for (const auto& row : result.quality)
        if (row.values.aswW > best) {
            best = row.values.aswW;
            best_k = row.k;
        }
    CHECK(best_k == 3);
}

TEST_CASE("encoding inside the pipeline keeps the benchmark usable") {
    TempDir dir("encoded");
    PipelineConfig cfg = fixture_config(dir.path);
    // collapse the alphabet in half; attributes must survive
    const fs::path scheme = dir.path.parent_path() / "seqa_halve.csv";
    {
        std::ofstream out(scheme);
        out << "source,target,description\n";
        for (char c = 'A'; c <= 'H'; ++c)
            out << c << ",X" << ((c - 'A') / 2) << ",\n";
    }
    cfg.scheme = scheme.string();
    const PipelineResult result = run_pipeline(cfg);
    CHECK(result.stats.alphabet_size <= 4);
    CHECK(result.agreement.has_value());
    fs::remove(scheme);
}

TEST_CASE("sweep rows obey the g = 1 - 2e constraint exactly") {
    PipelineConfig cfg;
    cfg.input = data_file("synthetic60.csv");
    cfg.measure = "LOMtr";
    cfg.k = 3;
    cfg.seed = 5;
    cfg.benchmark = "truth";
    const SweepResult sweep = sensitivity_sweep(cfg, {0.0, 0.4, 0.01});
    REQUIRE(sweep.rows.size() == 41);
    for (const auto& row : sweep.rows) {
        CHECK(row.g == 1.0 - 2.0 * row.e);
        CHECK(2.0 * row.e + row.g == 1.0);
        CHECK(row.ari <= 1.0);
    }
    // the reported optimum is a rescan of the rows
    std::size_t best = 0;
    for (std::size_t i = 1; i < sweep.rows.size(); ++i)
        if (sweep.rows[i].ari > sweep.rows[best].ari) best = i;
    CHECK(sweep.optimum == best);

    const SweepResult single = sensitivity_sweep(cfg, {0.1, 0.1, 0.01});
    CHECK(single.rows.size() == 1);
    CHECK(single.optimum == 0);

    // csv round trip of the curve
    const std::string csv_text = sweep_to_csv(sweep);
    CHECK(csv_text.rfind("e,g,ari,ami,fms\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv_text)
        if (c == '\n') ++lines;
    CHECK(lines == 42);
}

TEST_CASE("sweep preconditions") {
    PipelineConfig cfg;
    cfg.input = data_file("synthetic60.csv");
    cfg.measure = "OMlev";
    cfg.k = 3;
    cfg.benchmark = "truth";
    CHECK_THROWS_WITH_AS(sensitivity_sweep(cfg, {}), doctest::Contains("LOMtr and LOMsf"),
                         ConfigError);
    cfg.measure = "LOMsf";
    cfg.benchmark = "";
    CHECK_THROWS_WITH_AS(sensitivity_sweep(cfg, {}), doctest::Contains("benchmark"), ConfigError);
    cfg.benchmark = "truth";
    CHECK_THROWS_AS(sensitivity_sweep(cfg, {0.2, 0.1, 0.01}), ConfigError);
    CHECK_THROWS_AS(sensitivity_sweep(cfg, {0.0, 0.6, 0.01}), ConfigError);
}

TEST_CASE("mantel report fills a symmetric table") {
    const SequenceDataset ds = load_dataset(data_file("synthetic60.csv"), FileFormat::Long);
    std::vector<DissimilarityMatrix> ms;
    std::vector<std::string> names;
    CostOptions lo;
    lo.e = 0.1;
    lo.g = 0.8;
    for (const std::string measure : {"OMlev", "OMtr", "OMsf", "LOMtr", "LOMsf"}) {
        ms.push_back(pairwise_matrix(ds, make_cost_scheme(measure, ds, lo)));
        names.push_back(measure);
    }
    const MantelReport rep = mantel_report(ms, names, 99, 11);
    const std::size_t n = names.size();
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(rep.r[i * n + i] == 1.0);
        for (std::size_t j = 0; j < n; ++j) {
            CHECK(rep.r[i * n + j] == rep.r[j * n + i]);
            if (i != j) {
                CHECK(rep.p[i * n + j] > 0.0);
                CHECK(rep.p[i * n + j] <= 1.0);
            }
        }
    }
    // identical matrices correlate exactly
    const MantelReport self = mantel_report({ms[0], ms[0]}, {"a", "b"}, 99, 3);
    CHECK(self.r[1] == 1.0);
    CHECK(self.p[1] == doctest::Approx(0.01).epsilon(1e-12));

    const std::string csv_text = mantel_r_csv(rep);
    CHECK(csv_text.rfind(",OMlev,OMtr,OMsf,LOMtr,LOMsf\n", 0) == 0);
}

TEST_CASE("alluvial flows conserve weight") {
    SUBCASE("identical stages only flow on the diagonal") {
        const std::vector<std::string> labels = {"x", "y", "x"};
        const auto flows = alluvial_export({{"s0", labels}, {"s1", labels}}, {1, 1, 1});
        REQUIRE(flows.size() == 2);
        for (const auto& f : flows) CHECK(f.category_from == f.category_to);
    }
    SUBCASE("the worked three-case example") {
        const auto flows = alluvial_export(
            {{"s0", {"1", "1", "2"}}, {"s1", {"1", "2", "2"}}}, {1, 1, 1});
        REQUIRE(flows.size() == 3);
        CHECK(flows[0].category_from == "1");
        CHECK(flows[0].category_to == "1");
        CHECK(flows[0].weight == 1.0);
        CHECK(flows[1].category_from == "1");
        CHECK(flows[1].category_to == "2");
        CHECK(flows[1].weight == 1.0);
        CHECK(flows[2].category_from == "2");
        CHECK(flows[2].category_to == "2");
        CHECK(flows[2].weight == 1.0);
    }
    SUBCASE("stage totals equal the dataset weight") {
        Rng rng(0xf10);
        const std::size_t n = 40;
        std::vector<double> w(n);
        double total = 0;
        for (auto& wi : w) {
            wi = 0.5 + rng.uniform();
            total += wi;
        }
        std::vector<std::pair<std::string, std::vector<std::string>>> stages;
        for (int s = 0; s < 3; ++s) {
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < n; ++i)
                labels.push_back("g" + std::to_string(rng.bounded(4)));
            stages.emplace_back("stage" + std::to_string(s), labels);
        }
        const auto flows = alluvial_export(stages, w);
        std::map<std::string, double> per_transition;
        for (const auto& f : flows) per_transition[f.stage_from + ">" + f.stage_to] += f.weight;
        REQUIRE(per_transition.size() == 2);
        for (const auto& [key, sum] : per_transition)
            CHECK(sum == doctest::Approx(total).epsilon(1e-9));
    }
    SUBCASE("length mismatches are rejected") {
        CHECK_THROWS_AS(alluvial_export({{"a", {"x"}}, {"b", {"x", "y"}}}, {1.0}), DataError);
        CHECK_THROWS_AS(alluvial_export({{"a", {"x"}}}, {1.0}), ConfigError);
    }
}

TEST_CASE("agreement report carries table shape") {
    const AgreementReport rep =
        agreement_report({0, 0, 1, 1}, {0, 1, 0, 1}, {1, 1, 1, 1});
    CHECK(rep.ari == -0.5);
    CHECK(rep.fms == 0.0);
    CHECK(rep.n == 4);
    CHECK(rep.r == 2);
    CHECK(rep.s == 2);
}
