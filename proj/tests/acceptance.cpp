// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Criterion 9 needs a user-supplied crash extract (see README) and is
// reported as SKIP when the data is absent.

#include "generators.hpp"
#include "oracles.hpp"
#include "seqa/agreement.hpp"
#include "seqa/align.hpp"
#include "seqa/costs.hpp"
#include "seqa/dataset.hpp"
#include "seqa/encoding.hpp"
#include "seqa/error.hpp"
#include "seqa/kmedoids.hpp"
#include "seqa/mantel.hpp"
#include "seqa/pipeline.hpp"
#include "seqa/quality.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

using namespace seqa;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++failures;
}

void report_skip(int criterion, const std::string& detail) {
    std::printf("criterion %d: SKIP — %s\n", criterion, detail.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<CostScheme> five_presets(const SequenceDataset& ds) {
    CostOptions lo;
    lo.e = 0.1;
    lo.g = 0.8;
    return {make_cost_scheme("OMlev", ds), make_cost_scheme("OMtr", ds),
            make_cost_scheme("OMsf", ds), make_cost_scheme("LOMtr", ds, lo),
            make_cost_scheme("LOMsf", ds, lo)};
}

std::vector<int> random_seq(Rng& rng, std::size_t min_len, std::size_t max_len, std::size_t k) {
    std::vector<int> s(min_len + rng.bounded(max_len - min_len + 1));
    for (auto& e : s) e = static_cast<int>(rng.bounded(k));
    return s;
}

// 1. DP versus exhaustive edit-script enumeration, all five presets.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(0xc1);
    const SequenceDataset ds = gen::random_dataset(rng, 60, 1, 5, 4, true);
    const auto schemes = five_presets(ds);
    const int pairs = 10000;
    long long mismatches = 0;
    for (int t = 0; t < pairs; ++t) {
        const std::vector<int> x = random_seq(rng, 1, 5, 4);
        const std::vector<int> y = random_seq(rng, 1, 5, 4);
        for (const auto& scheme : schemes)
            if (om_distance(x, y, scheme) != oracle::brute_force_om(x, y, scheme)) ++mismatches;
    }
    const double secs = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d random pairs x 5 presets, %lld mismatches, %.1f s (budget 60 s)", pairs,
                  mismatches, secs);
    report(1, mismatches == 0 && secs < 60.0, buf);
}

// 2. The worked four-versus-three alignment at two substitution prices.
void criterion_2() {
    EventAlphabet ab(std::vector<std::string>{"A", "B", "C", "D"});
    std::vector<int> x, y;
    for (char c : std::string("ABCD")) x.push_back(ab.index_of(std::string(1, c)));
    for (char c : std::string("ACB")) y.push_back(ab.index_of(std::string(1, c)));
    const double cheap = om_distance(x, y, constant_costs(ab, 2.0, 1.0));
    const double pricey = om_distance(x, y, constant_costs(ab, 5.0, 1.0));
    char buf[120];
    std::snprintf(buf, sizeof(buf), "sub=2 gives %g, sub=5 gives %g (both must be exactly 3)", cheap,
                  pricey);
    report(2, cheap == 3.0 && pricey == 3.0, buf);
}

// 3. Symmetry, zero self-distance, and the exhaustive triangle inequality.
void criterion_3() {
    Rng rng(0xc3);
    const SequenceDataset ds = gen::random_dataset(rng, 50, 1, 6, 4, true);
    bool ok = true;
    for (const auto& scheme : five_presets(ds)) {
        for (int t = 0; t < 1000; ++t) {
            const std::vector<int> x = random_seq(rng, 1, 6, 4);
            const std::vector<int> y = random_seq(rng, 1, 6, 4);
            ok = ok && om_distance(x, y, scheme) == om_distance(y, x, scheme);
            ok = ok && om_distance(x, x, scheme) == 0.0;
        }
    }

    EventAlphabet ab3(std::vector<std::string>{"A", "B", "C"});
    const CostScheme lev = constant_costs(ab3, 2.0, 1.0);
    std::vector<std::vector<int>> all;
    for (int len = 1; len <= 3; ++len) {
        std::vector<int> s(static_cast<std::size_t>(len), 0);
        for (;;) {
            all.push_back(s);
            int p = len - 1;
            while (p >= 0 && s[static_cast<std::size_t>(p)] == 2) {
                s[static_cast<std::size_t>(p)] = 0;
                --p;
            }
            if (p < 0) break;
            ++s[static_cast<std::size_t>(p)];
        }
    }
    std::vector<std::vector<double>> d(all.size(), std::vector<double>(all.size()));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) d[i][j] = om_distance(all[i], all[j], lev);
    long long violations = 0;
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j)
            for (std::size_t k = 0; k < all.size(); ++k)
                if (d[i][k] > d[i][j] + d[j][k]) ++violations;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "symmetry/identity on 5x1000 pairs %s; %zu^3 triangle checks, %lld violations",
                  ok ? "exact" : "BROKEN", all.size(), violations);
    report(3, ok && violations == 0, buf);
}

// 4. ARI / FMS / AMI against their independent oracles.
void criterion_4() {
    Rng rng(0xc4);
    bool ok = true;
    double worst_pair = 0.0, worst_ami = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 5 + rng.bounded(46); // 5..50
        const std::vector<int> x = gen::random_partition(rng, n, 2 + static_cast<int>(rng.bounded(4)));
        const std::vector<int> y = gen::random_partition(rng, n, 2 + static_cast<int>(rng.bounded(4)));
        const std::vector<double> w(n, 1.0);
        const ContingencyTable ct(x, y, w);
        const oracle::PairClasses pc = oracle::classify_pairs(x, y, w);
        worst_pair = std::max(worst_pair, std::abs(ari(ct) - oracle::ari_from_pairs(pc)));
        worst_pair = std::max(worst_pair, std::abs(fms(ct) - oracle::fms_from_pairs(pc)));
        ok = ok && std::abs(ari(ct) - oracle::kappa_from_pairs(pc)) <= 1e-12;
    }
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 4 + rng.bounded(27); // 4..30
        const std::vector<int> x = gen::random_partition(rng, n, 2 + static_cast<int>(rng.bounded(3)));
        const std::vector<int> y = gen::random_partition(rng, n, 2 + static_cast<int>(rng.bounded(3)));
        const ContingencyTable ct(x, y, std::vector<double>(n, 1.0));
        worst_ami = std::max(worst_ami, std::abs(ami(ct) - oracle::exact_ami(x, y)));
    }
    const std::vector<int> a = {0, 0, 1, 1}, b = {0, 1, 0, 1};
    const ContingencyTable crossed(a, b, {1, 1, 1, 1});
    ok = ok && ari(crossed) == -0.5 && fms(crossed) == 0.0;
    ok = ok && worst_pair <= 1e-12 && worst_ami <= 1e-9;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "pair-oracle gap %.2e (tol 1e-12), EMI-oracle gap %.2e (tol 1e-9), "
                  "crossed instance ARI=-0.5 FMS=0, ARI==kappa in every trial",
                  worst_pair, worst_ami);
    report(4, ok, buf);
}

// 5. Indel-parameter constraint and the default sweep grid.
void criterion_5() {
    bool rejected_all = true;
    for (double e = 0.0; e <= 0.45; e += 0.05)
        for (double g = 0.0; g < 1.0 - 2.0 * e - 1e-9; g += 0.05) {
            try {
                IndelModel::localized(e, g);
                rejected_all = false;
            } catch (const ConfigError&) {
            }
        }

    PipelineConfig cfg;
    cfg.input = std::string(DATA_DIR) + "/synthetic60.csv";
    cfg.measure = "LOMtr";
    cfg.k = 3;
    cfg.seed = 1;
    cfg.benchmark = "truth";
    const SweepResult sweep = sensitivity_sweep(cfg, {});
    bool grid_ok = sweep.rows.size() == 41;
    for (const auto& row : sweep.rows)
        grid_ok = grid_ok && row.g == 1.0 - 2.0 * row.e && 2.0 * row.e + row.g == 1.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "violating (e,g) all rejected: %s; default grid rows = %zu with g = 1-2e exact",
                  rejected_all ? "yes" : "NO", sweep.rows.size());
    report(5, rejected_all && grid_ok, buf);
}

// 6. Planted-template recovery over 20 seeds.
void criterion_6() {
    int ari_ok = 0, asww_top = 0;
    double min_ari = 1.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const gen::Synthetic synth = gen::synthetic_templates(seed);
        const CostScheme lev = constant_costs(synth.dataset.alphabet(), 2.0, 1.0);
        PairwiseOptions popt;
        popt.threads = 2;
        const DissimilarityMatrix m = pairwise_matrix(synth.dataset, lev, popt);
        const ClusterAssignment a = cluster_distinct(synth.dataset, m, 3, seed, MedoidInit::Build);
        const double score =
            ari(ContingencyTable(synth.truth, a.labels, synth.dataset.weights()));
        min_ari = std::min(min_ari, score);
        if (score >= 0.9) ++ari_ok;

        const auto rows = quality_over_k(m, 2, 6, seed);
        int best_k = 0;
        double best = -2.0;
        for (const auto& row : rows)
            if (row.values.aswW > best) {
                best = row.values.aswW;
                best_k = row.k;
            }
        if (best_k == 3) ++asww_top;
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "ARI >= 0.9 in %d/20 seeds (min %.3f), ASWw ranks k=3 first in %d/20 (need >= 18)",
                  ari_ok, min_ari, asww_top);
    report(6, ari_ok == 20 && asww_top >= 18, buf);
}

// 7. Mantel self-test and null behavior.
void criterion_7() {
    Rng rng(0xc7);
    auto random_matrix = [&rng](std::size_t n) {
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back("c" + std::to_string(i));
        std::vector<double> values(n * (n - 1) / 2);
        for (auto& v : values) v = rng.uniform();
        return DissimilarityMatrix(labels, std::vector<double>(n, 1.0), values, "rand");
    };

    const DissimilarityMatrix m = random_matrix(30);
    const MantelResult self = mantel_test(m, m, 999, 17);
    const bool self_ok = self.r == 1.0 && self.p_value == 1.0 / 1000.0;

    double sum_abs_r = 0.0;
    int low_p = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        const DissimilarityMatrix a = random_matrix(30);
        const DissimilarityMatrix b = random_matrix(30);
        const MantelResult res = mantel_test(a, b, 999, static_cast<std::uint64_t>(t) + 1);
        sum_abs_r += std::abs(res.r);
        if (res.p_value < 0.05) ++low_p;
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "self r=%.17g p=%.6f; null mean |r| = %.4f (< 0.1), p<0.05 in %d/100 (<= 10)",
                  self.r, self.p_value, sum_abs_r / trials, low_p);
    report(7, self_ok && sum_abs_r / trials < 0.1 && low_p <= 10, buf);
}

// 8. Thread determinism, throughput, and the condensed-size arithmetic.
void criterion_8() {
    Rng rng(0xc8);
    std::vector<std::string> codes;
    for (int i = 0; i < 59; ++i) codes.push_back("e" + std::to_string(i));
    EventAlphabet ab(codes);
    auto make_ds = [&rng, &ab](std::size_t n) {
        std::vector<EventSequence> seqs;
        for (std::size_t i = 0; i < n; ++i) {
            EventSequence s;
            s.case_id = "c" + std::to_string(i);
            s.events.resize(4 + rng.bounded(9)); // lengths 4..12
            for (auto& e : s.events) e = static_cast<int>(rng.bounded(59));
            seqs.push_back(std::move(s));
        }
        return SequenceDataset(ab, std::move(seqs));
    };

    const SequenceDataset ds1000 = make_ds(1000);
    const CostScheme tr = make_cost_scheme("OMtr", ds1000);
    const auto t0 = std::chrono::steady_clock::now();
    std::string bytes1;
    bool identical = true;
    for (int threads : {1, 4, 8}) {
        PairwiseOptions opt;
        opt.threads = threads;
        const std::string bytes = pairwise_matrix(ds1000, tr, opt).to_text();
        if (threads == 1) bytes1 = bytes;
        else identical = identical && bytes == bytes1;
    }
    const double secs = seconds_since(t0) / 3.0;

    const SequenceDataset big = make_ds(2676);
    const DissimilarityMatrix bm = pairwise_matrix(big, make_cost_scheme("OMlev", big),
                                                   PairwiseOptions{.dedupe = true, .threads = 4});
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "1000-case matrix byte-identical over 1/4/8 threads: %s, %.1f s per run "
                  "(budget 30 s); n=2676 emits %zu condensed values (want 3579150)",
                  identical ? "yes" : "NO", secs, bm.condensed_size());
    report(8, identical && secs < 30.0 && bm.condensed_size() == 3579150, buf);
}

// 9. Replication against a user-supplied crash extract (optional).
void criterion_9() {
    const char* path = std::getenv("SEQA_CRSS_LONG");
    if (!path || std::string(path).empty()) {
        report_skip(9, "set SEQA_CRSS_LONG to a long-format extract with an ACC_TYPE column "
                       "(satisfaction threshold on record: ARI >= 0.28)");
        return;
    }
    try {
        const std::string scheme_path = std::string(DATA_DIR) + "/encodings/crss_sv_consolidated.csv";
        PipelineConfig cfg;
        cfg.input = path;
        cfg.measure = "LOMtr";
        cfg.scheme = scheme_path;
        cfg.k = 15;
        cfg.seed = 0;
        cfg.benchmark = "ACC_TYPE";
        cfg.threads = 8;
        const SweepResult sweep = sensitivity_sweep(cfg, {});
        const SweepRow& best = sweep.rows[sweep.optimum];

        const SequenceDataset original = load_dataset(path, FileFormat::Long);
        PairwiseOptions popt;
        popt.threads = 8;
        const DissimilarityMatrix lev = pairwise_matrix(original, make_cost_scheme("OMlev", original), popt);
        const DissimilarityMatrix trm = pairwise_matrix(original, make_cost_scheme("OMtr", original), popt);
        const MantelResult mr = mantel_test(lev, trm, 99, 1, MantelOptions{.spearman = false, .threads = 8});

        const bool ok = std::abs(best.ari - 0.359) <= 0.03 && std::abs(best.fms - 0.441) <= 0.03 &&
                        mr.r >= 0.95;
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "sweep optimum e=%.2f: ARI=%.3f (target 0.359 +- 0.03), FMS=%.3f (target "
                      "0.441 +- 0.03); OMlev-OMtr mantel r=%.3f (>= 0.95); ARI >= 0.28 considered "
                      "satisfactory",
                      best.e, best.ari, best.fms, mr.r);
        report(9, ok, buf);
    } catch (const std::exception& e) {
        report(9, false, std::string("replication run failed: ") + e.what());
    }
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all runnable criteria passed\n");
    return failures == 0 ? 0 : 1;
}
