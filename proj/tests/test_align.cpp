#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "seqa/align.hpp"
#include "seqa/error.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace seqa;

namespace {

std::vector<int> seq(const EventAlphabet& ab, const std::string& letters) {
    std::vector<int> out;
    for (char c : letters) out.push_back(ab.index_of(std::string(1, c)));
    return out;
}

std::vector<int> random_seq(Rng& rng, std::size_t min_len, std::size_t max_len, std::size_t k) {
    std::vector<int> s(min_len + rng.bounded(max_len - min_len + 1));
    for (auto& e : s) e = static_cast<int>(rng.bounded(k));
    return s;
}

// The five named schemes plus two extra localized settings, all derived
// from one random dataset.
std::vector<CostScheme> preset_schemes(const SequenceDataset& ds) {
    CostOptions lo1;
    lo1.e = 0.1;
    lo1.g = 0.8;
    CostOptions lo2;
    lo2.e = 0.4;
    lo2.g = 0.2;
    std::vector<CostScheme> out;
    out.push_back(make_cost_scheme("OMlev", ds));
    out.push_back(make_cost_scheme("OMtr", ds));
    out.push_back(make_cost_scheme("OMsf", ds));
    out.push_back(make_cost_scheme("LOMtr", ds, lo1));
    out.push_back(make_cost_scheme("LOMsf", ds, lo1));
    out.push_back(make_cost_scheme("LOMtr", ds, lo2));
    out.push_back(make_cost_scheme("LOMsf", ds, lo2));
    return out;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("the classic four-versus-three alignment") {
    EventAlphabet ab(std::vector<std::string>{"A", "B", "C", "D"});
    const std::vector<int> x = seq(ab, "ABCD");
    const std::vector<int> y = seq(ab, "ACB");

    const CostScheme lev = constant_costs(ab, 2.0, 1.0);
    CHECK(om_distance(x, y, lev) == 3.0); // min(3 indels, indel + substitution)

    const CostScheme pricey = constant_costs(ab, 5.0, 1.0);
    CHECK(om_distance(x, y, pricey) == 3.0); // the indel-only route wins
}

TEST_CASE("identical sequences cost nothing under every scheme") {
    Rng rng(11);
    const SequenceDataset ds = gen::random_dataset(rng, 30, 2, 5, 4, true);
    for (const auto& scheme : preset_schemes(ds))
        for (const auto& s : ds.sequences()) CHECK(om_distance(s.events, s.events, scheme) == 0.0);
}

TEST_CASE("trate substitution beats an indel pair") {
    const SequenceDataset ds = parse_dataset("case_id,events\nc0,A;B\nc1,A;B\n", FileFormat::Long);
    CostScheme scheme;
    scheme.substitution = trate_substitution(transition_rates(ds, 1)); // gamma(A,B) = 1
    scheme.indel = IndelModel::constant(1.0);
    const int A = ds.alphabet().index_of("A"), B = ds.alphabet().index_of("B");
    CHECK(om_distance({A, B}, {A, A}, scheme) == 1.0);
}

TEST_CASE("dp equals the exhaustive alignment enumeration") {
    Rng rng(0xa11914);
    const SequenceDataset ds = gen::random_dataset(rng, 40, 1, 5, 4, true);
    const auto schemes = preset_schemes(ds);
    for (int trial = 0; trial < 300; ++trial) {
        const std::vector<int> x = random_seq(rng, 1, 5, 4);
        const std::vector<int> y = random_seq(rng, 1, 5, 4);
        for (const auto& scheme : schemes) {
            // both sides accumulate costs left to right along a script, so
            // agreement is exact, not approximate
            CHECK(om_distance(x, y, scheme) == oracle::brute_force_om(x, y, scheme));
        }
    }
}

TEST_CASE("distance is exactly symmetric") {
    Rng rng(0x5e5e);
    const SequenceDataset ds = gen::random_dataset(rng, 30, 1, 6, 4, true);
    for (const auto& scheme : preset_schemes(ds))
        for (int trial = 0; trial < 100; ++trial) {
            const std::vector<int> x = random_seq(rng, 1, 6, 4);
            const std::vector<int> y = random_seq(rng, 1, 6, 4);
            CHECK(om_distance(x, y, scheme) == om_distance(y, x, scheme));
        }
}

TEST_CASE("triangle inequality holds for the Levenshtein preset") {
    EventAlphabet ab(std::vector<std::string>{"A", "B", "C"});
    const CostScheme lev = constant_costs(ab, 2.0, 1.0);
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
    REQUIRE(all.size() == 39);
    std::vector<std::vector<double>> d(all.size(), std::vector<double>(all.size(), 0.0));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) d[i][j] = om_distance(all[i], all[j], lev);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j)
            for (std::size_t k = 0; k < all.size(); ++k)
                CHECK(d[i][k] <= d[i][j] + d[j][k] + 1e-12);
}

TEST_CASE("indel-only transforms bound the distance from above") {
    Rng rng(99);
    const SequenceDataset ds = gen::random_dataset(rng, 20, 1, 6, 4, true);
    const CostScheme tr = make_cost_scheme("OMtr", ds);
    for (int trial = 0; trial < 200; ++trial) {
        const std::vector<int> x = random_seq(rng, 1, 6, 4);
        const std::vector<int> y = random_seq(rng, 1, 6, 4);
        CHECK(om_distance(x, y, tr) <=
              tr.indel.c * static_cast<double>(x.size() + y.size()) + 1e-12);
    }
}

TEST_CASE("appending a shared event never increases constant-cost distance") {
    EventAlphabet ab(std::vector<std::string>{"A", "B", "C"});
    const CostScheme lev = constant_costs(ab, 2.0, 1.0);
    Rng rng(123);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> x = random_seq(rng, 1, 4, 3);
        std::vector<int> y = random_seq(rng, 1, 4, 3);
        const double before = om_distance(x, y, lev);
        const int extra = static_cast<int>(rng.bounded(3));
        x.push_back(extra);
        y.push_back(extra);
        CHECK(om_distance(x, y, lev) <= before + 1e-12);
    }
}

TEST_CASE("events outside the scheme alphabet are rejected") {
    EventAlphabet ab(std::vector<std::string>{"A", "B"});
    const CostScheme lev = constant_costs(ab, 2.0, 1.0);
    CHECK_THROWS_WITH_AS(om_distance({0, 5}, {1}, lev), doctest::Contains("outside scheme alphabet"),
                         DataError);
    CHECK_THROWS_AS(om_distance({}, {0}, lev), DataError);
}

TEST_CASE("pairwise matrix basics") {
    const SequenceDataset one = parse_dataset("case_id,events\nc0,A;B\n", FileFormat::Long);
    const CostScheme lev1 = constant_costs(one.alphabet(), 2.0, 1.0);
    CHECK(pairwise_matrix(one, lev1).condensed_size() == 0);

    const SequenceDataset ds =
        parse_dataset("case_id,events\nc0,A;B\nc1,A;B\nc2,B;B;A\n", FileFormat::Long);
    const CostScheme lev = constant_costs(ds.alphabet(), 2.0, 1.0);
    const DissimilarityMatrix m = pairwise_matrix(ds, lev);
    CHECK(m.at(0, 1) == 0.0);
    CHECK(m.at(0, 2) == m.at(1, 2));
    CHECK(m.at(2, 0) == m.at(0, 2));
    CHECK(m.scheme_name() == "custom");
    CHECK(m.labels() == std::vector<std::string>{"c0", "c1", "c2"});
}

TEST_CASE("matrix bytes do not depend on dedupe or thread count") {
    Rng rng(2718);
    SequenceDataset base = gen::random_dataset(rng, 40, 2, 8, 5, true);
    // force duplicates
    std::vector<EventSequence> seqs = base.sequences();
    for (int i = 0; i < 10; ++i) {
        EventSequence copy = seqs[static_cast<std::size_t>(i)];
        copy.case_id = "dup" + std::to_string(i);
        seqs.push_back(std::move(copy));
    }
    const SequenceDataset ds(base.alphabet(), std::move(seqs));
    const CostScheme scheme = make_cost_scheme("LOMtr", ds, [] {
        CostOptions o;
        o.e = 0.1;
        o.g = 0.8;
        return o;
    }());

    PairwiseOptions a;
    a.dedupe = true;
    a.threads = 1;
    PairwiseOptions b;
    b.dedupe = false;
    b.threads = 1;
    PairwiseOptions c;
    c.dedupe = true;
    c.threads = 4;
    PairwiseOptions d;
    d.dedupe = false;
    d.threads = 8;
    const std::string ta = pairwise_matrix(ds, scheme, a).to_text();
    CHECK(ta == pairwise_matrix(ds, scheme, b).to_text());
    CHECK(ta == pairwise_matrix(ds, scheme, c).to_text());
    CHECK(ta == pairwise_matrix(ds, scheme, d).to_text());
}

TEST_CASE("maxlen normalization divides by the longer sequence") {
    const SequenceDataset ds = parse_dataset("case_id,events\nc0,A\nc1,A;B;C;B\n", FileFormat::Long);
    const CostScheme lev = constant_costs(ds.alphabet(), 2.0, 1.0);
    PairwiseOptions opt;
    opt.normalize = PairwiseOptions::Normalize::MaxLen;
    const DissimilarityMatrix m = pairwise_matrix(ds, lev, opt);
    CHECK(m.at(0, 1) == pairwise_matrix(ds, lev).at(0, 1) / 4.0);
}

TEST_CASE("matrix files round trip in text and binary") {
    Rng rng(31415);
    const SequenceDataset ds = gen::random_dataset(rng, 25, 1, 6, 4, true);
    const DissimilarityMatrix m = pairwise_matrix(ds, make_cost_scheme("OMtr", ds));

    const std::string txt = temp_path("seqa_m.txt");
    const std::string bin = temp_path("seqa_m.bin");
    write_matrix(m, txt, false);
    write_matrix(m, bin, true);
    for (const auto& path : {txt, bin}) {
        const DissimilarityMatrix back = read_matrix(path);
        CHECK(back.values() == m.values());
        CHECK(back.labels() == m.labels());
        CHECK(back.weights() == m.weights());
        CHECK(back.scheme_name() == m.scheme_name());
    }
    std::filesystem::remove(txt);
    std::filesystem::remove(bin);
}

TEST_CASE("damaged matrix files are refused") {
    Rng rng(1618);
    const SequenceDataset ds = gen::random_dataset(rng, 8, 1, 4, 3, false);
    const DissimilarityMatrix m = pairwise_matrix(ds, constant_costs(ds.alphabet(), 2.0, 1.0));
    const std::string text = m.to_text();

    // drop the last value line
    const std::string truncated = text.substr(0, text.find_last_of('\n', text.size() - 2) + 1);
    CHECK_THROWS_WITH_AS(matrix_from_text(truncated), doctest::Contains("condensed length mismatch"),
                         DataError);

    // flip one digit inside the value block
    std::string corrupted = text;
    const std::size_t at = corrupted.rfind("0.");
    if (at != std::string::npos) corrupted[at] = '5';
    else corrupted[corrupted.size() - 2] = corrupted[corrupted.size() - 2] == '1' ? '2' : '1';
    CHECK_THROWS_WITH_AS(matrix_from_text(corrupted), doctest::Contains("checksum failure"), DataError);

    // header label count mismatch
    std::string bad_labels = text;
    bad_labels.replace(bad_labels.find("labels=c0"), 9, "labels=cX,c0");
    CHECK_THROWS_WITH_AS(matrix_from_text(bad_labels), doctest::Contains("label count mismatch"),
                         DataError);
}

TEST_CASE("condensed storage matches the documented layout") {
    std::vector<double> values = {1.0, 2.0, 3.0}; // (1,0) (2,0) (2,1)
    const DissimilarityMatrix m({"a", "b", "c"}, {1, 1, 1}, values, "x");
    CHECK(m.at(1, 0) == 1.0);
    CHECK(m.at(2, 0) == 2.0);
    CHECK(m.at(2, 1) == 3.0);
    CHECK(m.at(0, 1) == 1.0);
    CHECK(m.at(1, 1) == 0.0);
    CHECK_THROWS_WITH_AS(DissimilarityMatrix({"a", "b"}, {1, 1}, {1.0, 2.0}, "x"),
                         doctest::Contains("condensed length mismatch"), DataError);
}
