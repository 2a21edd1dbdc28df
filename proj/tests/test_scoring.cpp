// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "stylo/errors.hpp"
#include "stylo/rng.hpp"
#include "stylo/scoring.hpp"
#include "stylo/trainer.hpp"

using namespace stylo;

namespace {

ScoreMatrix matrix_from(std::vector<std::vector<double>> rows) {
    ScoreMatrix m;
    const int n_heads = static_cast<int>(rows.size());
    const int n_docs = static_cast<int>(rows[0].size());
    for (int i = 0; i < n_heads; ++i) m.head_ids.push_back("h" + std::to_string(i));
    for (int j = 0; j < n_docs; ++j) m.doc_ids.push_back("d" + std::to_string(j));
    m.entries.assign(static_cast<std::size_t>(n_heads) * n_docs, 0.0);
    m.valid.assign(static_cast<std::size_t>(n_heads) * n_docs, 0);
    for (int i = 0; i < n_heads; ++i) {
        for (int j = 0; j < n_docs; ++j) m.set(i, j, rows[i][j]);
    }
    return m;
}

std::vector<std::string> ids(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("p" + std::to_string(i));
    return out;
}

} // namespace

TEST_SUITE_BEGIN("scoring");

TEST_CASE("entropy matrix of the zero model is log2 V everywhere") {
    const ModelParams p = ModelParams::zeros(8, 3, 3);
    std::vector<SymbolSequence> docs;
    for (int j = 0; j < 3; ++j) {
        SymbolSequence doc{"d" + std::to_string(j), {}};
        for (int i = 0; i < 30; ++i) doc.indices.push_back((i + j) % 8);
        docs.push_back(std::move(doc));
    }
    const ScoreMatrix matrix = entropy_matrix(p, docs, 5);
    REQUIRE(matrix.heads() == 3);
    REQUIRE(matrix.docs() == 3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(matrix.is_valid(i, j));
            CHECK(matrix.at(i, j) == doctest::Approx(3.0).epsilon(1e-14));
        }
    }
}

TEST_CASE("entropy matrix equals sequence_cross_entropy and skips control") {
    TrainConfig config;
    config.hidden = 4;
    config.seed = 10;
    ModelParams p = init_params(config, 5, 3, /*has_control=*/true);
    CHECK(p.scored_heads() == 2);

    SymbolSequence doc{"one", {0, 1, 2, 3, 4, 0, 1, 2, 3, 4, 2, 2}};
    const ScoreMatrix matrix = entropy_matrix(p, {&doc, 1}, 3);
    REQUIRE(matrix.heads() == 2);
    REQUIRE(matrix.docs() == 1);
    for (int i = 0; i < 2; ++i) {
        CHECK(matrix.at(i, 0) == sequence_cross_entropy(doc, p, i, 3));
    }
}

TEST_CASE("entropy matrix records too-short documents as missing") {
    const ModelParams p = ModelParams::zeros(4, 2, 2);
    SymbolSequence ok{"ok", {0, 1, 2, 3, 0, 1, 2, 3}};
    SymbolSequence tiny{"tiny", {0, 1}};
    std::vector<SymbolSequence> docs{ok, tiny};
    const ScoreMatrix matrix = entropy_matrix(p, docs, 4);
    CHECK(matrix.is_valid(0, 0));
    CHECK_FALSE(matrix.is_valid(0, 1));
    CHECK_FALSE(matrix.is_valid(1, 1));
    CHECK(matrix.to_tsv().find("NA") != std::string::npos);
}

TEST_CASE("normalize centres columns then scales rows") {
    const ScoreMatrix m = matrix_from({{2, 4}, {4, 2}});
    const ScoreMatrix n = normalize(m);
    CHECK(n.at(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(n.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.at(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.at(1, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("normalize flattens constant matrices") {
    const ScoreMatrix n = normalize(matrix_from({{3, 3, 3}, {3, 3, 3}}));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(n.at(i, j) == 0.0);
    }
}

TEST_CASE("normalize is invariant to per-document offsets") {
    Rng rng(15);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<double>> rows(4, std::vector<double>(5));
        for (auto& row : rows) {
            for (double& v : row) v = 3.0 + gaussian(rng);
        }
        const ScoreMatrix base = normalize(matrix_from(rows));

        const int column = static_cast<int>(uniform_below(rng, 5));
        const double offset = 2.5 * gaussian(rng);
        for (auto& row : rows) row[static_cast<std::size_t>(column)] += offset;
        const ScoreMatrix shifted = normalize(matrix_from(rows));

        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 5; ++j) {
                CHECK(shifted.at(i, j) == doctest::Approx(base.at(i, j)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("normalize requires two documents") {
    CHECK_THROWS_AS(normalize(matrix_from({{1}, {2}})), NumericError);
}

TEST_CASE("rank_unknowns percentile rule") {
    SUBCASE("own document strictly best") {
        //  diagonal smallest in each row, M=4
        const ScoreMatrix m = matrix_from({{-3, 0, 1, 2},
                                           {0, -3, 1, 2},
                                           {0, 1, -3, 2},
                                           {0, 1, 2, -3}});
        const auto p = rank_unknowns(m);
        for (double v : p) CHECK(v == doctest::Approx(0.875).epsilon(1e-12));
    }
    SUBCASE("own document strictly worst") {
        const ScoreMatrix m = matrix_from({{9, 0, 1, 2},
                                           {0, 9, 1, 2},
                                           {0, 1, 9, 2},
                                           {0, 1, 2, 9}});
        const auto p = rank_unknowns(m);
        for (double v : p) CHECK(v == doctest::Approx(0.125).epsilon(1e-12));
    }
    SUBCASE("all-tied rows sit at the middle") {
        const ScoreMatrix m = matrix_from({{1, 1, 1, 1},
                                           {1, 1, 1, 1},
                                           {1, 1, 1, 1},
                                           {1, 1, 1, 1}});
        const auto p = rank_unknowns(m);
        for (double v : p) CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("missing diagonal takes the worst rank") {
        ScoreMatrix m = matrix_from({{0, 1, 2}, {0, 1, 2}, {0, 1, 2}});
        m.set(1, 1, 0.0, /*ok=*/false);
        const auto p = rank_unknowns(m);
        CHECK(p[1] == doctest::Approx(1.0 - (3.0 - 0.5) / 3.0).epsilon(1e-12));
    }
    SUBCASE("non-square pairing is rejected") {
        CHECK_THROWS_AS(rank_unknowns(matrix_from({{1, 2, 3}, {1, 2, 3}})), NumericError);
    }
}

TEST_CASE("align_scores linear map around the median") {
    const double p[] = {0.875, 0.625, 0.375, 0.125};
    const auto v = align_scores(p, ids(4), 0.0);
    CHECK(v.scores[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.scores[1] == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(v.scores[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(v.scores[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("align_scores degenerate and radius cases") {
    const double equal[] = {0.4, 0.4, 0.4};
    for (double s : align_scores(equal, ids(3), 0.0).scores) CHECK(s == 0.5);

    // radius snaps near-median values to exactly 0.5
    const double p[] = {0.9, 0.52, 0.48, 0.1};
    const auto v = align_scores(p, ids(4), 0.05);
    CHECK(v.scores[1] == 0.5);
    CHECK(v.scores[2] == 0.5);
    CHECK(v.scores[0] > 0.5);
    CHECK(v.scores[3] < 0.5);
}

TEST_CASE("align_scores is monotone and balanced on random inputs") {
    Rng rng(44);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(uniform_below(rng, 12));
        std::vector<double> p(static_cast<std::size_t>(m));
        for (double& x : p) x = uniform01(rng);
        const double radius = trial % 3 == 0 ? 0.05 : 0.0;
        const auto v = align_scores(p, ids(m), radius);

        for (int i = 0; i < m; ++i) {
            CHECK(v.scores[i] >= 0.0);
            CHECK(v.scores[i] <= 1.0);
            for (int j = 0; j < m; ++j) {
                if (p[i] > p[j]) CHECK(v.scores[i] >= v.scores[j]);
            }
        }
        CHECK(balanced_answers(v));
    }
}

TEST_CASE("ensemble averaging identities") {
    const double p[] = {0.875, 0.625, 0.375, 0.125};
    const auto v = align_scores(p, ids(4), 0.0);

    SUBCASE("single member is unchanged") {
        const auto avg = ensemble_average({&v, 1});
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(avg.scores[i] == doctest::Approx(v.scores[i]).epsilon(1e-12));
        }
    }
    SUBCASE("averaging a set with itself is idempotent") {
        const VerdictSet members[] = {v, v};
        const auto avg = ensemble_average(members);
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(avg.scores[i] == doctest::Approx(v.scores[i]).epsilon(1e-12));
        }
    }
    SUBCASE("mismatched ids are rejected") {
        VerdictSet other = v;
        other.problem_ids[0] = "stranger";
        const VerdictSet members[] = {v, other};
        CHECK_THROWS_AS(ensemble_average(members), CorpusError);
    }
    SUBCASE("opposed members average toward the middle before re-alignment") {
        VerdictSet a{{"x", "y"}, {0.2, 0.8}};
        VerdictSet b{{"x", "y"}, {0.8, 0.2}};
        const VerdictSet members[] = {a, b};
        const auto avg = ensemble_average(members);
        CHECK(avg.scores[0] == 0.5);
        CHECK(avg.scores[1] == 0.5);
    }
}

TEST_CASE("answers files round trip at three decimals") {
    VerdictSet v{{"EN001", "EN002", "EN003"}, {0.12345, 0.5, 1.0}};
    CHECK(format_answers(v) == "EN001 0.123\nEN002 0.500\nEN003 1.000\n");

    const auto path = std::filesystem::temp_directory_path() / "stylo_answers_test.txt";
    write_answers(v, path);
    const VerdictSet back = read_answers(path);
    REQUIRE(back.size() == 3);
    CHECK(back.problem_ids == v.problem_ids);
    CHECK(back.scores[0] == doctest::Approx(0.123));
    CHECK(back.scores[1] == doctest::Approx(0.5));
    std::filesystem::remove(path);
}

TEST_CASE("balanced_answers counts strict sides") {
    CHECK(balanced_answers({{"a", "b"}, {0.4, 0.6}}));
    CHECK(balanced_answers({{"a", "b", "c"}, {0.5, 0.5, 0.5}}));
    CHECK_FALSE(balanced_answers({{"a", "b", "c"}, {0.6, 0.7, 0.8}}));
}

TEST_SUITE_END();
