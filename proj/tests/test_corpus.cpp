// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "stylo/corpus.hpp"
#include "stylo/errors.hpp"
#include "stylo/synthetic.hpp"

using namespace stylo;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& file, const std::string& text) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    out << text;
}

} // namespace

TEST_SUITE_BEGIN("corpus");

TEST_CASE("load_corpus reads a PAN-style tree") {
    TempDir dir("stylo_corpus_ok");
    write(dir.path / "EN001" / "known01.txt", "first known text");
    write(dir.path / "EN001" / "known02.txt", "second known text");
    write(dir.path / "EN001" / "unknown.txt", "the questioned text");
    write(dir.path / "EN002" / "known01.txt", "other author");
    write(dir.path / "EN002" / "unknown.txt", "other unknown");
    write(dir.path / "truth.txt", "EN001 Y\nEN002 N\n");

    const Corpus corpus = load_corpus(dir.path);
    REQUIRE(corpus.problems.size() == 2);
    CHECK(corpus.language == Language::English);
    CHECK(corpus.problems[0].id == "EN001");
    CHECK(corpus.problems[0].known.size() == 2);
    CHECK(corpus.problems[0].known[0] == "first known text");
    CHECK(corpus.problems[0].unknown == "the questioned text");
    REQUIRE(corpus.truth.has_value());
    CHECK(corpus.truth->labels[0]);
    CHECK_FALSE(corpus.truth->labels[1]);
}

TEST_CASE("load_corpus names the offending directory") {
    TempDir dir("stylo_corpus_missing_unknown");
    write(dir.path / "GR001" / "known01.txt", "text");
    try {
        load_corpus(dir.path);
        FAIL("expected CorpusError");
    } catch (const CorpusError& e) {
        CHECK(std::string(e.what()).find("GR001") != std::string::npos);
        CHECK(std::string(e.what()).find("unknown.txt") != std::string::npos);
    }

    TempDir dir2("stylo_corpus_no_known");
    write(dir2.path / "GR001" / "unknown.txt", "text");
    CHECK_THROWS_AS(load_corpus(dir2.path), CorpusError);

    TempDir dir3("stylo_corpus_empty");
    CHECK_THROWS_AS(load_corpus(dir3.path), CorpusError);
}

TEST_CASE("language inference and override") {
    TempDir dir("stylo_corpus_lang");
    write(dir.path / "GR001" / "known01.txt", "x");
    write(dir.path / "GR001" / "unknown.txt", "y");
    CHECK(load_corpus(dir.path).language == Language::Greek);
    CHECK(load_corpus(dir.path, Language::Spanish).language == Language::Spanish);

    CHECK(language_from_problem_id("EN123") == Language::English);
    CHECK(language_from_problem_id("DU007") == Language::Dutch);
    CHECK(language_from_problem_id("NL007") == Language::Dutch);
    CHECK(language_from_problem_id("SP001") == Language::Spanish);
    CHECK(language_from_problem_id("ES001") == Language::Spanish);
    CHECK(language_from_problem_id("SY001") == Language::Other);
}

TEST_CASE("write_corpus round trips through load_corpus") {
    TempDir dir("stylo_corpus_rt");
    Corpus corpus;
    corpus.problems.push_back({"AB001", {"known a", "known b"}, "unknown c"});
    corpus.problems.push_back({"AB002", {"known d"}, "unknown e"});
    TruthSet truth;
    truth.problem_ids = {"AB001", "AB002"};
    truth.labels = {true, false};
    corpus.truth = truth;
    corpus.control = "control text body";

    write_corpus(corpus, dir.path / "out");
    const Corpus back = load_corpus(dir.path / "out");
    REQUIRE(back.problems.size() == 2);
    CHECK(back.problems[0].known == corpus.problems[0].known);
    CHECK(back.problems[1].unknown == "unknown e");
    CHECK(back.control == "control text body");
    REQUIRE(back.truth.has_value());
    CHECK(back.truth->labels == truth.labels);
}

TEST_CASE("synthetic corpus is balanced and deterministic") {
    SyntheticSpec spec;
    spec.problems = 20;
    spec.chars_per_doc = 300;
    spec.seed = 9;
    const Corpus a = generate_synthetic(spec);
    REQUIRE(a.problems.size() == 20);
    REQUIRE(a.truth.has_value());

    int positives = 0;
    for (bool label : a.truth->labels) positives += label ? 1 : 0;
    CHECK(positives == 10);
    CHECK(a.truth->is_balanced());

    for (const Problem& problem : a.problems) {
        CHECK(problem.known.size() == 1);
        CHECK(problem.known[0].size() >= 250);
        CHECK(problem.unknown.size() >= 250);
    }

    const Corpus b = generate_synthetic(spec);
    for (std::size_t i = 0; i < a.problems.size(); ++i) {
        CHECK(a.problems[i].known[0] == b.problems[i].known[0]);
        CHECK(a.problems[i].unknown == b.problems[i].unknown);
    }

    SyntheticSpec other = spec;
    other.seed = 10;
    const Corpus c = generate_synthetic(other);
    CHECK(a.problems[0].known[0] != c.problems[0].known[0]);
}

TEST_CASE("synthetic spec validation") {
    SyntheticSpec bad;
    bad.author_families = 1;
    CHECK_THROWS_AS(generate_synthetic(bad), ConfigError);
    SyntheticSpec tiny;
    tiny.chars_per_doc = 4;
    CHECK_THROWS_AS(generate_synthetic(tiny), ConfigError);
}

TEST_SUITE_END();
