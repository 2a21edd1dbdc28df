// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "stylo/errors.hpp"

namespace stylo {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw CorpusError("cannot read file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool is_known_file(const std::string& name) {
    return name.size() > 5 && name.starts_with("known") && name.ends_with(".txt");
}

} // namespace

Language language_from_problem_id(const std::string& id) {
    if (id.size() < 2) return Language::Other;
    std::string prefix;
    prefix += static_cast<char>(std::toupper(static_cast<unsigned char>(id[0])));
    prefix += static_cast<char>(std::toupper(static_cast<unsigned char>(id[1])));
    if (prefix == "EN") return Language::English;
    if (prefix == "DU" || prefix == "NL") return Language::Dutch;
    if (prefix == "GR" || prefix == "EL") return Language::Greek;
    if (prefix == "SP" || prefix == "ES") return Language::Spanish;
    return Language::Other;
}

Corpus load_corpus(const fs::path& root, std::optional<Language> language_override) {
    if (!fs::is_directory(root)) {
        throw CorpusError("corpus root is not a directory: " + root.string());
    }

    std::vector<fs::path> problem_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) problem_dirs.push_back(entry.path());
    }
    std::sort(problem_dirs.begin(), problem_dirs.end());
    if (problem_dirs.empty()) {
        throw CorpusError("corpus has no problem directories: " + root.string());
    }

    Corpus corpus;
    std::set<std::string> seen_ids;
    for (const fs::path& dir : problem_dirs) {
        Problem problem;
        problem.id = dir.filename().string();
        if (!seen_ids.insert(problem.id).second) {
            throw CorpusError("duplicate problem id: " + problem.id);
        }

        std::vector<fs::path> known_files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (is_known_file(name)) known_files.push_back(entry.path());
        }
        std::sort(known_files.begin(), known_files.end());
        if (known_files.empty()) {
            throw CorpusError("problem " + dir.string() + " has no known*.txt");
        }
        for (const fs::path& file : known_files) problem.known.push_back(read_file(file));

        const fs::path unknown_file = dir / "unknown.txt";
        if (!fs::is_regular_file(unknown_file)) {
            throw CorpusError("problem " + dir.string() + " is missing unknown.txt");
        }
        problem.unknown = read_file(unknown_file);

        corpus.problems.push_back(std::move(problem));
    }

    const fs::path truth_file = root / "truth.txt";
    if (fs::is_regular_file(truth_file)) corpus.truth = TruthSet::load(truth_file);

    const fs::path control_file = root / "control.txt";
    if (fs::is_regular_file(control_file)) corpus.control = read_file(control_file);

    corpus.language = language_override ? *language_override
                                        : language_from_problem_id(corpus.problems[0].id);
    return corpus;
}

void write_corpus(const Corpus& corpus, const fs::path& root) {
    fs::create_directories(root);
    for (const Problem& problem : corpus.problems) {
        const fs::path dir = root / problem.id;
        fs::create_directories(dir);
        for (std::size_t k = 0; k < problem.known.size(); ++k) {
            char name[32];
            std::snprintf(name, sizeof name, "known%02zu.txt", k + 1);
            std::ofstream out(dir / name, std::ios::binary);
            if (!out) throw CorpusError("cannot write " + (dir / name).string());
            out << problem.known[k];
        }
        std::ofstream out(dir / "unknown.txt", std::ios::binary);
        if (!out) throw CorpusError("cannot write " + (dir / "unknown.txt").string());
        out << problem.unknown;
    }
    if (corpus.truth) corpus.truth->save(root / "truth.txt");
    if (!corpus.control.empty()) {
        std::ofstream out(root / "control.txt", std::ios::binary);
        if (!out) throw CorpusError("cannot write control.txt");
        out << corpus.control;
    }
}

} // namespace stylo
