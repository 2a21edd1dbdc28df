// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_CORPUS_HPP
#define STYLO_CORPUS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "stylo/metrics.hpp"
#include "stylo/preprocess.hpp"

namespace stylo {

/// One verification question: texts by a known author and one questioned text.
struct Problem {
    std::string id;
    std::vector<std::string> known; // raw UTF-8
    std::string unknown;            // raw UTF-8
};

struct Corpus {
    Language language = Language::Other;
    std::vector<Problem> problems;
    std::string control; // optional background text
    std::optional<TruthSet> truth;
};

/// PAN-style directory tree: one subdirectory per problem holding
/// known01.txt..knownNN.txt and unknown.txt, with an optional truth.txt at
/// the root. The language is inferred from problem-id prefixes (EN, DU/NL,
/// GR, SP/ES) unless overridden.
Corpus load_corpus(const std::filesystem::path& root,
                   std::optional<Language> language_override = std::nullopt);

/// Write a corpus as the directory tree load_corpus reads.
void write_corpus(const Corpus& corpus, const std::filesystem::path& root);

Language language_from_problem_id(const std::string& id);

} // namespace stylo

#endif
