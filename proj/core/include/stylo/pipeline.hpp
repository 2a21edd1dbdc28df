// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_PIPELINE_HPP
#define STYLO_PIPELINE_HPP

#include <filesystem>
#include <optional>
#include <vector>

#include "stylo/config.hpp"
#include "stylo/corpus.hpp"
#include "stylo/metrics.hpp"
#include "stylo/scoring.hpp"
#include "stylo/trainer.hpp"

namespace stylo {

/// One ensemble: a shared corpus scored by several train configurations
/// whose verdicts are averaged.
struct EnsembleSpec {
    std::filesystem::path corpus_dir; // may be empty when the corpus is in memory
    std::filesystem::path output_path;
    std::vector<TrainConfig> members;

    void validate() const; // >= 1 member, distinct seeds
    static EnsembleSpec load(const std::filesystem::path& file);
    static EnsembleSpec parse_json(std::string_view text, const std::string& origin = "<string>");
    std::string to_json() const;
};

struct PipelineOptions {
    std::optional<double> radius;       // uncertainty radius; default per language
    std::optional<Language> language;   // override the corpus tag
    int jobs = 1;                       // concurrent ensemble members
};

struct PipelineResult {
    VerdictSet verdicts;
    std::vector<VerdictSet> member_verdicts;
    std::optional<Evaluation> evaluation;
    Alphabet alphabet;
};

/// A corpus canonicalized and encoded against one shared alphabet.
struct PreparedCorpus {
    Alphabet alphabet;
    std::vector<EncodedProblem> problems;
    std::vector<std::int32_t> control;
};

/// Canonicalize everything, induce the alphabet from the union of known,
/// unknown and control texts (or adopt `existing`), and encode.
PreparedCorpus prepare_corpus(const Corpus& corpus, const CanonicalRules& rules,
                              const Alphabet* existing = nullptr);

/// The uncertainty radius the paper's treatment implies per language:
/// 0 for Dutch, 0.02 otherwise.
double default_radius(Language lang);

/// Preprocess with one shared alphabet, then per member: swap short known
/// texts, train, score, normalize, rank and align; finally average the
/// members, write the answers file when requested, and evaluate against the
/// truth when present.
PipelineResult run_pipeline(const Corpus& corpus, const EnsembleSpec& spec,
                            const PipelineOptions& options = {});

} // namespace stylo

#endif
