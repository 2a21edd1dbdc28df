// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_SCORING_HPP
#define STYLO_SCORING_HPP

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "stylo/model.hpp"
#include "stylo/preprocess.hpp"

namespace stylo {

/// N scored heads x M unknown documents of cross entropy (bits/char).
/// Documents too short to score leave invalid entries, which rank worst.
struct ScoreMatrix {
    std::vector<std::string> head_ids;
    std::vector<std::string> doc_ids;
    std::vector<double> entries;       // heads x docs, row-major
    std::vector<std::uint8_t> valid;   // parallel to entries

    int heads() const { return static_cast<int>(head_ids.size()); }
    int docs() const { return static_cast<int>(doc_ids.size()); }

    double at(int head, int doc) const {
        return entries[static_cast<std::size_t>(head) * doc_ids.size() + doc];
    }
    bool is_valid(int head, int doc) const {
        return valid[static_cast<std::size_t>(head) * doc_ids.size() + doc] != 0;
    }
    void set(int head, int doc, double value, bool ok = true) {
        const std::size_t i = static_cast<std::size_t>(head) * doc_ids.size() + doc;
        entries[i] = value;
        valid[i] = ok ? 1 : 0;
    }

    /// Tab-separated dump with head/doc id headers; invalid entries print NA.
    std::string to_tsv() const;
};

/// Entry (i, j) = cross entropy of unknown doc j under scored head i; the
/// control head, when present, is excluded. Too-short documents are recorded
/// as missing entries.
ScoreMatrix entropy_matrix(const ModelParams& params, std::span<const SymbolSequence> unknowns,
                           int skip);

/// Subtract each document's mean, then scale each head's row by its
/// population standard deviation (rows with near-zero spread become zeros).
/// Requires M >= 2.
ScoreMatrix normalize(const ScoreMatrix& matrix);

/// Square pairing: problem i owns head i and document i. Returns percentile
/// p_i = 1 - (midrank_i - 0.5)/M of entry (i, i) within row i, ascending, so
/// the lowest cross entropy earns the highest percentile. Missing diagonal
/// entries take the worst rank M.
std::vector<double> rank_unknowns(const ScoreMatrix& normalized);

/// Per-problem authorship scores in [0, 1]; 0.5 means "unanswered".
struct VerdictSet {
    std::vector<std::string> problem_ids;
    std::vector<double> scores;

    std::size_t size() const { return scores.size(); }
};

/// Linear map around the median: score = 0.5 + 0.5 (p - m)/d with
/// d = max |p_k - m|, clipped to [0, 1]; percentiles within
/// `uncertainty_radius` of the median score exactly 0.5.
VerdictSet align_scores(std::span<const double> percentiles,
                        std::span<const std::string> problem_ids, double uncertainty_radius);

/// Arithmetic mean per problem across members, re-aligned to the median so
/// the half-and-half constraint still holds.
VerdictSet ensemble_average(std::span<const VerdictSet> members);

/// Answers file: "<problem-id> <score>" per line, three decimals.
void write_answers(const VerdictSet& verdicts, const std::filesystem::path& file);
std::string format_answers(const VerdictSet& verdicts);
VerdictSet read_answers(const std::filesystem::path& file);

/// At most ceil(M/2) scores strictly above 0.5 and at most ceil(M/2)
/// strictly below.
bool balanced_answers(const VerdictSet& verdicts);

} // namespace stylo

#endif
