// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_METRICS_HPP
#define STYLO_METRICS_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stylo/scoring.hpp"

namespace stylo {

/// Ground-truth labels; true means same-author.
struct TruthSet {
    std::vector<std::string> problem_ids;
    std::vector<bool> labels;

    std::size_t size() const { return labels.size(); }
    std::optional<bool> label_of(const std::string& problem_id) const;

    /// Half of the labels being positive is the task's design constraint;
    /// deviations are reported, not fatal.
    bool is_balanced() const;

    /// "<problem-id> <Y|N>" per line, space or tab separated.
    static TruthSet load(const std::filesystem::path& file);
    static TruthSet parse(std::string_view text, const std::string& origin = "<string>");
    void save(const std::filesystem::path& file) const;
};

/// Probability that a random positive outscores a random negative, ties
/// counting one half; computed by midrank summation. Throws NumericError
/// unless both classes are present.
double auc(std::span<const double> scores, const std::vector<bool>& truth);

/// (n_c + n_u n_c / n) / n with scores above 0.5 read as yes, below as no,
/// and exactly 0.5 as unanswered.
double c_at_1(std::span<const double> scores, const std::vector<bool>& truth);

double final_score(std::span<const double> scores, const std::vector<bool>& truth);

struct Evaluation {
    double auc = 0.0;
    double c_at_1 = 0.0;
    double product = 0.0;
};

/// Join verdicts to truth by problem id (every verdict must be labelled).
Evaluation evaluate(const VerdictSet& verdicts, const TruthSet& truth);

} // namespace stylo

#endif
