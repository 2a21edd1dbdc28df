// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "stylo/errors.hpp"

namespace stylo {

std::optional<bool> TruthSet::label_of(const std::string& problem_id) const {
    for (std::size_t i = 0; i < problem_ids.size(); ++i) {
        if (problem_ids[i] == problem_id) return labels[i];
    }
    return std::nullopt;
}

bool TruthSet::is_balanced() const {
    const std::size_t positives =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    return 2 * positives == labels.size();
}

TruthSet TruthSet::parse(std::string_view text, const std::string& origin) {
    TruthSet truth;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    std::map<std::string, bool> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string id, label;
        if (!(row >> id >> label)) {
            throw InputError(origin + ": bad truth line " + std::to_string(line_no));
        }
        bool value;
        if (label == "Y" || label == "y" || label == "YES") value = true;
        else if (label == "N" || label == "n" || label == "NO") value = false;
        else throw InputError(origin + ": bad label '" + label + "' on line " + std::to_string(line_no));
        if (!seen.emplace(id, value).second) {
            throw CorpusError(origin + ": duplicate problem id '" + id + "'");
        }
        truth.problem_ids.push_back(id);
        truth.labels.push_back(value);
    }
    return truth;
}

TruthSet TruthSet::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read truth file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), file.string());
}

void TruthSet::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write truth file: " + file.string());
    for (std::size_t i = 0; i < size(); ++i) {
        out << problem_ids[i] << ' ' << (labels[i] ? 'Y' : 'N') << '\n';
    }
}

double auc(std::span<const double> scores, const std::vector<bool>& truth) {
    if (scores.size() != truth.size()) throw NumericError("auc: size mismatch");
    const std::size_t n = scores.size();
    std::size_t positives = 0;
    for (bool label : truth) positives += label ? 1 : 0;
    const std::size_t negatives = n - positives;
    if (positives == 0 || negatives == 0) {
        throw NumericError("AUC undefined: need at least one positive and one negative");
    }

    // Midrank (Mann-Whitney) formulation, exact under ties.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&scores](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (truth[order[k]]) positive_rank_sum += midrank;
        }
        i = j;
    }

    const double p = static_cast<double>(positives);
    const double q = static_cast<double>(negatives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double c_at_1(std::span<const double> scores, const std::vector<bool>& truth) {
    if (scores.size() != truth.size()) throw NumericError("c_at_1: size mismatch");
    const std::size_t n = scores.size();
    if (n == 0) throw NumericError("c_at_1 undefined on an empty set");

    std::size_t correct = 0;
    std::size_t unanswered = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (scores[i] == 0.5) {
            ++unanswered;
        } else if ((scores[i] > 0.5) == truth[i]) {
            ++correct;
        }
    }
    const double nn = static_cast<double>(n);
    const double nc = static_cast<double>(correct);
    const double nu = static_cast<double>(unanswered);
    return (nc + nu * nc / nn) / nn;
}

double final_score(std::span<const double> scores, const std::vector<bool>& truth) {
    return auc(scores, truth) * c_at_1(scores, truth);
}

Evaluation evaluate(const VerdictSet& verdicts, const TruthSet& truth) {
    std::vector<double> scores;
    std::vector<bool> labels;
    scores.reserve(verdicts.size());
    labels.reserve(verdicts.size());
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto label = truth.label_of(verdicts.problem_ids[i]);
        if (!label) {
            throw CorpusError("no truth label for problem '" + verdicts.problem_ids[i] + "'");
        }
        scores.push_back(verdicts.scores[i]);
        labels.push_back(*label);
    }
    Evaluation eval;
    eval.auc = auc(scores, labels);
    eval.c_at_1 = c_at_1(scores, labels);
    eval.product = eval.auc * eval.c_at_1;
    return eval;
}

} // namespace stylo
