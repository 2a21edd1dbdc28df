// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "stylo/errors.hpp"

namespace stylo {

std::string ScoreMatrix::to_tsv() const {
    std::ostringstream out;
    out << "head";
    for (const std::string& id : doc_ids) out << '\t' << id;
    out << '\n';
    char buf[32];
    for (int i = 0; i < heads(); ++i) {
        out << head_ids[i];
        for (int j = 0; j < docs(); ++j) {
            if (is_valid(i, j)) {
                std::snprintf(buf, sizeof buf, "%.6f", at(i, j));
                out << '\t' << buf;
            } else {
                out << "\tNA";
            }
        }
        out << '\n';
    }
    return out.str();
}

ScoreMatrix entropy_matrix(const ModelParams& params, std::span<const SymbolSequence> unknowns,
                           int skip) {
    const int n_heads = params.scored_heads();
    const int n_docs = static_cast<int>(unknowns.size());

    ScoreMatrix matrix;
    matrix.head_ids.reserve(static_cast<std::size_t>(n_heads));
    for (int i = 0; i < n_heads; ++i) matrix.head_ids.push_back("head" + std::to_string(i));
    matrix.doc_ids.reserve(static_cast<std::size_t>(n_docs));
    for (const SymbolSequence& doc : unknowns) matrix.doc_ids.push_back(doc.doc_id);
    matrix.entries.assign(static_cast<std::size_t>(n_heads) * n_docs, 0.0);
    matrix.valid.assign(static_cast<std::size_t>(n_heads) * n_docs, 0);

    std::vector<int> head_indices(static_cast<std::size_t>(n_heads));
    std::iota(head_indices.begin(), head_indices.end(), 0);

    for (int j = 0; j < n_docs; ++j) {
        try {
            const std::vector<double> bits =
                multi_head_cross_entropy(unknowns[j], params, head_indices, skip);
            for (int i = 0; i < n_heads; ++i) matrix.set(i, j, bits[i]);
        } catch (const InsufficientTextError&) {
            // too short to score: leave the column missing; it ranks worst
        }
    }
    return matrix;
}

ScoreMatrix normalize(const ScoreMatrix& matrix) {
    const int n_heads = matrix.heads();
    const int n_docs = matrix.docs();
    if (n_docs < 2) throw NumericError("normalization needs at least 2 documents");

    ScoreMatrix out = matrix;

    // Column (document) centering: some texts are harder for every head.
    for (int j = 0; j < n_docs; ++j) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < n_heads; ++i) {
            if (!matrix.is_valid(i, j)) continue;
            sum += matrix.at(i, j);
            ++count;
        }
        if (count == 0) continue;
        const double mean = sum / count;
        for (int i = 0; i < n_heads; ++i) {
            if (out.is_valid(i, j)) out.set(i, j, out.at(i, j) - mean);
        }
    }

    // Row (head) scaling by population standard deviation.
    for (int i = 0; i < n_heads; ++i) {
        double sum = 0.0;
        int count = 0;
        for (int j = 0; j < n_docs; ++j) {
            if (!out.is_valid(i, j)) continue;
            sum += out.at(i, j);
            ++count;
        }
        if (count == 0) continue;
        const double mean = sum / count;
        double var = 0.0;
        for (int j = 0; j < n_docs; ++j) {
            if (!out.is_valid(i, j)) continue;
            const double d = out.at(i, j) - mean;
            var += d * d;
        }
        const double std_dev = std::sqrt(var / count);
        for (int j = 0; j < n_docs; ++j) {
            if (!out.is_valid(i, j)) continue;
            out.set(i, j, std_dev < 1e-12 ? 0.0 : out.at(i, j) / std_dev);
        }
    }
    return out;
}

std::vector<double> rank_unknowns(const ScoreMatrix& normalized) {
    const int n_heads = normalized.heads();
    const int n_docs = normalized.docs();
    if (n_heads != n_docs) {
        throw NumericError("rank_unknowns needs a square head/document pairing, got " +
                           std::to_string(n_heads) + "x" + std::to_string(n_docs));
    }
    const int m = n_docs;

    std::vector<double> percentiles(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double rank;
        if (!normalized.is_valid(i, i)) {
            rank = static_cast<double>(m); // conservative worst rank
        } else {
            const double own = normalized.at(i, i);
            int below = 0;
            int tied = 0;
            for (int j = 0; j < m; ++j) {
                // missing competitors count as infinitely bad (never below)
                if (!normalized.is_valid(i, j)) continue;
                const double v = normalized.at(i, j);
                if (v < own) ++below;
                else if (v == own) ++tied;
            }
            rank = below + (tied + 1) / 2.0; // midrank; own entry is among the ties
        }
        percentiles[i] = 1.0 - (rank - 0.5) / m;
    }
    return percentiles;
}

VerdictSet align_scores(std::span<const double> percentiles,
                        std::span<const std::string> problem_ids, double uncertainty_radius) {
    if (percentiles.size() != problem_ids.size()) {
        throw NumericError("align_scores: ids and percentiles disagree in length");
    }
    const std::size_t m = percentiles.size();
    VerdictSet verdicts;
    verdicts.problem_ids.assign(problem_ids.begin(), problem_ids.end());
    verdicts.scores.resize(m);
    if (m == 0) return verdicts;

    std::vector<double> sorted(percentiles.begin(), percentiles.end());
    std::sort(sorted.begin(), sorted.end());
    const double median = m % 2 == 1 ? sorted[m / 2]
                                     : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

    double spread = 0.0;
    for (double p : percentiles) spread = std::max(spread, std::abs(p - median));
    spread = std::max(spread, 1e-12);

    for (std::size_t i = 0; i < m; ++i) {
        const double offset = percentiles[i] - median;
        if (std::abs(offset) <= uncertainty_radius) {
            verdicts.scores[i] = 0.5;
            continue;
        }
        verdicts.scores[i] = std::clamp(0.5 + 0.5 * offset / spread, 0.0, 1.0);
    }
    return verdicts;
}

VerdictSet ensemble_average(std::span<const VerdictSet> members) {
    if (members.empty()) throw ConfigError("ensemble_average: no members");
    const VerdictSet& first = members[0];
    const std::size_t m = first.size();

    std::map<std::string, std::size_t> id_pos;
    for (std::size_t i = 0; i < m; ++i) id_pos[first.problem_ids[i]] = i;
    if (id_pos.size() != m) throw CorpusError("ensemble_average: duplicate problem ids");

    std::vector<double> sums(m, 0.0);
    for (const VerdictSet& member : members) {
        if (member.size() != m) throw CorpusError("ensemble_average: mismatched problem sets");
        for (std::size_t i = 0; i < m; ++i) {
            const auto it = id_pos.find(member.problem_ids[i]);
            if (it == id_pos.end()) {
                throw CorpusError("ensemble_average: member scores unknown problem '" +
                                  member.problem_ids[i] + "'");
            }
            sums[it->second] += member.scores[i];
        }
    }
    for (double& s : sums) s /= static_cast<double>(members.size());

    // Averaging can drift the distribution off the median; re-align so the
    // half-and-half constraint holds. Radius 0: members already applied theirs.
    return align_scores(sums, first.problem_ids, 0.0);
}

std::string format_answers(const VerdictSet& verdicts) {
    std::ostringstream out;
    char buf[16];
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.3f", verdicts.scores[i]);
        out << verdicts.problem_ids[i] << ' ' << buf << '\n';
    }
    return out.str();
}

void write_answers(const VerdictSet& verdicts, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write answers file: " + file.string());
    out << format_answers(verdicts);
}

VerdictSet read_answers(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot read answers file: " + file.string());
    VerdictSet verdicts;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string id;
        double score;
        if (!(row >> id >> score)) {
            throw InputError("answers file " + file.string() + ": bad line " +
                             std::to_string(line_no));
        }
        verdicts.problem_ids.push_back(id);
        verdicts.scores.push_back(score);
    }
    return verdicts;
}

bool balanced_answers(const VerdictSet& verdicts) {
    const std::size_t m = verdicts.size();
    std::size_t above = 0;
    std::size_t below = 0;
    for (double s : verdicts.scores) {
        if (s > 0.5) ++above;
        else if (s < 0.5) ++below;
    }
    const std::size_t half = (m + 1) / 2;
    return above <= half && below <= half;
}

} // namespace stylo
