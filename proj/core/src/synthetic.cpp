// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/synthetic.hpp"

#include <cmath>
#include <cstdio>

#include "stylo/errors.hpp"
#include "stylo/rng.hpp"

namespace stylo {

namespace {

constexpr std::string_view kAlphabet = "abcdefghijklmnop "; // 17 symbols

struct MarkovChain {
    std::vector<double> rows; // S x S transition probabilities
    int size = 0;

    static MarkovChain random(double bias_strength, Rng& rng) {
        MarkovChain chain;
        chain.size = static_cast<int>(kAlphabet.size());
        chain.rows.resize(static_cast<std::size_t>(chain.size) * chain.size);
        for (int i = 0; i < chain.size; ++i) {
            double* row = chain.rows.data() + static_cast<std::size_t>(i) * chain.size;
            double sum = 0.0;
            for (int j = 0; j < chain.size; ++j) {
                row[j] = std::exp(bias_strength * gaussian(rng));
                sum += row[j];
            }
            for (int j = 0; j < chain.size; ++j) row[j] /= sum;
        }
        return chain;
    }

    std::string sample(int length, Rng& rng) const {
        std::string text;
        text.reserve(static_cast<std::size_t>(length));
        int state = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(size)));
        for (int i = 0; i < length; ++i) {
            text.push_back(kAlphabet[static_cast<std::size_t>(state)]);
            const double* row = rows.data() + static_cast<std::size_t>(state) * size;
            const double u = uniform01(rng);
            double cum = 0.0;
            int next = size - 1;
            for (int j = 0; j < size; ++j) {
                cum += row[j];
                if (u < cum) {
                    next = j;
                    break;
                }
            }
            state = next;
        }
        return text;
    }
};

} // namespace

Corpus generate_synthetic(const SyntheticSpec& spec) {
    if (spec.author_families < 2) throw ConfigError("synthetic corpus needs >= 2 author families");
    if (spec.problems < 1) throw ConfigError("synthetic corpus needs >= 1 problem");
    if (spec.chars_per_doc < 16) throw ConfigError("synthetic documents must have >= 16 chars");
    if (spec.known_per_problem < 1) throw ConfigError("each problem needs >= 1 known text");
    if (spec.distinctiveness < 0.0) throw ConfigError("distinctiveness must be >= 0");

    Rng rng(spec.seed);

    std::vector<MarkovChain> families;
    families.reserve(static_cast<std::size_t>(spec.author_families));
    for (int f = 0; f < spec.author_families; ++f) {
        families.push_back(MarkovChain::random(spec.distinctiveness, rng));
    }

    // Half yes, half no, in shuffled order.
    std::vector<bool> labels;
    labels.reserve(static_cast<std::size_t>(spec.problems));
    for (int i = 0; i < spec.problems; ++i) labels.push_back(i < spec.problems / 2);
    shuffle(labels, rng);

    const auto doc_length = [&rng, &spec]() {
        // ~chars_per_doc with a 10% spread
        const double scale = 0.9 + 0.2 * uniform01(rng);
        return std::max(16, static_cast<int>(std::lround(scale * spec.chars_per_doc)));
    };

    Corpus corpus;
    corpus.language = Language::Other;
    TruthSet truth;
    for (int i = 0; i < spec.problems; ++i) {
        Problem problem;
        char id[16];
        std::snprintf(id, sizeof id, "SY%03d", i + 1);
        problem.id = id;

        const int known_family = i % spec.author_families;
        int unknown_family = known_family;
        if (!labels[static_cast<std::size_t>(i)]) {
            const auto offset = 1 + uniform_below(rng, static_cast<std::uint64_t>(spec.author_families - 1));
            unknown_family = (known_family + static_cast<int>(offset)) % spec.author_families;
        }

        for (int k = 0; k < spec.known_per_problem; ++k) {
            problem.known.push_back(
                families[static_cast<std::size_t>(known_family)].sample(doc_length(), rng));
        }
        problem.unknown = families[static_cast<std::size_t>(unknown_family)].sample(doc_length(), rng);

        truth.problem_ids.push_back(problem.id);
        truth.labels.push_back(labels[static_cast<std::size_t>(i)]);
        corpus.problems.push_back(std::move(problem));
    }
    corpus.truth = std::move(truth);
    return corpus;
}

} // namespace stylo
