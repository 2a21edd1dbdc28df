// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_SYNTHETIC_HPP
#define STYLO_SYNTHETIC_HPP

#include <cstdint>

#include "stylo/corpus.hpp"

namespace stylo {

/// Desk-scale benchmark corpus: each author family is a seeded order-1
/// Markov chain over a small alphabet. Positive problems draw known and
/// unknown text from the same chain, negatives from different chains;
/// exactly half the problems are positive (when the count is even).
struct SyntheticSpec {
    int author_families = 2;
    int problems = 20;
    int chars_per_doc = 3000;
    int known_per_problem = 1;
    /// Strength of the per-author transition biases; 0 makes every family an
    /// identical uniform chain (indistinguishable authors).
    double distinctiveness = 1.5;
    std::uint64_t seed = 1;
};

/// Deterministic in the seed; the returned corpus carries its truth set.
Corpus generate_synthetic(const SyntheticSpec& spec);

} // namespace stylo

#endif
