// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_MODEL_HPP
#define STYLO_MODEL_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "stylo/preprocess.hpp"
#include "stylo/rng.hpp"

namespace stylo {

/// Rectified shifted square root: sqrt(x+1) - 1 for x >= 0, else 0.
double resqrt(double x);

/// Derivative expressed through the forward output y = resqrt(x):
/// 1 / (2(y+1)) when the forward input was >= 0 (right limit 0.5 at x = 0),
/// else 0.
double resqrt_deriv_from_output(double y, bool input_nonnegative);

/// Max-subtracted softmax; the result sums to 1 within 1e-12.
std::vector<double> softmax(std::span<const double> logits);
void softmax_inplace(std::span<double> values);

/// One per-author (or control) output group: w is V x H row-major with one
/// row per output symbol, b has V entries.
struct OutputHead {
    std::vector<double> w;
    std::vector<double> b;
};

/// All weights of the shared recurrent layer plus the output heads.
/// Dimensions are fixed at construction. The control head, when present,
/// is the last one and is excluded from scoring.
struct ModelParams {
    int vocab = 0;  // V
    int hidden = 0; // H
    bool has_control = false;
    bool trained_backward = false; // documents must be reversed for scoring

    std::vector<double> w_xh; // V x H, row per input symbol
    std::vector<double> w_hh; // H x H row-major
    std::vector<double> b_h;  // H
    std::vector<OutputHead> heads;

    std::uint64_t alphabet_hash = 0;

    int head_count() const { return static_cast<int>(heads.size()); }
    int scored_heads() const { return head_count() - (has_control ? 1 : 0); }

    static ModelParams zeros(int vocab, int hidden, int heads, bool has_control = false);
    bool all_finite() const;
};

struct HiddenState {
    std::vector<double> h; // all components >= 0 (ReSQRT range)

    static HiddenState zero(int hidden) { return HiddenState{std::vector<double>(hidden, 0.0)}; }
};

struct StepOutput {
    std::vector<std::vector<double>> distributions; // head -> V probabilities
};

/// Advance one step: a = W_hh h + W_xh[symbol] + b_h (+ N(0, sigma^2) noise
/// per component when noise_sigma > 0), new state = resqrt(a), and every
/// head's softmax over the new state. Noise is a training-time device; pass
/// 0 when scoring. Throws InputError when symbol is out of range.
std::pair<HiddenState, StepOutput> forward_step(const HiddenState& state, std::int32_t symbol,
                                                const ModelParams& params, double noise_sigma = 0.0,
                                                Rng* rng = nullptr);

/// Mean -log2 probability assigned to each next symbol, ignoring the first
/// `skip` predictions, starting from the zero state with zero noise.
/// Throws InsufficientTextError when the document is shorter than skip + 2.
double sequence_cross_entropy(const SymbolSequence& doc, const ModelParams& params, int head,
                              int skip);

/// One forward pass, cross entropy for several heads at once. Same
/// arithmetic per head as sequence_cross_entropy.
std::vector<double> multi_head_cross_entropy(const SymbolSequence& doc, const ModelParams& params,
                                             std::span<const int> head_indices, int skip);

namespace detail {

/// a := W_hh h_prev + W_xh[symbol] + b_h, written into `preact` (size H).
void hidden_preactivation(const ModelParams& params, std::span<const double> h_prev,
                          std::int32_t symbol, std::span<double> preact);

/// logits := head.w x h + head.b, written into `logits` (size V).
void head_logits(const OutputHead& head, std::span<const double> h, std::span<double> logits);

/// log(sum(exp(z))) with max subtraction.
double log_sum_exp(std::span<const double> z);

} // namespace detail

} // namespace stylo

#endif
