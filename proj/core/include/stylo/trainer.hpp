// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_TRAINER_HPP
#define STYLO_TRAINER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stylo/config.hpp"
#include "stylo/model.hpp"
#include "stylo/preprocess.hpp"
#include "stylo/rng.hpp"

namespace stylo {

struct LeakSchedule {
    double leak0 = 0.0;
    double decay = 0.8;

    /// leak0 * decay^sub_epoch
    double rate(int sub_epoch) const;
};

/// Tensors shaped like a ModelParams; used for gradients and adagrad
/// accumulators.
struct ParamTensors {
    struct Head {
        std::vector<double> w;
        std::vector<double> b;
    };
    std::vector<double> w_xh;
    std::vector<double> w_hh;
    std::vector<double> b_h;
    std::vector<Head> heads;

    static ParamTensors zeros_like(const ModelParams& params);
    void fill(double value);
    bool all_finite() const;
};

using Gradients = ParamTensors;

/// Per-parameter squared-gradient sums; monotonically non-decreasing.
struct AdagradState {
    ParamTensors accum;

    static AdagradState for_config(const ModelParams& params, const TrainConfig& config);
};

/// Gaussian mode: every weight ~ N(0, 1/sqrt(fan-in)), biases zero. Zero
/// mode: output heads and all biases zero, recurrent/input weights gaussian.
/// Fully determined by config.seed.
ModelParams init_params(const TrainConfig& config, int vocab, int head_count,
                        bool has_control = false);

/// One verification problem after preprocessing.
struct EncodedProblem {
    std::string id;
    std::vector<SymbolSequence> known;
    SymbolSequence unknown;
};

/// When a problem has exactly one known text shorter than
/// swap_ratio x unknown length, exchange their roles: train on the longer
/// unknown text and score the shorter one.
EncodedProblem maybe_swap(EncodedProblem problem, double swap_ratio);

/// Corpus prepared for one training run: one head per author (problem) plus
/// an optional control stream.
struct TrainingInput {
    int vocab = 0;
    std::vector<std::vector<SymbolSequence>> author_texts; // head -> known texts
    std::vector<std::int32_t> control;                     // empty when absent

    int author_count() const { return static_cast<int>(author_texts.size()); }
};

struct TrainItem {
    int head;
    std::vector<std::int32_t> symbols;
};

/// Assemble one sub-epoch's ordered training stream. Sequential mode cycles
/// each author's texts by sub-epoch index; concatenated joins them; balanced
/// repeats texts until each author reaches the longest author-corpus length.
/// The control stream, when enabled, contributes one chunk for the extra
/// head, drawn sequentially with wraparound via control_cursor. Author order
/// is shuffled by the rng.
std::vector<TrainItem> make_sub_epoch(const TrainingInput& input, TextMode mode, bool use_control,
                                      int sub_epoch, Rng& rng, std::size_t& control_cursor);

/// Each non-owner head is included independently with probability rate.
std::vector<int> leak_assignment(int owner, int head_count, double rate, Rng& rng);

/// One training character: the symbol consumed at this step. The leaked set
/// applies to the prediction that targets this symbol (made from the
/// previous hidden state); it is ignored for the first symbol of a text and
/// for skipped steps.
struct TrainStep {
    std::int32_t symbol;
    int owner;
    std::vector<int> leaked;
};

/// Running BPTT state: hidden vector, activation history ring, pending
/// gradient accumulators. One context serves one single-threaded run.
class TrainerContext {
public:
    TrainerContext(const ModelParams& shape, const TrainConfig& config);

    /// Reset the hidden state and the skip counter for a new text.
    void start_text();

    /// Back-propagate the error of predicting `step.symbol` (skip-aware),
    /// then consume the symbol. Returns the owner's -log2 p for the
    /// prediction, or a negative value when no prediction was scored.
    double process_step(const ModelParams& params, const TrainStep& step, Rng* noise_rng);

    /// Apply pending gradients through adagrad and clear them.
    void apply_updates(ModelParams& params, AdagradState& adagrad);

    const Gradients& pending_gradients() const { return grads_; }
    const std::vector<double>& hidden() const { return h_; }

private:
    void emit_error(const ModelParams& params, std::int32_t target, int owner,
                    std::span<const int> leaked, double* owner_bits);
    void forward(const ModelParams& params, std::int32_t symbol, Rng* noise_rng);

    TrainConfig config_;
    int hidden_size_ = 0;
    int vocab_ = 0;
    std::size_t ring_size_ = 0;

    // history ring, newest entry at (total_steps_ - 1) % ring_size_
    std::vector<double> ring_h_;      // ring_size x H
    std::vector<double> ring_deriv_;  // ring_size x H
    std::vector<std::int32_t> ring_symbol_;
    std::vector<std::uint8_t> ring_start_;
    std::size_t total_steps_ = 0;
    std::size_t text_pos_ = 0;

    std::vector<double> h_;
    Gradients grads_;
    std::vector<std::uint8_t> head_dirty_;

    // scratch
    std::vector<double> preact_, logits_, delta_, dh_, dh_next_, delta_a_;
};

/// Spec-level batch operation: process `batch` continuing the running
/// context, then apply the accumulated deltas. Flush shorter batches at text
/// ends by calling with fewer steps.
void train_step_batch(ModelParams& params, AdagradState& adagrad, TrainerContext& ctx,
                      std::span<const TrainStep> batch, Rng* noise_rng);

/// Accumulated BPTT gradients over `steps` treated as one text, zero noise,
/// no updates applied. Used by the finite-difference checks.
Gradients compute_sequence_gradients(const ModelParams& params, std::span<const TrainStep> steps,
                                     const TrainConfig& config);

struct TrainLogRow {
    int sub_epoch = 0;
    double leak_rate = 0.0;
    std::vector<double> head_bits; // mean training bits/char per head
};

struct TrainResult {
    ModelParams params;
    std::vector<TrainLogRow> log;
};

/// Tab-separated: sub_epoch, leak_rate, then one bits/char column per head.
std::string format_training_log(const std::vector<TrainLogRow>& log);

/// Run the full sub-epoch schedule over the prepared corpus.
TrainResult train_run(const TrainingInput& input, const TrainConfig& config);

} // namespace stylo

#endif
