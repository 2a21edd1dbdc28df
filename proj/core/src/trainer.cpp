// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "stylo/errors.hpp"

namespace stylo {

double LeakSchedule::rate(int sub_epoch) const {
    return leak0 * std::pow(decay, static_cast<double>(sub_epoch));
}

ParamTensors ParamTensors::zeros_like(const ModelParams& params) {
    ParamTensors t;
    t.w_xh.assign(params.w_xh.size(), 0.0);
    t.w_hh.assign(params.w_hh.size(), 0.0);
    t.b_h.assign(params.b_h.size(), 0.0);
    t.heads.resize(params.heads.size());
    for (std::size_t n = 0; n < params.heads.size(); ++n) {
        t.heads[n].w.assign(params.heads[n].w.size(), 0.0);
        t.heads[n].b.assign(params.heads[n].b.size(), 0.0);
    }
    return t;
}

void ParamTensors::fill(double value) {
    const auto set = [value](std::vector<double>& v) { std::fill(v.begin(), v.end(), value); };
    set(w_xh);
    set(w_hh);
    set(b_h);
    for (Head& head : heads) {
        set(head.w);
        set(head.b);
    }
}

bool ParamTensors::all_finite() const {
    const auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(w_xh) || !finite(w_hh) || !finite(b_h)) return false;
    for (const Head& head : heads) {
        if (!finite(head.w) || !finite(head.b)) return false;
    }
    return true;
}

AdagradState AdagradState::for_config(const ModelParams& params, const TrainConfig& config) {
    AdagradState state{ParamTensors::zeros_like(params)};
    // The squared-updates variant starts from 1 so its first steps are plain
    // SGD instead of a division by epsilon.
    if (config.adagrad_accumulate_updates) state.accum.fill(1.0);
    return state;
}

namespace {

ModelParams init_params_with(const TrainConfig& config, int vocab, int head_count,
                             bool has_control, Rng& rng) {
    if (vocab < 2) throw ConfigError("init_params requires V >= 2");
    if (head_count < 1) throw ConfigError("init_params requires at least one head");
    if (config.hidden < 0) throw ConfigError("hidden size must be >= 0");

    const int H = config.hidden;
    ModelParams params = ModelParams::zeros(vocab, H, head_count, has_control);

    const auto fill_gaussian = [&rng](std::vector<double>& v, int fan_in) {
        const double std_dev = fan_in > 0 ? 1.0 / std::sqrt(static_cast<double>(fan_in)) : 0.0;
        for (double& x : v) x = std_dev * gaussian(rng);
    };

    fill_gaussian(params.w_xh, vocab);
    fill_gaussian(params.w_hh, H);
    // b_h stays zero
    if (config.init_mode == InitMode::Gaussian) {
        for (OutputHead& head : params.heads) {
            fill_gaussian(head.w, H);
            // head bias stays zero
        }
    }
    // zero mode: heads remain all-zero
    return params;
}

} // namespace

ModelParams init_params(const TrainConfig& config, int vocab, int head_count, bool has_control) {
    Rng rng(config.seed);
    return init_params_with(config, vocab, head_count, has_control, rng);
}

EncodedProblem maybe_swap(EncodedProblem problem, double swap_ratio) {
    if (problem.known.size() == 1) {
        const double known_len = static_cast<double>(problem.known[0].size());
        const double unknown_len = static_cast<double>(problem.unknown.size());
        if (known_len < swap_ratio * unknown_len) {
            std::swap(problem.known[0], problem.unknown);
        }
    }
    return problem;
}

std::vector<TrainItem> make_sub_epoch(const TrainingInput& input, TextMode mode, bool use_control,
                                      int sub_epoch, Rng& rng, std::size_t& control_cursor) {
    const int authors = input.author_count();
    if (authors == 0) throw CorpusError("sub-epoch requested for an empty corpus");
    std::size_t total_chars = 0;
    std::size_t total_texts = 0;
    std::size_t max_author_chars = 0;
    for (int a = 0; a < authors; ++a) {
        const auto& texts = input.author_texts[a];
        if (texts.empty()) throw CorpusError("author " + std::to_string(a) + " has no training text");
        std::size_t author_chars = 0;
        for (const SymbolSequence& t : texts) author_chars += t.size();
        total_chars += author_chars;
        total_texts += texts.size();
        max_author_chars = std::max(max_author_chars, author_chars);
    }

    // One group of texts per head; groups are shuffled, texts within a group
    // keep their order.
    std::vector<std::vector<TrainItem>> groups;
    groups.reserve(static_cast<std::size_t>(authors) + 1);

    for (int a = 0; a < authors; ++a) {
        const auto& texts = input.author_texts[a];
        std::vector<TrainItem> group;
        switch (mode) {
        case TextMode::Sequential: {
            const std::size_t pick = static_cast<std::size_t>(sub_epoch) % texts.size();
            group.push_back({a, texts[pick].indices});
            break;
        }
        case TextMode::Concatenated: {
            TrainItem item{a, {}};
            for (const SymbolSequence& t : texts) {
                item.symbols.insert(item.symbols.end(), t.indices.begin(), t.indices.end());
            }
            group.push_back(std::move(item));
            break;
        }
        case TextMode::Balanced: {
            std::size_t cum = 0;
            std::size_t next = 0;
            while (cum < max_author_chars) {
                const SymbolSequence& t = texts[next % texts.size()];
                ++next;
                if (t.size() == 0) {
                    if (next >= texts.size() && cum == 0) break; // all texts empty
                    continue;
                }
                group.push_back({a, t.indices});
                cum += t.size();
            }
            break;
        }
        }
        groups.push_back(std::move(group));
    }

    if (use_control) {
        if (input.control.empty()) throw ConfigError("control corpus requested but empty");
        const std::size_t denom = std::max<std::size_t>(total_texts, 1);
        const std::size_t chunk = std::max<std::size_t>(total_chars / denom, 1);
        TrainItem item{authors, {}};
        item.symbols.reserve(chunk);
        for (std::size_t i = 0; i < chunk; ++i) {
            item.symbols.push_back(input.control[control_cursor]);
            control_cursor = (control_cursor + 1) % input.control.size();
        }
        groups.push_back({std::move(item)});
    }

    shuffle(groups, rng);

    std::vector<TrainItem> stream;
    for (auto& group : groups) {
        for (auto& item : group) stream.push_back(std::move(item));
    }
    return stream;
}

std::vector<int> leak_assignment(int owner, int head_count, double rate, Rng& rng) {
    std::vector<int> leaked;
    for (int n = 0; n < head_count; ++n) {
        if (n == owner) continue;
        if (uniform01(rng) < rate) leaked.push_back(n);
    }
    return leaked;
}

TrainerContext::TrainerContext(const ModelParams& shape, const TrainConfig& config)
    : config_(config),
      hidden_size_(shape.hidden),
      vocab_(shape.vocab),
      ring_size_(static_cast<std::size_t>(config.bptt_depth) + 1),
      grads_(ParamTensors::zeros_like(shape)) {
    config_.validate();
    ring_h_.assign(ring_size_ * static_cast<std::size_t>(hidden_size_), 0.0);
    ring_deriv_.assign(ring_size_ * static_cast<std::size_t>(hidden_size_), 0.0);
    ring_symbol_.assign(ring_size_, 0);
    ring_start_.assign(ring_size_, 0);
    h_.assign(static_cast<std::size_t>(hidden_size_), 0.0);
    head_dirty_.assign(shape.heads.size(), 0);
    preact_.resize(static_cast<std::size_t>(hidden_size_));
    logits_.resize(static_cast<std::size_t>(vocab_));
    delta_.resize(static_cast<std::size_t>(vocab_));
    dh_.resize(static_cast<std::size_t>(hidden_size_));
    dh_next_.resize(static_cast<std::size_t>(hidden_size_));
    delta_a_.resize(static_cast<std::size_t>(hidden_size_));
}

void TrainerContext::start_text() {
    std::fill(h_.begin(), h_.end(), 0.0);
    text_pos_ = 0;
}

void TrainerContext::forward(const ModelParams& params, std::int32_t symbol, Rng* noise_rng) {
    if (symbol < 0 || symbol >= vocab_) {
        throw InputError("training symbol " + std::to_string(symbol) + " out of range");
    }
    const int H = hidden_size_;
    const std::size_t slot = total_steps_ % ring_size_;
    double* slot_h = ring_h_.data() + slot * static_cast<std::size_t>(H);
    double* slot_deriv = ring_deriv_.data() + slot * static_cast<std::size_t>(H);

    detail::hidden_preactivation(params, h_, symbol, {preact_.data(), static_cast<std::size_t>(H)});
    if (config_.noise_sigma > 0.0 && noise_rng != nullptr) {
        for (int i = 0; i < H; ++i) preact_[i] += config_.noise_sigma * gaussian(*noise_rng);
    }
    for (int i = 0; i < H; ++i) {
        const double a = preact_[i];
        const double y = resqrt(a);
        slot_h[i] = y;
        slot_deriv[i] = resqrt_deriv_from_output(y, a >= 0.0);
        h_[i] = y;
    }
    ring_symbol_[slot] = symbol;
    ring_start_[slot] = text_pos_ == 0 ? 1 : 0;
    ++total_steps_;
    ++text_pos_;
}

void TrainerContext::emit_error(const ModelParams& params, std::int32_t target, int owner,
                                std::span<const int> leaked, double* owner_bits) {
    const int H = hidden_size_;
    const int V = vocab_;
    const std::size_t newest = (total_steps_ - 1) % ring_size_;
    const double* out_h = ring_h_.data() + newest * static_cast<std::size_t>(H);

    std::fill(dh_.begin(), dh_.end(), 0.0);

    const auto backprop_head = [&](int n, bool is_owner) {
        const OutputHead& head = params.heads[static_cast<std::size_t>(n)];
        detail::head_logits(head, {out_h, static_cast<std::size_t>(H)},
                            {logits_.data(), static_cast<std::size_t>(V)});
        softmax_inplace({logits_.data(), static_cast<std::size_t>(V)});
        const double p_target = logits_[static_cast<std::size_t>(target)];
        if (is_owner && owner_bits != nullptr) {
            *owner_bits = -std::log2(p_target);
            if (!std::isfinite(*owner_bits) && p_target > 0.0) {
                throw NumericError("non-finite training loss");
            }
        }
        ParamTensors::Head& grad = grads_.heads[static_cast<std::size_t>(n)];
        head_dirty_[static_cast<std::size_t>(n)] = 1;
        for (int v = 0; v < V; ++v) {
            const double d = logits_[v] - (v == target ? 1.0 : 0.0);
            grad.b[v] += d;
            if (H > 0) {
                double* grow = grad.w.data() + static_cast<std::size_t>(v) * H;
                const double* wrow = head.w.data() + static_cast<std::size_t>(v) * H;
                for (int j = 0; j < H; ++j) {
                    grow[j] += d * out_h[j];
                    dh_[j] += d * wrow[j];
                }
            }
        }
    };

    backprop_head(owner, true);
    for (int n : leaked) {
        if (n == owner) continue;
        backprop_head(n, false);
    }

    if (H == 0) return;

    double norm0 = 0.0;
    for (int j = 0; j < H; ++j) norm0 += dh_[j] * dh_[j];
    norm0 = std::sqrt(norm0);
    if (norm0 == 0.0) return;
    const double cutoff = config_.bptt_cutoff_ratio * norm0;

    // Unroll back through the history ring: newest step first, stopping at
    // the depth cap, a text boundary, or once the error norm decays below
    // the adaptive cutoff.
    for (int depth = 0; depth < config_.bptt_depth; ++depth) {
        const std::size_t step_index = total_steps_ - 1 - static_cast<std::size_t>(depth);
        const std::size_t slot = step_index % ring_size_;
        const double* deriv = ring_deriv_.data() + slot * static_cast<std::size_t>(H);
        const bool at_text_start = ring_start_[slot] != 0;

        for (int j = 0; j < H; ++j) delta_a_[j] = dh_[j] * deriv[j];

        for (int j = 0; j < H; ++j) grads_.b_h[j] += delta_a_[j];
        {
            double* xrow = grads_.w_xh.data() +
                           static_cast<std::size_t>(ring_symbol_[slot]) * static_cast<std::size_t>(H);
            for (int j = 0; j < H; ++j) xrow[j] += delta_a_[j];
        }
        if (!at_text_start) {
            const std::size_t prev_slot = (step_index - 1) % ring_size_;
            const double* h_prev = ring_h_.data() + prev_slot * static_cast<std::size_t>(H);
            for (int j = 0; j < H; ++j) {
                const double dj = delta_a_[j];
                if (dj == 0.0) continue;
                double* grow = grads_.w_hh.data() + static_cast<std::size_t>(j) * H;
                for (int i = 0; i < H; ++i) grow[i] += dj * h_prev[i];
            }
        }

        if (at_text_start || depth + 1 >= config_.bptt_depth) break;

        std::fill(dh_next_.begin(), dh_next_.end(), 0.0);
        for (int j = 0; j < H; ++j) {
            const double dj = delta_a_[j];
            if (dj == 0.0) continue;
            const double* wrow = params.w_hh.data() + static_cast<std::size_t>(j) * H;
            for (int i = 0; i < H; ++i) dh_next_[i] += dj * wrow[i];
        }
        std::swap(dh_, dh_next_);

        double norm = 0.0;
        for (int j = 0; j < H; ++j) norm += dh_[j] * dh_[j];
        if (std::sqrt(norm) < cutoff) break;
    }
}

double TrainerContext::process_step(const ModelParams& params, const TrainStep& step,
                                    Rng* noise_rng) {
    double owner_bits = -1.0;
    if (text_pos_ >= static_cast<std::size_t>(config_.skip_chars) + 1) {
        emit_error(params, step.symbol, step.owner, step.leaked, &owner_bits);
    }
    forward(params, step.symbol, noise_rng);
    return owner_bits;
}

void TrainerContext::apply_updates(ModelParams& params, AdagradState& adagrad) {
    const double lr = config_.learn_scale;
    const double eps = config_.adagrad_epsilon;
    const bool by_updates = config_.adagrad_accumulate_updates;

    const auto apply = [&](std::vector<double>& value, std::vector<double>& grad,
                           std::vector<double>& accum) {
        const std::size_t n = value.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double g = grad[i];
            if (g == 0.0) continue;
            if (by_updates) {
                const double step = lr * g / (std::sqrt(accum[i]) + eps);
                value[i] -= step;
                accum[i] += step * step;
            } else {
                accum[i] += g * g;
                value[i] -= lr * g / (std::sqrt(accum[i]) + eps);
            }
            grad[i] = 0.0;
        }
    };

    apply(params.w_xh, grads_.w_xh, adagrad.accum.w_xh);
    apply(params.w_hh, grads_.w_hh, adagrad.accum.w_hh);
    apply(params.b_h, grads_.b_h, adagrad.accum.b_h);
    for (std::size_t n = 0; n < params.heads.size(); ++n) {
        if (!head_dirty_[n]) continue;
        apply(params.heads[n].w, grads_.heads[n].w, adagrad.accum.heads[n].w);
        apply(params.heads[n].b, grads_.heads[n].b, adagrad.accum.heads[n].b);
        head_dirty_[n] = 0;
    }
}

void train_step_batch(ModelParams& params, AdagradState& adagrad, TrainerContext& ctx,
                      std::span<const TrainStep> batch, Rng* noise_rng) {
    for (const TrainStep& step : batch) ctx.process_step(params, step, noise_rng);
    ctx.apply_updates(params, adagrad);
}

Gradients compute_sequence_gradients(const ModelParams& params, std::span<const TrainStep> steps,
                                     const TrainConfig& config) {
    TrainConfig quiet = config;
    quiet.noise_sigma = 0.0;
    TrainerContext ctx(params, quiet);
    ctx.start_text();
    for (const TrainStep& step : steps) ctx.process_step(params, step, nullptr);
    return ctx.pending_gradients();
}

std::string format_training_log(const std::vector<TrainLogRow>& log) {
    std::ostringstream out;
    char buf[64];
    for (const TrainLogRow& row : log) {
        out << row.sub_epoch;
        std::snprintf(buf, sizeof buf, "%.6g", row.leak_rate);
        out << '\t' << buf;
        for (double bits : row.head_bits) {
            std::snprintf(buf, sizeof buf, "%.4f", bits);
            out << '\t' << buf;
        }
        out << '\n';
    }
    return out.str();
}

TrainResult train_run(const TrainingInput& input, const TrainConfig& config) {
    config.validate();
    if (config.sub_epochs < 1) throw ConfigError("sub_epochs must be >= 1");
    const int authors = input.author_count();
    if (authors == 0) throw CorpusError("training corpus has no authors");
    if (input.vocab < 2) throw CorpusError("training corpus alphabet has fewer than 2 symbols");
    for (int a = 0; a < authors; ++a) {
        if (input.author_texts[a].empty()) {
            throw CorpusError("author " + std::to_string(a) + " has no known text");
        }
    }
    const bool use_control = config.use_control;
    if (use_control && input.control.empty()) {
        throw ConfigError("use_control is set but the corpus has no control text");
    }
    const int head_count = authors + (use_control ? 1 : 0);

    TrainingInput prepared = input;
    if (config.direction == Direction::Backward) {
        for (auto& texts : prepared.author_texts) {
            for (SymbolSequence& t : texts) std::reverse(t.indices.begin(), t.indices.end());
        }
        std::reverse(prepared.control.begin(), prepared.control.end());
    }

    Rng rng(config.seed);
    ModelParams params = init_params_with(config, prepared.vocab, head_count, use_control, rng);
    params.trained_backward = config.direction == Direction::Backward;
    AdagradState adagrad = AdagradState::for_config(params, config);
    TrainerContext ctx(params, config);
    const LeakSchedule schedule{config.resolve_leak0(head_count), config.leak_decay};

    std::vector<TrainLogRow> log;
    log.reserve(static_cast<std::size_t>(config.sub_epochs));
    std::size_t control_cursor = 0;

    TrainStep step;
    for (int epoch = 0; epoch < config.sub_epochs; ++epoch) {
        const double rate = schedule.rate(epoch);
        const auto items =
            make_sub_epoch(prepared, config.text_mode, use_control, epoch, rng, control_cursor);

        std::vector<double> bit_sums(static_cast<std::size_t>(head_count), 0.0);
        std::vector<std::size_t> bit_counts(static_cast<std::size_t>(head_count), 0);

        for (const TrainItem& item : items) {
            ctx.start_text();
            int in_batch = 0;
            for (std::int32_t symbol : item.symbols) {
                step.symbol = symbol;
                step.owner = item.head;
                step.leaked = leak_assignment(item.head, head_count, rate, rng);
                const double bits = ctx.process_step(params, step, &rng);
                if (bits >= 0.0) {
                    if (!std::isfinite(bits)) {
                        throw NumericError("non-finite training loss (sub-epoch " +
                                           std::to_string(epoch) + ", head " +
                                           std::to_string(item.head) + ")");
                    }
                    bit_sums[static_cast<std::size_t>(item.head)] += bits;
                    ++bit_counts[static_cast<std::size_t>(item.head)];
                }
                if (++in_batch == config.batch_size) {
                    ctx.apply_updates(params, adagrad);
                    in_batch = 0;
                }
            }
            if (in_batch > 0) ctx.apply_updates(params, adagrad);
        }

        if (!params.all_finite()) {
            throw NumericError("model parameters became non-finite in sub-epoch " +
                               std::to_string(epoch));
        }

        TrainLogRow row;
        row.sub_epoch = epoch;
        row.leak_rate = rate;
        row.head_bits.resize(static_cast<std::size_t>(head_count), 0.0);
        for (int n = 0; n < head_count; ++n) {
            row.head_bits[n] = bit_counts[n] > 0 ? bit_sums[n] / static_cast<double>(bit_counts[n])
                                                 : 0.0;
        }
        log.push_back(std::move(row));
    }

    return {std::move(params), std::move(log)};
}

} // namespace stylo
