// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stylo/errors.hpp"

namespace stylo {

double resqrt(double x) {
    return x >= 0.0 ? std::sqrt(x + 1.0) - 1.0 : 0.0;
}

double resqrt_deriv_from_output(double y, bool input_nonnegative) {
    return input_nonnegative ? 1.0 / (2.0 * (y + 1.0)) : 0.0;
}

void softmax_inplace(std::span<double> values) {
    if (values.empty()) return;
    const double max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double& v : values) {
        v = std::exp(v - max);
        sum += v;
    }
    for (double& v : values) v /= sum;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> out(logits.begin(), logits.end());
    softmax_inplace(out);
    return out;
}

ModelParams ModelParams::zeros(int vocab, int hidden, int heads, bool has_control) {
    ModelParams p;
    p.vocab = vocab;
    p.hidden = hidden;
    p.has_control = has_control;
    p.w_xh.assign(static_cast<std::size_t>(vocab) * hidden, 0.0);
    p.w_hh.assign(static_cast<std::size_t>(hidden) * hidden, 0.0);
    p.b_h.assign(static_cast<std::size_t>(hidden), 0.0);
    p.heads.resize(static_cast<std::size_t>(heads));
    for (OutputHead& head : p.heads) {
        head.w.assign(static_cast<std::size_t>(vocab) * hidden, 0.0);
        head.b.assign(static_cast<std::size_t>(vocab), 0.0);
    }
    return p;
}

bool ModelParams::all_finite() const {
    const auto finite = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
    };
    if (!finite(w_xh) || !finite(w_hh) || !finite(b_h)) return false;
    for (const OutputHead& head : heads) {
        if (!finite(head.w) || !finite(head.b)) return false;
    }
    return true;
}

namespace detail {

void hidden_preactivation(const ModelParams& params, std::span<const double> h_prev,
                          std::int32_t symbol, std::span<double> preact) {
    const int H = params.hidden;
    const double* xrow = params.w_xh.data() + static_cast<std::size_t>(symbol) * H;
    for (int i = 0; i < H; ++i) preact[i] = xrow[i] + params.b_h[i];
    for (int i = 0; i < H; ++i) {
        const double* row = params.w_hh.data() + static_cast<std::size_t>(i) * H;
        double acc = 0.0;
        for (int j = 0; j < H; ++j) acc += row[j] * h_prev[j];
        preact[i] += acc;
    }
}

void head_logits(const OutputHead& head, std::span<const double> h, std::span<double> logits) {
    const int V = static_cast<int>(head.b.size());
    const int H = static_cast<int>(h.size());
    for (int v = 0; v < V; ++v) {
        const double* row = head.w.data() + static_cast<std::size_t>(v) * H;
        double acc = head.b[v];
        for (int j = 0; j < H; ++j) acc += row[j] * h[j];
        logits[v] = acc;
    }
}

double log_sum_exp(std::span<const double> z) {
    const double max = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double v : z) sum += std::exp(v - max);
    return max + std::log(sum);
}

} // namespace detail

std::pair<HiddenState, StepOutput> forward_step(const HiddenState& state, std::int32_t symbol,
                                                const ModelParams& params, double noise_sigma,
                                                Rng* rng) {
    if (symbol < 0 || symbol >= params.vocab) {
        throw InputError("symbol index " + std::to_string(symbol) + " out of range for V=" +
                         std::to_string(params.vocab));
    }
    if (noise_sigma > 0.0 && rng == nullptr) {
        throw ConfigError("forward_step: noise requested without an rng");
    }

    const int H = params.hidden;
    HiddenState next;
    next.h.resize(H);
    std::vector<double> preact(H);
    detail::hidden_preactivation(params, state.h, symbol, preact);
    if (noise_sigma > 0.0) {
        for (double& a : preact) a += noise_sigma * gaussian(*rng);
    }
    for (int i = 0; i < H; ++i) next.h[i] = resqrt(preact[i]);

    StepOutput out;
    out.distributions.resize(params.heads.size());
    for (std::size_t n = 0; n < params.heads.size(); ++n) {
        std::vector<double> logits(params.vocab);
        detail::head_logits(params.heads[n], next.h, logits);
        softmax_inplace(logits);
        out.distributions[n] = std::move(logits);
    }
    return {std::move(next), std::move(out)};
}

std::vector<double> multi_head_cross_entropy(const SymbolSequence& doc, const ModelParams& params,
                                             std::span<const int> head_indices, int skip) {
    const std::size_t L = doc.indices.size();
    if (L < static_cast<std::size_t>(skip) + 2) {
        throw InsufficientTextError("document '" + doc.doc_id + "' has " + std::to_string(L) +
                                    " symbols; need at least " + std::to_string(skip + 2));
    }
    for (int head : head_indices) {
        if (head < 0 || head >= params.head_count()) {
            throw InputError("head index out of range: " + std::to_string(head));
        }
    }

    for (std::int32_t symbol : doc.indices) {
        if (symbol < 0 || symbol >= params.vocab) {
            throw InputError("document '" + doc.doc_id + "' contains symbol " +
                             std::to_string(symbol) + " outside V=" + std::to_string(params.vocab));
        }
    }

    const int H = params.hidden;
    std::vector<double> h(H, 0.0);
    std::vector<double> preact(H);
    std::vector<double> logits(params.vocab);
    std::vector<double> bit_sums(head_indices.size(), 0.0);

    constexpr double kInvLn2 = 1.4426950408889634; // 1/ln 2
    for (std::size_t i = 0; i + 1 < L; ++i) {
        const std::int32_t symbol = doc.indices[i];
        detail::hidden_preactivation(params, h, symbol, preact);
        for (int k = 0; k < H; ++k) h[k] = resqrt(preact[k]);
        if (i < static_cast<std::size_t>(skip)) continue;
        const std::int32_t target = doc.indices[i + 1];
        for (std::size_t n = 0; n < head_indices.size(); ++n) {
            detail::head_logits(params.heads[head_indices[n]], h, logits);
            const double lse = detail::log_sum_exp(logits);
            bit_sums[n] += (lse - logits[target]) * kInvLn2;
        }
    }

    const double steps = static_cast<double>(L - 1 - static_cast<std::size_t>(skip));
    for (double& s : bit_sums) s /= steps;
    return bit_sums;
}

double sequence_cross_entropy(const SymbolSequence& doc, const ModelParams& params, int head,
                              int skip) {
    const int heads[1] = {head};
    return multi_head_cross_entropy(doc, params, heads, skip)[0];
}

} // namespace stylo
