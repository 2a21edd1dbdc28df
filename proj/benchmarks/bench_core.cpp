// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "stylo/model.hpp"
#include "stylo/preprocess.hpp"
#include "stylo/rng.hpp"
#include "stylo/synthetic.hpp"
#include "stylo/trainer.hpp"

namespace {

using namespace stylo;

ModelParams make_params(int vocab, int hidden, int heads) {
    TrainConfig config;
    config.hidden = hidden;
    config.seed = 7;
    return init_params(config, vocab, heads);
}

std::vector<std::int32_t> random_symbols(int count, int vocab, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::int32_t> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(static_cast<std::int32_t>(uniform_below(rng, static_cast<std::uint64_t>(vocab))));
    }
    return out;
}

void BM_Softmax(benchmark::State& state) {
    const int v = static_cast<int>(state.range(0));
    Rng rng(1);
    std::vector<double> logits(static_cast<std::size_t>(v));
    for (double& x : logits) x = 3.0 * gaussian(rng);
    std::vector<double> work = logits;
    for (auto _ : state) {
        work = logits;
        softmax_inplace(work);
        benchmark::DoNotOptimize(work.data());
    }
    state.SetItemsProcessed(state.iterations() * v);
}
BENCHMARK(BM_Softmax)->Arg(39)->Arg(47)->Arg(51);

void BM_ForwardStep(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    const ModelParams params = make_params(47, hidden, 20);
    HiddenState hs = HiddenState::zero(hidden);
    std::int32_t symbol = 0;
    for (auto _ : state) {
        auto [next, out] = forward_step(hs, symbol, params);
        hs = std::move(next);
        symbol = (symbol + 1) % 47;
        benchmark::DoNotOptimize(out.distributions.data());
    }
}
BENCHMARK(BM_ForwardStep)->Arg(79)->Arg(119);

void BM_SequenceCrossEntropy(benchmark::State& state) {
    const ModelParams params = make_params(47, 79, 20);
    SymbolSequence doc{"bench", random_symbols(3000, 47, 3)};
    std::vector<int> heads(20);
    for (int i = 0; i < 20; ++i) heads[i] = i;
    for (auto _ : state) {
        const auto bits = multi_head_cross_entropy(doc, params, heads, 10);
        benchmark::DoNotOptimize(bits.data());
    }
    state.SetItemsProcessed(state.iterations() * 3000);
}
BENCHMARK(BM_SequenceCrossEntropy);

void BM_TrainBatch(benchmark::State& state) {
    const int hidden = static_cast<int>(state.range(0));
    TrainConfig config;
    config.hidden = hidden;
    config.skip_chars = 0;
    ModelParams params = make_params(47, hidden, 20);
    AdagradState adagrad = AdagradState::for_config(params, config);
    TrainerContext ctx(params, config);
    ctx.start_text();

    Rng rng(11);
    std::vector<TrainStep> batch(40);
    for (auto _ : state) {
        for (TrainStep& step : batch) {
            step.symbol = static_cast<std::int32_t>(uniform_below(rng, 47));
            step.owner = 3;
            step.leaked = leak_assignment(step.owner, 20, 0.05, rng);
        }
        train_step_batch(params, adagrad, ctx, batch, nullptr);
        benchmark::DoNotOptimize(params.w_hh.data());
    }
    state.SetItemsProcessed(state.iterations() * 40);
}
BENCHMARK(BM_TrainBatch)->Arg(79)->Arg(119);

void BM_PreprocessDocument(benchmark::State& state) {
    SyntheticSpec spec;
    spec.problems = 1;
    spec.chars_per_doc = 5000;
    const Corpus corpus = generate_synthetic(spec);
    const std::string& text = corpus.problems[0].known[0];
    const CanonicalRules rules = CanonicalRules::builtin(Language::English);
    const std::u32string canonical = canonicalize(decompose(text), rules);
    const Alphabet alphabet = build_alphabet({&canonical, 1});
    for (auto _ : state) {
        const SymbolSequence seq = preprocess_document(text, rules, alphabet, "bench");
        benchmark::DoNotOptimize(seq.indices.data());
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_PreprocessDocument);

} // namespace

BENCHMARK_MAIN();
