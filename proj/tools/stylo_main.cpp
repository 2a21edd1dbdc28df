// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0
//
// stylo: authorship verification with multi-headed character-level RNN
// language models. Subcommands cover the whole workflow: synthesize a
// benchmark corpus, preprocess text, train a model, score unknown documents,
// evaluate answers and run full ensembles.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "stylo/corpus.hpp"
#include "stylo/errors.hpp"
#include "stylo/metrics.hpp"
#include "stylo/model_io.hpp"
#include "stylo/pipeline.hpp"
#include "stylo/scoring.hpp"
#include "stylo/synthetic.hpp"
#include "stylo/trainer.hpp"
#include "stylo/utf8.hpp"

namespace {

using namespace stylo;

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + file.string());
    out << text;
}

void print_evaluation(const Evaluation& eval) {
    std::printf("auc\tc@1\tscore\n%.4f\t%.4f\t%.4f\n", eval.auc, eval.c_at_1, eval.product);
}

CanonicalRules rules_for(const std::string& lang_name, const std::string& rules_file) {
    if (!rules_file.empty()) return CanonicalRules::load(rules_file);
    return CanonicalRules::builtin(language_from_string(lang_name));
}

std::optional<Language> parse_lang_flag(const std::string& lang_name) {
    if (lang_name.empty()) return std::nullopt;
    return language_from_string(lang_name);
}

struct CommonCorpusFlags {
    std::string corpus_dir;
    std::string lang;
    std::string control_file;
};

Corpus load_corpus_with(const CommonCorpusFlags& flags) {
    Corpus corpus = load_corpus(flags.corpus_dir, parse_lang_flag(flags.lang));
    if (!flags.control_file.empty()) corpus.control = read_file(flags.control_file);
    return corpus;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir) {
    const Corpus corpus = generate_synthetic(spec);
    write_corpus(corpus, out_dir);
    std::size_t chars = 0;
    for (const Problem& problem : corpus.problems) {
        chars += problem.unknown.size();
        for (const std::string& text : problem.known) chars += text.size();
    }
    std::printf("wrote %zu problems (%zu chars) to %s\n", corpus.problems.size(), chars,
                out_dir.c_str());
    return 0;
}

int cmd_preprocess(const std::string& in_file, const std::string& lang,
                   const std::string& rules_file, const std::string& alphabet_out,
                   const std::string& canonical_out) {
    const CanonicalRules rules = rules_for(lang, rules_file);
    const std::string raw = read_file(in_file);
    const std::u32string canonical = canonicalize(decompose(raw), rules);
    const Alphabet alphabet = build_alphabet({&canonical, 1});
    const SymbolSequence seq = encode(canonical, alphabet, in_file);
    const std::string dump = encode_utf8(decode(seq, alphabet)) + "\n";

    if (!alphabet_out.empty()) alphabet.save(alphabet_out);
    if (!canonical_out.empty()) {
        write_file(canonical_out, dump);
    } else {
        std::fputs(dump.c_str(), stdout);
    }
    std::fprintf(stderr, "%zu code points -> %zu symbols, alphabet size %d\n", raw.size(),
                 seq.indices.size(), alphabet.size());
    return 0;
}

int cmd_train(const CommonCorpusFlags& corpus_flags, const std::string& config_file,
              std::optional<std::uint64_t> seed, const std::string& model_out,
              const std::string& alphabet_out, const std::string& log_out) {
    TrainConfig config = config_file.empty() ? TrainConfig{} : TrainConfig::load(config_file);
    if (seed) config.seed = *seed;

    const Corpus corpus = load_corpus_with(corpus_flags);
    const Language lang = parse_lang_flag(corpus_flags.lang).value_or(corpus.language);
    const PreparedCorpus prepared = prepare_corpus(corpus, CanonicalRules::builtin(lang));

    TrainingInput input;
    input.vocab = prepared.alphabet.size();
    input.control = prepared.control;
    for (const EncodedProblem& problem : prepared.problems) {
        input.author_texts.push_back(maybe_swap(problem, config.swap_ratio).known);
    }

    TrainResult result = train_run(input, config);
    result.params.alphabet_hash = prepared.alphabet.hash();
    save_model(result.params, model_out);

    const std::string alphabet_path =
        alphabet_out.empty() ? model_out + ".alphabet" : alphabet_out;
    prepared.alphabet.save(alphabet_path);
    const std::string log_path = log_out.empty() ? model_out + ".log" : log_out;
    write_file(log_path, format_training_log(result.log));

    std::fprintf(stderr, "trained %d heads (V=%d, H=%d) over %d sub-epochs -> %s\n",
                 result.params.head_count(), result.params.vocab, result.params.hidden,
                 config.sub_epochs, model_out.c_str());
    return 0;
}

int cmd_score(const CommonCorpusFlags& corpus_flags, const std::string& model_file,
              const std::string& alphabet_file, const std::string& answers_out,
              std::optional<double> radius, double swap_ratio, int skip,
              const std::string& dump_raw, const std::string& dump_normalized) {
    const std::string alphabet_path =
        alphabet_file.empty() ? model_file + ".alphabet" : alphabet_file;
    const Alphabet alphabet = Alphabet::load(alphabet_path);
    const ModelParams params = load_model(model_file, alphabet);

    const Corpus corpus = load_corpus_with(corpus_flags);
    const Language lang = parse_lang_flag(corpus_flags.lang).value_or(corpus.language);
    const PreparedCorpus prepared =
        prepare_corpus(corpus, CanonicalRules::builtin(lang), &alphabet);

    std::vector<SymbolSequence> unknowns;
    std::vector<std::string> ids;
    for (const EncodedProblem& problem : prepared.problems) {
        EncodedProblem swapped = maybe_swap(problem, swap_ratio);
        if (params.trained_backward) {
            std::reverse(swapped.unknown.indices.begin(), swapped.unknown.indices.end());
        }
        unknowns.push_back(std::move(swapped.unknown));
        ids.push_back(problem.id);
    }

    const ScoreMatrix raw = entropy_matrix(params, unknowns, skip);
    if (!dump_raw.empty()) write_file(dump_raw, raw.to_tsv());
    const ScoreMatrix normalized = normalize(raw);
    if (!dump_normalized.empty()) write_file(dump_normalized, normalized.to_tsv());

    const std::vector<double> percentiles = rank_unknowns(normalized);
    const VerdictSet verdicts =
        align_scores(percentiles, ids, radius.value_or(default_radius(lang)));

    if (answers_out.empty()) {
        std::fputs(format_answers(verdicts).c_str(), stdout);
    } else {
        write_answers(verdicts, answers_out);
    }
    if (corpus.truth) print_evaluation(evaluate(verdicts, *corpus.truth));
    return 0;
}

int cmd_evaluate(const std::string& answers_file, const std::string& truth_file) {
    const VerdictSet verdicts = read_answers(answers_file);
    const TruthSet truth = TruthSet::load(truth_file);
    if (!truth.is_balanced()) {
        std::fprintf(stderr, "warning: truth labels are not half positive\n");
    }
    print_evaluation(evaluate(verdicts, truth));
    return 0;
}

int cmd_ensemble(const std::string& spec_file, const CommonCorpusFlags& corpus_flags,
                 const std::string& out_override, std::optional<double> radius, int jobs) {
    EnsembleSpec spec = EnsembleSpec::load(spec_file);
    if (!corpus_flags.corpus_dir.empty()) spec.corpus_dir = corpus_flags.corpus_dir;
    if (!out_override.empty()) spec.output_path = out_override;
    if (spec.corpus_dir.empty()) throw ConfigError("no corpus: pass --corpus or set it in the spec");
    if (spec.output_path.empty()) throw ConfigError("no output: pass --out or set it in the spec");

    Corpus corpus = load_corpus(spec.corpus_dir, parse_lang_flag(corpus_flags.lang));
    if (!corpus_flags.control_file.empty()) corpus.control = read_file(corpus_flags.control_file);

    PipelineOptions options;
    options.radius = radius;
    options.language = parse_lang_flag(corpus_flags.lang);
    options.jobs = jobs;

    const PipelineResult result = run_pipeline(corpus, spec, options);
    std::fprintf(stderr, "ensemble of %zu member(s) -> %s\n", spec.members.size(),
                 spec.output_path.string().c_str());
    if (result.evaluation) print_evaluation(*result.evaluation);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"authorship verification with multi-headed character RNNs"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark corpus");
    SyntheticSpec synth_spec;
    std::string synth_out;
    synth->add_option("--out", synth_out, "output corpus directory")->required();
    synth->add_option("--authors", synth_spec.author_families, "author families (>= 2)");
    synth->add_option("--problems", synth_spec.problems, "number of problems");
    synth->add_option("--chars", synth_spec.chars_per_doc, "approximate characters per document");
    synth->add_option("--known", synth_spec.known_per_problem, "known texts per problem");
    synth->add_option("--distinctiveness", synth_spec.distinctiveness,
                      "strength of per-author transition biases");
    synth->add_option("--seed", synth_spec.seed, "generator seed");

    // preprocess
    auto* preprocess = app.add_subcommand("preprocess", "canonicalize one document");
    std::string pre_in, pre_lang = "other", pre_rules, pre_alphabet, pre_canonical;
    preprocess->add_option("--in", pre_in, "input UTF-8 text file")->required();
    preprocess->add_option("--lang", pre_lang, "dutch|english|greek|spanish|other");
    preprocess->add_option("--rules", pre_rules, "custom rules file (overrides --lang tables)");
    preprocess->add_option("--alphabet", pre_alphabet, "write the induced alphabet here");
    preprocess->add_option("--canonical", pre_canonical,
                           "write the canonical text here (default: stdout)");

    // train
    auto* train = app.add_subcommand("train", "train one model on a corpus");
    CommonCorpusFlags train_flags;
    std::string train_config, train_model = "model.bin", train_alphabet, train_log;
    std::optional<std::uint64_t> train_seed;
    train->add_option("--corpus", train_flags.corpus_dir, "corpus directory")->required();
    train->add_option("--config", train_config, "train config JSON file");
    train->add_option("--seed", train_seed, "override the config seed");
    train->add_option("--lang", train_flags.lang, "language override");
    train->add_option("--control", train_flags.control_file, "control corpus text file");
    train->add_option("--out", train_model, "model output path");
    train->add_option("--alphabet", train_alphabet, "alphabet output path (default <out>.alphabet)");
    train->add_option("--log", train_log, "training log output path (default <out>.log)");

    // score
    auto* score = app.add_subcommand("score", "score a corpus with a trained model");
    CommonCorpusFlags score_flags;
    std::string score_model, score_alphabet, score_out, score_raw, score_norm;
    std::optional<double> score_radius;
    double score_swap_ratio = 0.5;
    int score_skip = 10;
    score->add_option("--corpus", score_flags.corpus_dir, "corpus directory")->required();
    score->add_option("--model", score_model, "trained model file")->required();
    score->add_option("--alphabet", score_alphabet, "alphabet file (default <model>.alphabet)");
    score->add_option("--out", score_out, "answers output (default: stdout)");
    score->add_option("--lang", score_flags.lang, "language override");
    score->add_option("--radius", score_radius, "uncertainty radius around the median");
    score->add_option("--swap-ratio", score_swap_ratio, "known/unknown swap threshold");
    score->add_option("--skip", score_skip, "predictions skipped at each document start");
    score->add_option("--dump-raw", score_raw, "write the raw entropy matrix TSV here");
    score->add_option("--dump-normalized", score_norm, "write the normalized matrix TSV here");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "AUC x C@1 of an answers file");
    std::string eval_answers, eval_truth;
    evaluate->add_option("--answers", eval_answers, "answers file")->required();
    evaluate->add_option("--truth", eval_truth, "truth file")->required();

    // ensemble
    auto* ensemble = app.add_subcommand("ensemble", "train and average an ensemble");
    CommonCorpusFlags ens_flags;
    std::string ens_spec, ens_out;
    std::optional<double> ens_radius;
    int ens_jobs = 1;
    ensemble->add_option("--spec", ens_spec, "ensemble spec JSON file")->required();
    ensemble->add_option("--corpus", ens_flags.corpus_dir, "corpus directory (overrides spec)");
    ensemble->add_option("--out", ens_out, "answers output (overrides spec)");
    ensemble->add_option("--lang", ens_flags.lang, "language override");
    ensemble->add_option("--control", ens_flags.control_file, "control corpus text file");
    ensemble->add_option("--radius", ens_radius, "uncertainty radius around the median");
    ensemble->add_option("--jobs", ens_jobs, "concurrent ensemble members");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) return cmd_synth(synth_spec, synth_out);
        if (preprocess->parsed()) {
            return cmd_preprocess(pre_in, pre_lang, pre_rules, pre_alphabet, pre_canonical);
        }
        if (train->parsed()) {
            return cmd_train(train_flags, train_config, train_seed, train_model, train_alphabet,
                             train_log);
        }
        if (score->parsed()) {
            return cmd_score(score_flags, score_model, score_alphabet, score_out, score_radius,
                             score_swap_ratio, score_skip, score_raw, score_norm);
        }
        if (evaluate->parsed()) return cmd_evaluate(eval_answers, eval_truth);
        if (ensemble->parsed()) {
            return cmd_ensemble(ens_spec, ens_flags, ens_out, ens_radius, ens_jobs);
        }
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
