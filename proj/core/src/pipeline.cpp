// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "stylo/errors.hpp"

namespace stylo {

using nlohmann::json;

void EnsembleSpec::validate() const {
    if (members.empty()) throw ConfigError("ensemble spec needs at least one member");
    std::set<std::uint64_t> seeds;
    for (const TrainConfig& member : members) {
        member.validate();
        if (!seeds.insert(member.seed).second) {
            throw ConfigError("ensemble member seeds must be distinct (duplicate seed " +
                              std::to_string(member.seed) + ")");
        }
    }
}

EnsembleSpec EnsembleSpec::parse_json(std::string_view text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": ensemble spec must be a JSON object");

    EnsembleSpec spec;
    for (const auto& [key, value] : j.items()) {
        if (key != "corpus" && key != "output" && key != "members") {
            throw ConfigError(origin + ": unknown ensemble key '" + key + "'");
        }
    }
    if (j.contains("corpus")) spec.corpus_dir = j["corpus"].get<std::string>();
    if (j.contains("output")) spec.output_path = j["output"].get<std::string>();
    if (!j.contains("members") || !j["members"].is_array()) {
        throw ConfigError(origin + ": ensemble spec needs a 'members' array");
    }
    for (const auto& member : j["members"]) {
        spec.members.push_back(TrainConfig::parse_json(member.dump(), origin));
    }
    spec.validate();
    return spec;
}

EnsembleSpec EnsembleSpec::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read ensemble spec: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), file.string());
}

std::string EnsembleSpec::to_json() const {
    json j;
    if (!corpus_dir.empty()) j["corpus"] = corpus_dir.string();
    if (!output_path.empty()) j["output"] = output_path.string();
    j["members"] = json::array();
    for (const TrainConfig& member : members) {
        j["members"].push_back(json::parse(member.to_json()));
    }
    return j.dump(2) + "\n";
}

double default_radius(Language lang) {
    return lang == Language::Dutch ? 0.0 : 0.02;
}

PreparedCorpus prepare_corpus(const Corpus& corpus, const CanonicalRules& rules,
                              const Alphabet* existing) {
    if (corpus.problems.empty()) throw CorpusError("corpus has no problems");

    std::vector<std::u32string> canonical_pool;
    std::vector<std::vector<std::u32string>> known_canon(corpus.problems.size());
    std::vector<std::u32string> unknown_canon(corpus.problems.size());

    for (std::size_t i = 0; i < corpus.problems.size(); ++i) {
        const Problem& problem = corpus.problems[i];
        if (problem.known.empty()) throw CorpusError("problem " + problem.id + " has no known text");
        for (const std::string& text : problem.known) {
            known_canon[i].push_back(canonicalize(decompose(text), rules));
            canonical_pool.push_back(known_canon[i].back());
        }
        unknown_canon[i] = canonicalize(decompose(problem.unknown), rules);
        canonical_pool.push_back(unknown_canon[i]);
    }
    std::u32string control_canon;
    if (!corpus.control.empty()) {
        control_canon = canonicalize(decompose(corpus.control), rules);
        canonical_pool.push_back(control_canon);
    }

    PreparedCorpus prepared;
    prepared.alphabet = existing != nullptr ? *existing : build_alphabet(canonical_pool);

    for (std::size_t i = 0; i < corpus.problems.size(); ++i) {
        EncodedProblem encoded;
        encoded.id = corpus.problems[i].id;
        for (std::size_t k = 0; k < known_canon[i].size(); ++k) {
            encoded.known.push_back(encode(known_canon[i][k], prepared.alphabet,
                                           encoded.id + "/known" + std::to_string(k + 1)));
        }
        encoded.unknown = encode(unknown_canon[i], prepared.alphabet, encoded.id + "/unknown");
        prepared.problems.push_back(std::move(encoded));
    }
    if (!control_canon.empty()) {
        prepared.control = encode(control_canon, prepared.alphabet, "control").indices;
    }
    return prepared;
}

namespace {

VerdictSet run_member(const PreparedCorpus& prepared, const TrainConfig& member, double radius) {
    const std::size_t n_problems = prepared.problems.size();

    std::vector<EncodedProblem> problems;
    problems.reserve(n_problems);
    for (const EncodedProblem& problem : prepared.problems) {
        problems.push_back(maybe_swap(problem, member.swap_ratio));
    }

    TrainingInput input;
    input.vocab = prepared.alphabet.size();
    input.control = prepared.control;
    input.author_texts.reserve(n_problems);
    for (const EncodedProblem& problem : problems) input.author_texts.push_back(problem.known);

    TrainResult trained = train_run(input, member);

    std::vector<SymbolSequence> unknowns;
    unknowns.reserve(n_problems);
    std::vector<std::string> ids;
    ids.reserve(n_problems);
    for (const EncodedProblem& problem : problems) {
        unknowns.push_back(problem.unknown);
        if (member.direction == Direction::Backward) {
            std::reverse(unknowns.back().indices.begin(), unknowns.back().indices.end());
        }
        ids.push_back(problem.id);
    }

    const ScoreMatrix raw = entropy_matrix(trained.params, unknowns, member.skip_chars);
    const ScoreMatrix normalized = normalize(raw);
    const std::vector<double> percentiles = rank_unknowns(normalized);
    VerdictSet verdicts = align_scores(percentiles, ids, radius);
    if (!balanced_answers(verdicts)) {
        throw NumericError("member verdicts violate the balanced-answer invariant");
    }
    return verdicts;
}

template <typename Fn>
void rethrow_in_member(std::size_t index, std::uint64_t seed, Fn&& fn) {
    const std::string context =
        "ensemble member " + std::to_string(index) + " (seed " + std::to_string(seed) + "): ";
    try {
        fn();
    } catch (const ConfigError& e) {
        throw ConfigError(context + e.what());
    } catch (const CorpusError& e) {
        throw CorpusError(context + e.what());
    } catch (const NumericError& e) {
        throw NumericError(context + e.what());
    } catch (const InputError& e) {
        throw InputError(context + e.what());
    } catch (const std::exception& e) {
        throw Error(context + e.what());
    }
}

} // namespace

PipelineResult run_pipeline(const Corpus& corpus, const EnsembleSpec& spec,
                            const PipelineOptions& options) {
    spec.validate();
    const Language lang = options.language.value_or(corpus.language);
    const CanonicalRules rules = CanonicalRules::builtin(lang);
    const double radius = options.radius.value_or(default_radius(lang));

    const PreparedCorpus prepared = prepare_corpus(corpus, rules);

    const std::size_t n_members = spec.members.size();
    std::vector<VerdictSet> member_verdicts(n_members);
    std::vector<std::exception_ptr> member_errors(n_members);

    const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(n_members)));
    if (jobs == 1) {
        for (std::size_t k = 0; k < n_members; ++k) {
            rethrow_in_member(k, spec.members[k].seed, [&] {
                member_verdicts[k] = run_member(prepared, spec.members[k], radius);
            });
        }
    } else {
        std::atomic<std::size_t> next{0};
        const auto worker = [&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= n_members) return;
                try {
                    member_verdicts[k] = run_member(prepared, spec.members[k], radius);
                } catch (...) {
                    member_errors[k] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(jobs));
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        for (std::size_t k = 0; k < n_members; ++k) {
            if (member_errors[k]) {
                rethrow_in_member(k, spec.members[k].seed,
                                  [&] { std::rethrow_exception(member_errors[k]); });
            }
        }
    }

    PipelineResult result;
    result.member_verdicts = std::move(member_verdicts);
    result.verdicts = ensemble_average(result.member_verdicts);
    if (!balanced_answers(result.verdicts)) {
        throw NumericError("ensemble verdicts violate the balanced-answer invariant");
    }
    result.alphabet = prepared.alphabet;

    if (!spec.output_path.empty()) write_answers(result.verdicts, spec.output_path);
    if (corpus.truth) result.evaluation = evaluate(result.verdicts, *corpus.truth);
    return result;
}

} // namespace stylo
