// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stylo/errors.hpp"

namespace stylo {

using nlohmann::json;

Direction direction_from_string(std::string_view s) {
    if (s == "forward") return Direction::Forward;
    if (s == "backward") return Direction::Backward;
    throw ConfigError("unknown direction: " + std::string(s));
}

TextMode text_mode_from_string(std::string_view s) {
    if (s == "sequential") return TextMode::Sequential;
    if (s == "concatenated") return TextMode::Concatenated;
    if (s == "balanced") return TextMode::Balanced;
    throw ConfigError("unknown text_mode: " + std::string(s));
}

InitMode init_mode_from_string(std::string_view s) {
    if (s == "gaussian") return InitMode::Gaussian;
    if (s == "zero") return InitMode::Zero;
    throw ConfigError("unknown init_mode: " + std::string(s));
}

std::string to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::string to_string(TextMode m) {
    switch (m) {
    case TextMode::Sequential: return "sequential";
    case TextMode::Concatenated: return "concatenated";
    case TextMode::Balanced: return "balanced";
    }
    return "sequential";
}

std::string to_string(InitMode m) { return m == InitMode::Gaussian ? "gaussian" : "zero"; }

void TrainConfig::validate() const {
    if (!(learn_scale > 0.0)) throw ConfigError("learn_scale must be > 0");
    if (leak0 && *leak0 < 0.0) throw ConfigError("leak0 must be >= 0");
    if (!(leak_decay > 0.0 && leak_decay < 1.0)) throw ConfigError("leak_decay must be in (0, 1)");
    if (hidden < 0) throw ConfigError("hidden must be >= 0");
    if (noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
    if (sub_epochs < 1) throw ConfigError("sub_epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (bptt_depth < 1) throw ConfigError("bptt_depth must be >= 1");
    if (skip_chars < 0) throw ConfigError("skip_chars must be >= 0");
    if (swap_ratio < 0.0) throw ConfigError("swap_ratio must be >= 0");
    if (adagrad_epsilon <= 0.0) throw ConfigError("adagrad_epsilon must be > 0");
    if (bptt_cutoff_ratio < 0.0) throw ConfigError("bptt_cutoff_ratio must be >= 0");
}

double TrainConfig::resolve_leak0(int head_count) const {
    if (leak0) return *leak0;
    return head_count > 0 ? 1.0 / static_cast<double>(head_count) : 0.0;
}

TrainConfig TrainConfig::parse_json(std::string_view json_text, const std::string& origin) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": config must be a JSON object");

    static const std::set<std::string> known = {
        "learn_scale", "leak0", "leak_decay", "hidden", "noise_sigma", "sub_epochs",
        "direction", "text_mode", "init_mode", "use_control", "batch_size", "bptt_depth",
        "skip_chars", "seed", "swap_ratio", "adagrad_epsilon", "bptt_cutoff_ratio",
        "adagrad_accumulate_updates"};
    for (const auto& [key, value] : j.items()) {
        if (known.count(key) == 0) throw ConfigError(origin + ": unknown config key '" + key + "'");
    }

    TrainConfig c;
    try {
        if (j.contains("learn_scale")) c.learn_scale = j["learn_scale"].get<double>();
        if (j.contains("leak0") && !j["leak0"].is_null()) c.leak0 = j["leak0"].get<double>();
        if (j.contains("leak_decay")) c.leak_decay = j["leak_decay"].get<double>();
        if (j.contains("hidden")) c.hidden = j["hidden"].get<int>();
        if (j.contains("noise_sigma")) c.noise_sigma = j["noise_sigma"].get<double>();
        if (j.contains("sub_epochs")) c.sub_epochs = j["sub_epochs"].get<int>();
        if (j.contains("direction")) c.direction = direction_from_string(j["direction"].get<std::string>());
        if (j.contains("text_mode")) c.text_mode = text_mode_from_string(j["text_mode"].get<std::string>());
        if (j.contains("init_mode")) c.init_mode = init_mode_from_string(j["init_mode"].get<std::string>());
        if (j.contains("use_control")) c.use_control = j["use_control"].get<bool>();
        if (j.contains("batch_size")) c.batch_size = j["batch_size"].get<int>();
        if (j.contains("bptt_depth")) c.bptt_depth = j["bptt_depth"].get<int>();
        if (j.contains("skip_chars")) c.skip_chars = j["skip_chars"].get<int>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("swap_ratio")) c.swap_ratio = j["swap_ratio"].get<double>();
        if (j.contains("adagrad_epsilon")) c.adagrad_epsilon = j["adagrad_epsilon"].get<double>();
        if (j.contains("bptt_cutoff_ratio")) c.bptt_cutoff_ratio = j["bptt_cutoff_ratio"].get<double>();
        if (j.contains("adagrad_accumulate_updates"))
            c.adagrad_accumulate_updates = j["adagrad_accumulate_updates"].get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    c.validate();
    return c;
}

TrainConfig TrainConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), file.string());
}

std::string TrainConfig::to_json() const {
    json j;
    j["learn_scale"] = learn_scale;
    if (leak0) j["leak0"] = *leak0;
    j["leak_decay"] = leak_decay;
    j["hidden"] = hidden;
    j["noise_sigma"] = noise_sigma;
    j["sub_epochs"] = sub_epochs;
    j["direction"] = to_string(direction);
    j["text_mode"] = to_string(text_mode);
    j["init_mode"] = to_string(init_mode);
    j["use_control"] = use_control;
    j["batch_size"] = batch_size;
    j["bptt_depth"] = bptt_depth;
    j["skip_chars"] = skip_chars;
    j["seed"] = seed;
    j["swap_ratio"] = swap_ratio;
    j["adagrad_epsilon"] = adagrad_epsilon;
    j["bptt_cutoff_ratio"] = bptt_cutoff_ratio;
    j["adagrad_accumulate_updates"] = adagrad_accumulate_updates;
    return j.dump(2) + "\n";
}

} // namespace stylo
