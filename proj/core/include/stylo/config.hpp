// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_CONFIG_HPP
#define STYLO_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace stylo {

enum class Direction { Forward, Backward };
enum class TextMode { Sequential, Concatenated, Balanced };
enum class InitMode { Gaussian, Zero };

Direction direction_from_string(std::string_view);
TextMode text_mode_from_string(std::string_view);
InitMode init_mode_from_string(std::string_view);
std::string to_string(Direction);
std::string to_string(TextMode);
std::string to_string(InitMode);

/// Everything one training run needs. Fields left out of a config file take
/// these defaults; leak0 left unset resolves to 1/N once the head count is
/// known.
struct TrainConfig {
    double learn_scale = 0.1;          // initial adagrad learning scale
    std::optional<double> leak0;       // initial leakage rate; unset => 1/N
    double leak_decay = 0.8;           // per sub-epoch
    int hidden = 79;                   // H
    double noise_sigma = 0.0;          // presynaptic noise, training only
    int sub_epochs = 12;
    Direction direction = Direction::Forward;
    TextMode text_mode = TextMode::Sequential;
    InitMode init_mode = InitMode::Gaussian;
    bool use_control = false;

    int batch_size = 40;  // weight updates every this many characters
    int bptt_depth = 70;  // unroll cap
    int skip_chars = 10;  // leading predictions that carry no gradient

    std::uint64_t seed = 1;

    double swap_ratio = 0.5;        // known/unknown swap threshold
    double adagrad_epsilon = 1e-8;
    double bptt_cutoff_ratio = 1e-3; // adaptive truncation threshold; 0 disables
    // Alternative reading of the adagrad rule: accumulate squared updates
    // instead of squared gradients. Off by default; see README.
    bool adagrad_accumulate_updates = false;

    void validate() const; // throws ConfigError
    double resolve_leak0(int head_count) const;

    static TrainConfig parse_json(std::string_view json_text, const std::string& origin = "<string>");
    static TrainConfig load(const std::filesystem::path& file);
    std::string to_json() const;
};

} // namespace stylo

#endif
