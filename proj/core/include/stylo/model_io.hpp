// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_MODEL_IO_HPP
#define STYLO_MODEL_IO_HPP

#include <filesystem>

#include "stylo/model.hpp"
#include "stylo/preprocess.hpp"

namespace stylo {

// Model file layout, little-endian throughout:
//   bytes 0-7   magic "STYLOMDL"
//   u32         format version (1)
//   u32 u32 u32 V, H, head count
//   u8 u8       control-head flag, backward-direction flag, then 2 zero bytes
//   u64         alphabet hash (Alphabet::hash of the paired alphabet)
//   f64[...]    w_xh (V*H row-major), w_hh (H*H), b_h (H),
//               then per head: w (V*H), b (V)

void save_model(const ModelParams& params, const std::filesystem::path& file);

/// Loads and validates structure. Does not check the alphabet pairing.
ModelParams load_model(const std::filesystem::path& file);

/// Loads and rejects the model if its stored hash does not match `alphabet`.
ModelParams load_model(const std::filesystem::path& file, const Alphabet& alphabet);

} // namespace stylo

#endif
