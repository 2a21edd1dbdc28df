// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_UTF8_HPP
#define STYLO_UTF8_HPP

#include <string>
#include <string_view>

namespace stylo {

/// Strict UTF-8 decoder. Rejects overlong encodings, surrogates, values past
/// U+10FFFF and truncated sequences; errors name the offending byte offset.
std::u32string decode_utf8(std::string_view bytes);

std::string encode_utf8(std::u32string_view codepoints);

} // namespace stylo

#endif
