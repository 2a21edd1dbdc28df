// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_ERRORS_HPP
#define STYLO_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stylo {

/// Base class for all stylo errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input data (bad UTF-8, unparseable files).
class InputError : public Error {
public:
    explicit InputError(const std::string& msg) : Error(msg) {}
    InputError(const std::string& msg, std::size_t byte_offset)
        : Error(msg + " at byte " + std::to_string(byte_offset)),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t byte_offset_ = 0;
};

/// Problems with corpus layout or contents. CLI exit code 1.
class CorpusError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration. CLI exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical failure (non-finite values, undefined statistics). CLI exit code 2.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A document is too short to score at the requested skip count.
class InsufficientTextError : public Error {
public:
    using Error::Error;
};

} // namespace stylo

#endif
