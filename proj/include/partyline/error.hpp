// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace partyline {

/// Base class for every error raised by the library. The CLI maps these to
/// exit code 2 (data error), except ConfigError which maps to 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid combination of options (e.g. a group filter without a year).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed textual input. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  explicit ParseError(const std::string& what) : Error(what) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Binary container with the wrong magic, dimension or layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Binary container shorter than its header declares.
class TruncationError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// Structurally valid input that violates a data invariant
/// (duplicate ids, zero vectors, missing rows, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input for which a quantity is mathematically undefined
/// (zero variance, zero twin-similarity denominator, no shared hashtags).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace partyline
