// Copyright 2026 The vqeac Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace vqeac {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number (0 when unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Index out of range.
class BoundsError : public Error {
 public:
  using Error::Error;
};

/// Input contradicts itself (e.g. duplicated integrals with different values).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Problem too large for the dense or statevector path.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values, unstable eigenproblems, failed convergence.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (CLI layer).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vqeac
