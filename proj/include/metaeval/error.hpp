#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metaeval {

// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (qrels, runs, metric files). Carries the 1-based line
// number of the offending record when one is known (0 otherwise).
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg, std::size_t line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Manifest or command-line configuration problems.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Inputs parsed fine but cannot be combined: mismatched id sets, too few
// common pairs, and similar wiring mistakes between files.
class DataError : public Error {
 public:
  using Error::Error;
};

// Statistical degeneracy: zero variance, undefined or perfect correlation.
class StatError : public Error {
 public:
  using Error::Error;
};

// An argument outside a function's mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Plot geometry that cannot be drawn (non-finite coordinates).
class RenderError : public Error {
 public:
  using Error::Error;
};

// File open/read/write failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace metaeval
