#pragma once

#include <stdexcept>
#include <string>

namespace pairlink {

// Root of every error the library throws. Callers that only need to report
// and exit catch this; the subclasses exist for the CLI and for tests that
// check which rule fired.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (edge lists, feature files). Carries the line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
  using Error::Error;
};

class DimensionError : public Error {
  using Error::Error;
};

class IndexError : public Error {
  using Error::Error;
};

/// A value stopped being finite. Raised by every tape primitive.
class NumericError : public Error {
  using Error::Error;
};

class SamplingError : public Error {
  using Error::Error;
};

class ConfigError : public Error {
  using Error::Error;
};

/// API misuse: backward on a foreign tensor, nondeterministic grad-check target.
class UsageError : public Error {
  using Error::Error;
};

class UndefinedMetricError : public Error {
  using Error::Error;
};

class FormatError : public Error {
  using Error::Error;
};

class CompatibilityError : public Error {
  using Error::Error;
};

class DivergenceError : public Error {
  using Error::Error;
};

}  // namespace pairlink
