#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tweetfuse {

/// A caller broke a documented precondition (bad argument, missing feature
/// source, dimension mismatch).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Base for recoverable runtime failures (bad input files, degenerate data).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

  /// Same error with `prefix` (typically a file name) prepended.
  ParseError in_context(const std::string& prefix) const {
    ParseError copy(*this);
    static_cast<Error&>(copy) = Error(prefix + ": " + what());
    return copy;
  }

 private:
  std::size_t line_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class TrainError : public Error {
 public:
  using Error::Error;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

}  // namespace tweetfuse
