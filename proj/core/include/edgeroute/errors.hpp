#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgeroute {

// Invalid numeric arguments to the cost model and router are reported with
// std::invalid_argument. The types below cover data and configuration
// problems that the CLI maps to exit status 2.

/// A router or evaluator configuration that cannot be executed, e.g. the
/// trace score provider selected on a record without a semantic score.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed trace line. `line()` is 1-based.
class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Well-formed records that violate a trace invariant.
class TraceValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edgeroute
