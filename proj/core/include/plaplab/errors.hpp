#pragma once

#include <stdexcept>
#include <string>

namespace plaplab {

/// Invalid input: a precondition or domain check failed.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed, unknown, or missing configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation could not produce a trustworthy number: blow-up guard,
/// infeasible sup, step above the stability limit.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Persisted data does not match what the reader expects.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace plaplab
