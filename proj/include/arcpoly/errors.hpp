#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace arcpoly {

/// Short numeric formatting for error messages (%.6g).
inline std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

/// Argument outside the region where an operation is defined (arc endpoints,
/// p below the supported range, degrees above a cache bound, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Evaluation requested at a pole of a rational map.
class PoleError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Neither square-root branch can be told apart by modulus.
class BranchAmbiguityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OverflowError : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

/// A refinement sequence failed to settle within the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IllConditionedError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Sampled data does not match the layout an operation requires.
class GridMismatchError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Experiment configuration rejected; `field()` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(std::string field, const std::string& message)
    : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

} // namespace arcpoly
