#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mckean {

/// Argument outside the mathematical domain of an operation (negative time,
/// regularity exponent out of range, ...).
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Inputs that do not fit together: grid mismatch, wrong componentry,
/// empty source lists.
class UsageError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside the range where double precision honours the
/// stated accuracy.
class RangeError : public std::range_error {
public:
  using std::range_error::range_error;
};

/// A kernel or bandwidth too narrow for the evaluation grid.
class ResolutionError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Manifest or parameter validation failure, raised before any computation.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Picard iteration did not reach its tolerance; carries the distance history.
class IterationFailure : public std::runtime_error {
public:
  IterationFailure(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}

  const std::vector<double>& history() const noexcept { return history_; }

private:
  std::vector<double> history_;
};

} // namespace mckean
