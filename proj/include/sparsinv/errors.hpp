#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sparsinv {

// Root of the library's exception hierarchy. The CLI maps each subclass to
// an exit code; see runner.hpp.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad argument: out-of-range sizes, non-unit vectors, malformed supports.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public DomainError {
 public:
  using DomainError::DomainError;
};

class NonFiniteError : public DomainError {
 public:
  using DomainError::DomainError;
};

class RankError : public Error {
 public:
  using Error::Error;
};

// Enumeration or iteration budget would be exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Iterative solver ran out of iterations. Carries the best iterate seen.
class ConvergenceError : public BudgetError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best)
      : BudgetError(what), best_iterate_(std::move(best)) {}
  const std::vector<double>& best_iterate() const noexcept { return best_iterate_; }

 private:
  std::vector<double> best_iterate_;
};

// A universal guarantee was observed to fail: always an implementation bug.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace sparsinv
