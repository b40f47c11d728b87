#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace srp {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input data: nonpositive prices, malformed CSV, mismatched dimensions, ...
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Two budgets with identical normalized prices; the patch relation is
// undefined for coincident hyperplanes, so the caller must deduplicate.
class DuplicateBudgetError : public ValidationError {
 public:
  DuplicateBudgetError(int period_a, int period_b)
      : ValidationError("duplicate normalized budgets for periods " +
                        std::to_string(period_a) + " and " + std::to_string(period_b)),
        period_a(period_a),
        period_b(period_b) {}
  int period_a;
  int period_b;
};

// An observation does not lie on its own budget hyperplane within tolerance.
class OffBudgetError : public ValidationError {
 public:
  OffBudgetError(int period, double deviation)
      : ValidationError("bundle violates budget " + std::to_string(period) +
                        " (|p.y - 1| = " + std::to_string(deviation) + ")"),
        period(period),
        deviation(deviation) {}
  int period;
  double deviation;
};

// Type enumeration exceeded the configured column cap.
class ColumnCapExceededError : public Error {
 public:
  explicit ColumnCapExceededError(std::uint64_t partial_count, std::uint64_t cap)
      : Error("type enumeration exceeded column cap " + std::to_string(cap) +
              " (enumerated " + std::to_string(partial_count) + " so far)"),
        partial_count(partial_count),
        cap(cap) {}
  std::uint64_t partial_count;
  std::uint64_t cap;
};

// Numerical solver failed (cycling, iteration limit, singular basis, ...).
// Distinct from a well-posed "infeasible" answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

// A bound query was asked on data that the model does not rationalize.
class NotRationalizableError : public Error {
 public:
  using Error::Error;
};

// Argument outside a mathematical domain (log of nonpositive value, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace srp
