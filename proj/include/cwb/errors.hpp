#pragma once

#include <stdexcept>
#include <string>

namespace cwb {

// Invalid or inconsistent run configuration; message carries the field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Nonlinearity evaluated outside its composition budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(double value, double budget)
      : std::runtime_error("composition budget exceeded: |u| bound " +
                           std::to_string(value) + " > budget " +
                           std::to_string(budget)),
        value_(value),
        budget_(budget) {}
  double value() const { return value_; }
  double budget() const { return budget_; }

 private:
  double value_;
  double budget_;
};

// Linearized operator rejected: singular factorization or inverse-norm
// estimate above the configured ceiling. The parameter point is discarded.
class SmallDivisorFailure : public std::runtime_error {
 public:
  explicit SmallDivisorFailure(const std::string& msg, double inv_norm = 0.0)
      : std::runtime_error(msg), inv_norm_(inv_norm) {}
  double inv_norm_estimate() const { return inv_norm_; }

 private:
  double inv_norm_;
};

// A quantity that must be real (frequency, Fourier coefficient) carries an
// imaginary part beyond tolerance. Indicates an upstream symmetry bug.
class RealityViolation : public std::runtime_error {
 public:
  explicit RealityViolation(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cwb
