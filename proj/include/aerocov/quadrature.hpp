#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature over [0, inf).
//
// The half line is cut into finite panels at the caller's breakpoints; the
// last panel [b, inf) is integrated in the variable w = log(y / b) mapped
// onto [0, 1) by w = z / (1 - z). Algebraic tails such as y^-1.4 turn into
// exponential decay in w, so slowly decaying integrands need no manual
// truncation.

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace aerocov {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct QuadOptions {
  /// Interior points where the integrand may have a kink; sorted internally.
  std::vector<double> breakpoints;
  /// Start of the log-mapped tail when no positive breakpoint is given.
  double scale = 1.0;
  /// Integrate over [0, upper] instead of [0, inf).
  std::optional<double> upper;
  int max_subdivisions = 4000;
};

class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double partial_value, double error_estimate)
      : std::runtime_error(what), partial_value_(partial_value), error_estimate_(error_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double partial_value_;
  double error_estimate_;
};

/// Integrates f over [0, inf) until the error estimate is at most
/// max(rel_tol * |value|, abs_tol). Throws NumericalError when the
/// subdivision budget runs out.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double rel_tol,
                                   double abs_tol, const QuadOptions& options = {});

}  // namespace aerocov
