#pragma once

#include <vector>

#include "mtlab/errors.hpp"

namespace mtlab {

/// Continuous piecewise-linear function given by knot/value tables, constant
/// beyond the end knots. sup/inf/Lipschitz constants are exact over the table.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn() : knots_{0.0}, values_{0.0} {}
  PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values);

  static PiecewiseLinearFn constant(double v) { return PiecewiseLinearFn({0.0}, {v}); }

  double operator()(double x) const;

  double sup() const;
  double inf() const;
  double lipschitz() const;

  /// Exact extrema over [lo, hi] (constant extrapolation included).
  double inf_on(double lo, double hi) const;
  double sup_on(double lo, double hi) const;

  bool is_constant(double v) const;
  bool is_zero() const { return is_constant(0.0); }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_;   // strictly increasing, size >= 1
  std::vector<double> values_;
};

}  // namespace mtlab
