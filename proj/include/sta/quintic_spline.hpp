#pragma once

#include <array>
#include <vector>

namespace sta {

/// C^4 quintic interpolating spline with natural ends (third and fourth
/// derivatives vanish at both end knots). Each interval is a Hermite
/// quintic in (value, slope, curvature) at its knots; slopes and
/// curvatures come from one sparse solve.
class QuinticSpline {
 public:
  QuinticSpline(std::vector<double> x, std::vector<double> y);

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

  /// Value and first three derivatives at t (extrapolates polynomially).
  std::array<double, 4> derivatives(double t) const;
  double operator()(double t) const { return derivatives(t)[0]; }

  /// Exact integral of the spline from a to b.
  double integral(double a, double b) const;

 private:
  std::size_t interval(double t) const;
  /// Antiderivative from x_[i] to x_[i] + h within interval i.
  double partial_integral(std::size_t i, double h) const;

  std::vector<double> x_;
  // Per interval: y0, d0, s0/2, c3, c4, c5 in powers of (t - x_i).
  std::vector<std::array<double, 6>> coef_;
  std::vector<double> cumulative_;  // integral from x_[0] to x_[i]
};

}  // namespace sta
