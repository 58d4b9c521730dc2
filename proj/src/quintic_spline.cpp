#include "sta/quintic_spline.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "sta/errors.hpp"

namespace sta {

namespace {

// Hermite quintic on [0, h] with p(0)=y0, p'(0)=d0, p''(0)=s0,
// p(h)=y1, p'(h)=d1, p''(h)=s1. The upper coefficients are linear in
// (d0, s0, d1, s1) plus a part driven by (y1 - y0).
struct UpperCoefficients {
  // Row k (c3, c4, c5): weights of d0, s0, d1, s1 and the constant.
  std::array<std::array<double, 5>, 3> row;
};

UpperCoefficients upper(double h, double dy) {
  // A = dy - d0*h - s0*h^2/2, B = d1 - d0 - s0*h, C = s1 - s0
  const std::array<double, 5> A = {-h, -0.5 * h * h, 0.0, 0.0, dy};
  const std::array<double, 5> B = {-1.0, -h, 1.0, 0.0, 0.0};
  const std::array<double, 5> C = {0.0, -1.0, 0.0, 1.0, 0.0};
  const double h2 = h * h, h3 = h2 * h, h4 = h3 * h, h5 = h4 * h;
  UpperCoefficients u{};
  for (int j = 0; j < 5; ++j) {
    u.row[0][j] = (10.0 * A[j] - 4.0 * B[j] * h + 0.5 * C[j] * h2) / h3;
    u.row[1][j] = (-15.0 * A[j] + 7.0 * B[j] * h - C[j] * h2) / h4;
    u.row[2][j] = (6.0 * A[j] - 3.0 * B[j] * h + 0.5 * C[j] * h2) / h5;
  }
  return u;
}

}  // namespace

QuinticSpline::QuinticSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)) {
  const std::size_t n = x_.size();
  if (n != y.size()) throw ConfigError("spline: x and y sizes differ");
  if (n < 8) throw ConfigError("tabulated protocol needs at least 8 samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw ConfigError("tabulated samples must be strictly increasing in t");

  // Unknowns: d_i at 2i, s_i at 2i+1.
  const int N = static_cast<int>(2 * n);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  int row = 0;

  // Third and fourth derivative rows of interval i at local offset h_at.
  // p''' = 6 c3 + 24 c4 h + 60 c5 h^2, p'''' = 24 c4 + 120 c5 h.
  auto add = [&](std::size_t i, double h_at, int which, double sign) {
    const double h = x_[i + 1] - x_[i];
    const UpperCoefficients u = upper(h, y[i + 1] - y[i]);
    std::array<double, 3> w{};
    if (which == 3) w = {6.0, 24.0 * h_at, 60.0 * h_at * h_at};
    else w = {0.0, 24.0, 120.0 * h_at};
    const int cols[4] = {static_cast<int>(2 * i), static_cast<int>(2 * i + 1),
                         static_cast<int>(2 * i + 2), static_cast<int>(2 * i + 3)};
    for (int j = 0; j < 4; ++j) {
      double v = 0.0;
      for (int k = 0; k < 3; ++k) v += w[k] * u.row[k][j];
      if (v != 0.0) trip.emplace_back(row, cols[j], sign * v);
    }
    double c = 0.0;
    for (int k = 0; k < 3; ++k) c += w[k] * u.row[k][4];
    rhs[row] -= sign * c;
  };

  for (int which : {3, 4}) {
    add(0, 0.0, which, 1.0);
    ++row;
    add(n - 2, x_[n - 1] - x_[n - 2], which, 1.0);
    ++row;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    for (int which : {3, 4}) {
      add(k - 1, x_[k] - x_[k - 1], which, 1.0);
      add(k, 0.0, which, -1.0);
      ++row;
    }
  }

  Eigen::SparseMatrix<double> A(N, N);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw ConfigError("spline: singular knot system");
  const Eigen::VectorXd sol = lu.solve(rhs);

  coef_.resize(n - 1);
  cumulative_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    const UpperCoefficients u = upper(h, y[i + 1] - y[i]);
    const double vars[5] = {sol[2 * i], sol[2 * i + 1], sol[2 * i + 2], sol[2 * i + 3], 1.0};
    std::array<double, 6>& c = coef_[i];
    c[0] = y[i];
    c[1] = sol[2 * i];
    c[2] = 0.5 * sol[2 * i + 1];
    for (int k = 0; k < 3; ++k) {
      double v = 0.0;
      for (int j = 0; j < 5; ++j) v += u.row[k][j] * vars[j];
      c[3 + k] = v;
    }
    cumulative_[i + 1] = cumulative_[i] + partial_integral(i, h);
  }
}

std::size_t QuinticSpline::interval(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return coef_.size() - 1;
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

std::array<double, 4> QuinticSpline::derivatives(double t) const {
  const std::size_t i = interval(t);
  const auto& c = coef_[i];
  const double h = t - x_[i];
  const double v = c[0] + h * (c[1] + h * (c[2] + h * (c[3] + h * (c[4] + h * c[5]))));
  const double d1 = c[1] + h * (2 * c[2] + h * (3 * c[3] + h * (4 * c[4] + h * 5 * c[5])));
  const double d2 = 2 * c[2] + h * (6 * c[3] + h * (12 * c[4] + h * 20 * c[5]));
  const double d3 = 6 * c[3] + h * (24 * c[4] + h * 60 * c[5]);
  return {v, d1, d2, d3};
}

double QuinticSpline::partial_integral(std::size_t i, double h) const {
  const auto& c = coef_[i];
  return h * (c[0] + h * (c[1] / 2 + h * (c[2] / 3 + h * (c[3] / 4 + h * (c[4] / 5 + h * c[5] / 6)))));
}

double QuinticSpline::integral(double a, double b) const {
  auto F = [&](double t) {
    const std::size_t i = interval(t);
    return cumulative_[i] + partial_integral(i, t - x_[i]);
  };
  return F(b) - F(a);
}

}  // namespace sta
