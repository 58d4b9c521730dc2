#pragma once

// Test-only reference values computed without the library's quadrature:
// tails are rotated off the real axis onto rays where the oscillatory
// factor decays exponentially, then integrated with double-exponential
// rules written here.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;
using Fn = std::function<Cx(Cx)>;

struct Node {
  Cx t;   // point on the contour
  Cx dt;  // weight times dt/dparameter
};

// tanh-sinh nodes on the straight segment a -> b (complex endpoints).
inline void tanh_sinh_nodes(Cx a, Cx b, int level, std::vector<Node>& out) {
  const double h = std::ldexp(1.0, -level);
  const Cx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double pi2 = 0.5 * std::numbers::pi;
  for (long k = -static_cast<long>(6.0 / h); k <= static_cast<long>(6.0 / h); ++k) {
    const double t = k * h;
    const double s = pi2 * std::sinh(t);
    const double x = std::tanh(s);
    const double c = std::cosh(s);
    const double w = h * pi2 * std::cosh(t) / (c * c);
    if (w < 1e-300 || std::abs(x) == 1.0) continue;
    out.push_back({mid + half * x, half * w});
  }
}

// exp-sinh nodes on the ray origin + direction * v, v in [0, inf).
inline void exp_sinh_nodes(Cx origin, Cx direction, int level, std::vector<Node>& out) {
  const double h = std::ldexp(1.0, -level);
  const double pi2 = 0.5 * std::numbers::pi;
  for (long k = -static_cast<long>(5.0 / h); k <= static_cast<long>(4.0 / h); ++k) {
    const double t = k * h;
    const double v = std::exp(pi2 * std::sinh(t));
    const double w = h * pi2 * std::cosh(t) * v;
    if (!std::isfinite(v) || v > 1e6) continue;
    out.push_back({origin + direction * v, direction * w});
  }
}

// Real line deformed into: ray from -L - i inf up to -L, segment [-L, L],
// ray from L down to L - i inf (sign = -1), or the mirror image above the
// axis (sign = +1). Orientation runs from -inf to +inf.
inline std::vector<Node> line_contour(double L, int sign, int segments, int level) {
  std::vector<Node> nodes;
  const Cx dir(0.0, sign);
  std::vector<Node> ray;
  exp_sinh_nodes(Cx(-L, 0.0), dir, level, ray);
  for (auto n : ray) nodes.push_back({n.t, -n.dt});  // traversed towards the axis
  for (int s = 0; s < segments; ++s) {
    const double a = -L + 2.0 * L * s / segments, b = -L + 2.0 * L * (s + 1) / segments;
    tanh_sinh_nodes(Cx(a, 0.0), Cx(b, 0.0), level, nodes);
  }
  ray.clear();
  exp_sinh_nodes(Cx(L, 0.0), dir, level, ray);
  for (auto n : ray) nodes.push_back(n);
  return nodes;
}

inline Cx integrate(const Fn& f, const std::vector<Node>& nodes) {
  Cx sum = 0.0;
  for (const auto& n : nodes) {
    const Cx v = f(n.t);
    if (std::isfinite(v.real()) && std::isfinite(v.imag())) sum += v * n.dt;
  }
  return sum;
}

// F[x, y] = |int ds G(s) exp(-2 i x phi(s))|.
inline double f_curve(double x, double y, int level = 7) {
  const Fn h = [x, y](Cx s) {
    const Cx w = 1.0 + y * std::atan(s);
    const Cx q = 1.0 / (1.0 + s * s);
    const Cx g = (1.0 - Cx(0.0, y / (4.0 * x)) * q / (w * w)) * q / w;
    const Cx phi = s * w - 0.5 * y * std::log(1.0 + s * s);
    return g * std::exp(Cx(0.0, -2.0 * x) * phi);
  };
  const int segments = static_cast<int>(std::ceil(8.0 * std::max(1.0, x)));
  return std::abs(integrate(h, line_contour(4.0, -1, segments, level)));
}

// Arctan schedule continued to complex time.
struct Schedule {
  double omega0, delta, tau;

  Cx omega(Cx t) const { return omega0 + delta * std::atan(t / tau); }
  Cx phase(Cx t) const {
    const Cx u = t / tau;
    return omega0 * t + delta * tau * (u * std::atan(u) - 0.5 * std::log(1.0 + u * u));
  }
  // dOmega^2/dt from Omega^2 = w^2 + w''/(2w) - 3 w'^2/(4 w^2), differentiated term by term.
  Cx omega2_rate(Cx t) const {
    const Cx u = t / tau;
    const Cx p = 1.0 + u * u;
    const Cx w = omega(t);
    const Cx w1 = delta / (tau * p);
    const Cx w2 = -2.0 * delta * u / (tau * tau * p * p);
    const Cx w3 = delta * (6.0 * u * u - 2.0) / (tau * tau * tau * p * p * p);
    return 2.0 * w * w1 + w3 / (2.0 * w) - w2 * w1 / (2.0 * w * w) - 1.5 * w1 * w2 / (w * w) +
           1.5 * w1 * w1 * w1 / (w * w * w);
  }
};

// nu = int dt int dt' A(t) A(t') N(t, t') [f^2(t) f*^2(t') + cc] with
// A = (dOmega^2/dt)/theta_dot and N = var_theta0 + var_P0 t t'/M^2, as a
// genuine double sum. f^2 is continued below the axis, f*^2 above it.
inline double nu_double_integral(const Schedule& s, double theta_dot, double M, double var_theta0, double var_P0,
                                 int level = 6) {
  const double L = 3.0 * s.tau;
  const int segments = static_cast<int>(std::ceil(4.0 * L * (s.omega0 + std::abs(s.delta))));
  const auto lower = line_contour(L, -1, segments, level);
  const auto upper = line_contour(L, +1, segments, level);
  std::vector<Cx> a(lower.size()), b(upper.size());
  for (std::size_t i = 0; i < lower.size(); ++i) {
    const Cx t = lower[i].t;
    const Cx f2 = std::exp(Cx(0.0, -2.0) * s.phase(t)) / (2.0 * s.omega(t));
    a[i] = lower[i].dt * s.omega2_rate(t) / theta_dot * f2;
  }
  for (std::size_t j = 0; j < upper.size(); ++j) {
    const Cx t = upper[j].t;
    const Cx f2c = std::exp(Cx(0.0, 2.0) * s.phase(t)) / (2.0 * s.omega(t));
    b[j] = upper[j].dt * s.omega2_rate(t) / theta_dot * f2c;
  }
  Cx sum = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(std::abs(a[i]))) continue;
    Cx row = 0.0;
    for (std::size_t j = 0; j < upper.size(); ++j) {
      if (!std::isfinite(std::abs(b[j]))) continue;
      const Cx N = var_theta0 + var_P0 * lower[i].t * upper[j].t / (M * M);
      row += b[j] * N;
    }
    sum += a[i] * row;
  }
  return 2.0 * sum.real();
}

}  // namespace oracle
