#include "sta/wigner.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/laguerre.hpp>
#include <cmath>
#include <string>

#include "sta/errors.hpp"

namespace sta {

double laguerre(int n, double s) {
  if (n < 0) throw ConfigError("laguerre: n must be >= 0");
  if (n > kMaxLaguerreDegree) throw ConfigError("laguerre: degree above 200 is not supported");
  if (n == 0) return 1.0;
  double prev = 1.0, cur = 1.0 - s;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0 - s) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

double sign(int n) { return (n % 2 == 0) ? 2.0 : -2.0; }

// j-th derivative of L_n: (-1)^j L^{(j)}_{n-j}.
double laguerre_derivative(int n, int j, double s) {
  if (j > n) return 0.0;
  if (j == 0) return laguerre(n, s);
  const double v = boost::math::laguerre(static_cast<unsigned>(n - j), static_cast<unsigned>(j), s);
  return (j % 2 == 0) ? v : -v;
}

}  // namespace

std::array<double, 4> wigner_s_derivatives(int n, double s) {
  if (n < 0) throw ConfigError("wigner: n must be >= 0");
  if (n > kMaxLaguerreDegree) throw ConfigError("wigner: n above 200 is not supported");
  // d^k [e^{-s/2} L_n] = e^{-s/2} sum_j C(k,j) (-1/2)^{k-j} L_n^{(j)}
  std::array<double, 4> L{};
  for (int j = 0; j < 4; ++j) L[j] = laguerre_derivative(n, j, s);
  const double e = sign(n) * std::exp(-0.5 * s);
  static constexpr double C[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += C[k][j] * std::pow(-0.5, k - j) * L[j];
    out[k] = e * acc;
  }
  return out;
}

WignerEigenstate::WignerEigenstate(int n, double hbar) : n_(n), hbar_(hbar) {
  if (n < 0 || n > kMaxLaguerreDegree) throw ConfigError("wigner: n must lie in [0, 200]");
  if (!(hbar > 0.0)) throw ConfigError("wigner: hbar must be > 0");
}

double WignerEigenstate::operator()(double J) const {
  if (J < 0.0) throw DomainError("wigner: J must be >= 0", J);
  const double s = 4.0 * J / hbar_;
  return sign(n_) * std::exp(-0.5 * s) * laguerre(n_, s);
}

std::array<double, 4> WignerEigenstate::derivatives(double J) const {
  if (J < 0.0) throw DomainError("wigner: J must be >= 0", J);
  const double k = 4.0 / hbar_;
  auto d = wigner_s_derivatives(n_, k * J);
  d[1] *= k;
  d[2] *= k * k;
  d[3] *= k * k * k;
  return d;
}

double RecursionResiduals::max_recursion() const {
  return std::max({value_identity, derivative_identity, second_identity});
}

RecursionResiduals verify_recursions(int n, const std::vector<double>& J_grid, double hbar) {
  if (n < 0 || n + 1 > kMaxLaguerreDegree) throw ConfigError("verify_recursions: n out of range");
  if (!(hbar > 0.0)) throw ConfigError("verify_recursions: hbar must be > 0");
  RecursionResiduals r;
  double f_max = 0.0;
  std::vector<double> ode;
  const double nn = n;
  for (double J : J_grid) {
    if (!(J > 0.0)) throw DomainError("verify_recursions: J must be > 0", J);
    const double s = 4.0 * J / hbar;
    const double e = std::exp(-0.5 * s);
    // Laguerre values and derivatives from L_k' = (k/s)(L_k - L_{k-1}).
    const double Ln = laguerre(n, s);
    const double Lm = n > 0 ? laguerre(n - 1, s) : 0.0;
    const double Lmm = n > 1 ? laguerre(n - 2, s) : 0.0;
    const double Lp = laguerre(n + 1, s);
    const double dLn = nn / s * (Ln - Lm);
    const double dLm = n > 0 ? (nn - 1.0) / s * (Lm - Lmm) : 0.0;
    const double d2Ln = nn / s * (dLn - dLm) - nn / (s * s) * (Ln - Lm);

    const double F = sign(n) * e * Ln;
    const double Fm = n > 0 ? sign(n - 1) * e * Lm : 0.0;
    const double Fp = sign(n + 1) * e * Lp;
    const double Fs = sign(n) * e * (dLn - 0.5 * Ln);
    const double Fss = sign(n) * e * (d2Ln - dLn + 0.25 * Ln);
    const double F1 = 4.0 / hbar * Fs;           // dF/dJ
    const double F2 = 16.0 / (hbar * hbar) * Fss;  // d2F/dJ2

    const double r1 = J * F - 0.25 * hbar * ((2.0 * nn + 1.0) * F + nn * Fm + (nn + 1.0) * Fp);
    const double r2 = J * F1 - 0.5 * (nn * Fm - F - (nn + 1.0) * Fp);
    const double r3 = 0.25 * hbar * J * F2 - (-(nn + 0.5) * F + J / hbar * F - 0.25 * hbar * F1);
    r.value_identity = std::max(r.value_identity, std::abs(r1) / (0.25 * hbar));
    r.derivative_identity = std::max(r.derivative_identity, std::abs(r2));
    r.second_identity = std::max(r.second_identity, std::abs(r3));

    // eigenvalue ODE with the generalized-Laguerre derivatives
    const WignerEigenstate w(n, hbar);
    const auto d = w.derivatives(J);
    ode.push_back(0.25 * hbar * (J * d[2] + d[1]) + (nn + 0.5 - J / hbar) * d[0]);
    f_max = std::max(f_max, std::abs(d[0]));
  }
  for (double v : ode) r.ode = std::max(r.ode, std::abs(v) / f_max);
  return r;
}

Decomposition final_state_decomposition(int n, double nu, double mu, double hbar) {
  if (n < 0 || n + 2 > kMaxLaguerreDegree) throw ConfigError("final_state_decomposition: n out of range");
  if (!(hbar > 0.0)) throw ConfigError("final_state_decomposition: hbar must be > 0");

  // Composite Gauss-Legendre over (0, s_max]; the integrands are
  // polynomials times e^{-s}, so a few dozen panels reach round-off.
  const double s_max = 4.0 * (n + 6) + 40.0;
  const int panels = 16;
  using GL = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> nodes, weights;
  for (int k = 0; k < panels; ++k) {
    const double a = s_max * k / panels, b = s_max * (k + 1) / panels;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    const auto& x = GL::abscissa();
    const auto& w = GL::weights();
    for (std::size_t i = 0; i < x.size(); ++i) {
      nodes.push_back(mid + half * x[i]);
      weights.push_back(half * w[i]);
      if (x[i] != 0.0) {
        nodes.push_back(mid - half * x[i]);
        weights.push_back(half * w[i]);
      }
    }
  }

  const WignerEigenstate F(n, hbar);
  std::vector<int> basis;
  if (n >= 2) basis.push_back(n - 2);
  basis.push_back(n);
  basis.push_back(n + 2);
  const std::size_t m = nodes.size(), k = basis.size();

  Eigen::VectorXd correction(m);
  Eigen::MatrixXd B(m, k);
  for (std::size_t i = 0; i < m; ++i) {
    const double J = 0.25 * hbar * nodes[i];
    const auto d = F.derivatives(J);
    const double f = d[0], f1 = d[1], f2 = d[2], f3 = d[3];
    const double JF1_prime = f1 + J * f2;   // (J F')'
    const double JF_prime = f + J * f1;     // (J F)'
    const double JF2_prime = f2 + J * f3;   // (J F'')'
    correction[static_cast<Eigen::Index>(i)] =
        nu * J * (f1 + JF1_prime) +
        mu * J / hbar * (f + JF_prime + 0.25 * hbar * hbar * (f2 + JF2_prime));
    for (std::size_t j = 0; j < k; ++j)
      B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = WignerEigenstate(basis[j], hbar)(J);
  }
  // weighted least squares: minimise int ds (correction - B c)^2
  const Eigen::VectorXd sw = Eigen::Map<const Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(m)).cwiseSqrt();
  const Eigen::MatrixXd Bw = sw.asDiagonal() * B;
  const Eigen::VectorXd cw = sw.asDiagonal() * correction;
  const Eigen::VectorXd c = Bw.colPivHouseholderQr().solve(cw);

  Decomposition out;
  out.n = n;
  std::size_t j = 0;
  if (n >= 2) out.c_down = c[static_cast<Eigen::Index>(j++)];
  out.c_same = c[static_cast<Eigen::Index>(j++)];
  out.c_up = c[static_cast<Eigen::Index>(j)];
  out.correction_norm = cw.norm();
  const double off = (cw - Bw * c).norm();
  out.residual = out.correction_norm > 0.0 ? off / out.correction_norm : 0.0;
  if (out.residual > 1e-6)
    throw Error("final-state correction does not decompose onto F_{n-2}, F_n, F_{n+2} (residual " +
                std::to_string(out.residual) + ")");
  return out;
}

}  // namespace sta
