#include "sta/oscillatory.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sta {

namespace {

using Cx = std::complex<double>;
constexpr int kJetOrder = 14;
using Jet = Taylor<kJetOrder>;

// An integrand is G(u) exp(i psi(u)) with G = gr + i gi. Integrands that
// can be evaluated on jets get analytic tails.
template <class F>
concept JetIntegrand = requires(const F& f, const Jet& u, Jet& a, Jet& b, Jet& c) { f(u, a, b, c); };

template <class F>
Cx integrand_value(const F& f, double u) {
  double gr = 0.0, gi = 0.0, psi = 0.0;
  f(u, gr, gi, psi);
  return Cx(gr, gi) * Cx(std::cos(psi), std::sin(psi));
}

template <class F>
double phase_rate(const F& f, double u, double lo = -HUGE_VAL, double hi = HUGE_VAL) {
  if constexpr (JetIntegrand<F>) {
    Taylor<1> gr, gi, psi;
    f(Taylor<1>::variable(u), gr, gi, psi);
    return psi[1];
  } else {
    // central difference, pulled inside [lo, hi] near the ends
    const double h = std::min(1e-6 * std::max(1.0, std::abs(u)), 0.5 * (hi - lo));
    const double c = std::clamp(u, lo + h, hi - h);
    double a = 0, b = 0, p1 = 0, p2 = 0;
    f(c + h, a, b, p1);
    f(c - h, a, b, p2);
    return (p1 - p2) / (2 * h);
  }
}

struct Accumulator {
  Cx value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  long panels = 0;
};

// One Gauss-Kronrod 21 panel with the (K21 - G10) error, both scaled to [a, b].
template <class F>
Cx gauss_kronrod_panel(const F& f, double a, double b, double& err, double& l1) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  using G = boost::math::quadrature::gauss<double, 10>;
  const auto& x = GK::abscissa();
  const auto& wk = GK::weights();
  const auto& wg = G::weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  Cx k = integrand_value(f, mid) * wk[0], g = 0.0;
  double mass = std::abs(k);
  for (std::size_t i = 1; i < x.size(); ++i) {
    const Cx fp = integrand_value(f, mid + half * x[i]);
    const Cx fm = integrand_value(f, mid - half * x[i]);
    k += (fp + fm) * wk[i];
    mass += (std::abs(fp) + std::abs(fm)) * wk[i];
    if (i % 2 == 1) g += (fp + fm) * wg[(i - 1) / 2];
  }
  err = half * std::abs(k - g);
  l1 = half * mass;
  return half * k;
}

template <class F>
void integrate_panel(const F& f, double a, double b, double tol_density, double rel_tol, int depth,
                     Accumulator& acc, long max_panels) {
  double err = 0.0, l1 = 0.0;
  const Cx v = gauss_kronrod_panel(f, a, b, err, l1);
  ++acc.panels;
  if (acc.panels > max_panels) throw AccuracyError("oscillatory quadrature: panel budget exhausted", std::abs(acc.value), acc.error);
  const double tol = std::max(rel_tol * l1, tol_density * (b - a));
  if (err > tol && depth < 40) {
    const double m = 0.5 * (a + b);
    integrate_panel(f, a, m, tol_density, rel_tol, depth + 1, acc, max_panels);
    integrate_panel(f, m, b, tol_density, rel_tol, depth + 1, acc, max_panels);
    return;
  }
  acc.value += v;
  acc.error += err;
  acc.l1 += l1;
}

// Panels no wider than a fraction of the distance to the centre and half an
// oscillation of the local phase.
template <class F>
void integrate_range(const F& f, double a, double b, double center, double scale, const QuadratureOptions& o,
                     double tol_density, Accumulator& acc) {
  double u = a;
  while (u < b) {
    const double rate = std::abs(phase_rate(f, u, a, b));
    double w = 0.25 * (scale + std::abs(u - center));
    if (rate > 0.0) w = std::min(w, std::numbers::pi / rate);
    double v = std::min(b, u + w);
    if (b - v < 1e-3 * w) v = b;
    integrate_panel(f, u, v, tol_density, o.rel_tol, 0, acc, o.max_panels);
    u = v;
  }
}

struct Tail {
  Cx value = 0.0;
  double remainder = 0.0;  // estimated size of what the truncated series misses
  bool converged = false;
};

// int_L^inf (side = +1) or int_-inf^-L (side = -1) of G e^{i psi}, by
// repeated integration by parts: with T[h] = h/(i psi') and
// h_{k+1} = -(T[h_k])', the upper tail is -e^{i psi(L)} sum T[h_k](L) and
// the lower tail is +e^{i psi(-L)} sum T[h_k](-L).
template <class F>
Tail asymptotic_tail(const F& f, double L, int side) {
  Jet gr, gi, psi;
  f(Jet::variable(L), gr, gi, psi);
  const Jet inv_rate = 1.0 / psi.differentiate();
  Jet hr = gr, hi = gi;
  Cx sum = 0.0;
  double last = std::numeric_limits<double>::infinity();
  Tail t;
  double abs_sum = 0.0;
  for (int k = 0; k < kJetOrder - 1; ++k) {
    // T[h] = -i h / psi'
    const Jet tr = hi * inv_rate;
    const Jet ti = -1.0 * (hr * inv_rate);
    const Cx term(tr[0], ti[0]);
    const double mag = std::abs(term);
    if (mag > last) break;  // asymptotic series started to diverge
    sum += term;
    abs_sum += mag;
    last = mag;
    hr = -1.0 * tr.differentiate();
    hi = -1.0 * ti.differentiate();
    // int_L^inf |h_{k+1}| is about L |h_{k+1}(L)| / (k+1) for algebraic decay
    t.remainder = mag + std::abs(L) * std::abs(Cx(hr[0], hi[0]));
    if (t.remainder < 1e-17 * abs_sum) break;
  }
  t.remainder += 16.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  const Cx e(std::cos(psi[0]), std::sin(psi[0]));
  t.value = (side > 0 ? -1.0 : 1.0) * e * sum;
  t.converged = std::isfinite(t.remainder);
  return t;
}

template <class F>
OscillatoryResult integrate_oscillatory(const F& f, double lo, double hi, bool natural, double center,
                                        double scale, const QuadratureOptions& o) {
  OscillatoryResult r;
  Accumulator acc;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  if constexpr (JetIntegrand<F>) {
    if (natural) {
      // Tail start per side: far enough that the phase has wound ~60 rad.
      auto pick = [&](int side) {
        if (o.tail_start) return center + side * (*o.tail_start) * scale;
        double L = 20.0 * scale;
        for (int i = 0; i < 60; ++i) {
          const double u = center + side * L;
          if (std::abs(phase_rate(f, u)) * L >= 60.0) break;
          L *= 2.0;
        }
        return center + side * L;
      };
      const double a = pick(-1), b = pick(+1);
      const Tail low = asymptotic_tail(f, a, -1), up = asymptotic_tail(f, b, +1);
      const double tol_density = o.abs_tol / (b - a);
      integrate_range(f, a, b, center, scale, o, tol_density, acc);
      r.value = acc.value + low.value + up.value;
      r.truncation_bound = low.remainder + up.remainder;
      r.abs_error_estimate = acc.error + 16.0 * eps * acc.l1;
      r.panels = acc.panels;
      return r;
    }
  }

  const double tol_density = o.abs_tol / (hi - lo);
  integrate_range(f, lo, hi, center, scale, o, tol_density, acc);
  r.value = acc.value;
  r.abs_error_estimate = acc.error + 16.0 * eps * acc.l1;
  r.panels = acc.panels;
  if constexpr (JetIntegrand<F>) {
    // window only: report the size of the two omitted tails
    const Tail low = asymptotic_tail(f, lo, -1), up = asymptotic_tail(f, hi, +1);
    r.truncation_bound = std::abs(low.value) + std::abs(up.value) + low.remainder + up.remainder;
  }
  return r;
}

// --- integrands over protocol time ----------------------------------------

enum class Kernel { I0, I1Defining, I1Reduced };

struct ArctanKernel {
  double omega0, delta, tau, theta_dot, phase0;
  Kernel kernel;

  template <class R>
  void operator()(const R& t, R& gr, R& gi, R& psi) const {
    const auto a = arctan_terms(omega0, delta, tau, t);
    psi = -2.0 * (a.phase - phase0);
    if (kernel == Kernel::I1Reduced) {
      const R r = a.d1 / a.omega;
      gr = (-0.25 / theta_dot) * (r * r / a.omega);
      gi = (-1.0 / theta_dot) * r;
      return;
    }
    const R rate = counterdiabatic_omega2_rate(a.omega, a.d1, a.d2, a.d3);
    R g = rate / (2.0 * theta_dot * a.omega);
    if (kernel == Kernel::I1Defining) g = t * g;
    gr = g;
    gi = 0.0 * g;
  }
};

struct TabulatedKernel {
  const FrequencyProtocol* p;
  double theta_dot, phase0;
  Kernel kernel;

  void operator()(double t, double& gr, double& gi, double& psi) const {
    const OmegaDerivatives d = p->evaluate(t);
    psi = -2.0 * (p->phase(t) - phase0);
    if (kernel == Kernel::I1Reduced) {
      const double r = d.d1 / d.omega;
      gr = (-0.25 / theta_dot) * r * r / d.omega;
      gi = (-1.0 / theta_dot) * r;
      return;
    }
    const double rate = counterdiabatic_omega2_rate(d.omega, d.d1, d.d2, d.d3);
    gr = rate / (2.0 * theta_dot * d.omega);
    if (kernel == Kernel::I1Defining) gr *= t;
    gi = 0.0;
  }
};

OscillatoryResult protocol_integral(const FrequencyProtocol& p, const DrivingSpec& drive, Kernel k,
                                    const QuadratureOptions& o) {
  drive.require_constant_rate();
  if (!(drive.theta_dot != 0.0) || !std::isfinite(drive.theta_dot))
    throw ConfigError("drive.theta_dot must be finite and nonzero");
  const Window& w = p.window();
  const double phase0 = p.phase(w.t_start);
  if (p.kind() == FrequencyProtocol::Kind::ArctanFamily) {
    if (p.delta() == 0.0) return {};
    const ArctanKernel f{p.omega0(), p.delta(), p.tau(), drive.theta_dot, phase0, k};
    return integrate_oscillatory(f, w.t_start, w.t_end, o.domain == IntegralDomain::Natural, 0.0, p.tau(), o);
  }
  const TabulatedKernel f{&p, drive.theta_dot, phase0, k};
  const double center = 0.5 * (w.t_start + w.t_end);
  return integrate_oscillatory(f, w.t_start, w.t_end, false, center, 0.125 * w.length(), o);
}

// --- shape integral F[x, y] -------------------------------------------------

struct ShapeKernel {
  double x, y;

  template <class R>
  void operator()(const R& s, R& gr, R& gi, R& psi) const {
    using std::atan;
    using std::log;
    const R q = 1.0 / (1.0 + s * s);
    const R w = 1.0 + y * atan(s);
    const R a = q / w;
    gr = a;
    gi = (-y / (4.0 * x)) * (a * q / (w * w));
    psi = (-2.0 * x) * (s * w - (0.5 * y) * log(1.0 + s * s));
  }
};

}  // namespace

OscillatoryResult integral_I0(const FrequencyProtocol& p, const DrivingSpec& drive, const QuadratureOptions& o) {
  return protocol_integral(p, drive, Kernel::I0, o);
}

OscillatoryResult integral_I1(const FrequencyProtocol& p, const DrivingSpec& drive, I1Form form,
                              const QuadratureOptions& o) {
  return protocol_integral(p, drive, form == I1Form::Defining ? Kernel::I1Defining : Kernel::I1Reduced, o);
}

OscillatoryResult f_curve_integral(double x, double y, const QuadratureOptions& o) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("f_curve: x must be > 0", x);
  if (!(y >= 0.0) || y > 2.0 / std::numbers::pi * (1.0 + 1e-15)) throw DomainError("f_curve: y must lie in [0, 2/pi]", y);
  const ShapeKernel f{x, y};
  QuadratureOptions nat = o;
  nat.domain = IntegralDomain::Natural;
  return integrate_oscillatory(f, -1.0, 1.0, true, 0.0, 1.0, nat);
}

FCurveValue f_curve(double x, double y, double abs_tol, const QuadratureOptions& o) {
  const OscillatoryResult r = f_curve_integral(x, y, o);
  FCurveValue v{std::abs(r.value), r.abs_error_estimate, r.truncation_bound};
  if (v.abs_error_estimate + v.truncation_bound > abs_tol)
    throw AccuracyError("f_curve: requested accuracy not reached at x = " + std::to_string(x), v.value,
                        v.abs_error_estimate + v.truncation_bound);
  return v;
}

}  // namespace sta
