#include "sta/protocol.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sta/quintic_spline.hpp"

namespace sta {

void SystemSpec::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("system.mass must be > 0");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("system.hbar must be > 0");
}

double default_window_multiple(double y, double edge_tolerance) {
  // omega'(c*tau) = (delta/tau)/(1+c^2) <= eps*omega0/tau  <=>  1+c^2 >= y/eps
  const double need = std::sqrt(std::max(0.0, std::abs(y) / edge_tolerance - 1.0));
  return std::max(20.0, std::ceil(need));
}

FrequencyProtocol FrequencyProtocol::arctan(double omega0, double delta, double tau,
                                            std::optional<Window> window,
                                            const ProtocolOptions& options) {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ConfigError("protocol.omega0 must be > 0");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("protocol.tau must be > 0");
  if (!std::isfinite(delta)) throw ConfigError("protocol.delta must be finite");
  if (std::abs(delta) / omega0 > 2.0 / std::numbers::pi * (1.0 + 1e-15))
    throw ConfigError("protocol.delta: |delta|/omega0 must not exceed 2/pi");
  if (!(options.edge_tolerance > 0.0)) throw ConfigError("edge_tolerance must be > 0");

  FrequencyProtocol p;
  p.kind_ = Kind::ArctanFamily;
  p.omega0_ = omega0;
  p.delta_ = delta;
  p.tau_ = tau;
  p.options_ = options;
  if (window) {
    if (!(window->t_end > window->t_start)) throw ConfigError("protocol.window must have t_start < t_end");
    p.window_ = *window;
  } else {
    const double c = default_window_multiple(delta / omega0, options.edge_tolerance);
    p.window_ = {-c * tau, c * tau};
  }
  if (options.enforce_edge) p.check_edges();
  p.validity_ = check_validity(p);
  if (!options.allow_inverted && (!p.validity_.analytic_bound_met || !p.validity_.positive))
    throw ValidityError("Omega^2 < 0 on the window (min " + std::to_string(p.validity_.min_omega2) +
                            ")",
                        p.validity_.t_at_min);
  return p;
}

FrequencyProtocol FrequencyProtocol::tabulated(std::vector<std::pair<double, double>> samples,
                                               std::optional<Window> window,
                                               const ProtocolOptions& options) {
  if (samples.size() < 8) throw ConfigError("protocol.samples: tabulated protocol needs at least 8 samples");
  std::vector<double> t, w;
  t.reserve(samples.size());
  w.reserve(samples.size());
  for (const auto& [ti, wi] : samples) {
    if (!std::isfinite(ti) || !std::isfinite(wi)) throw ConfigError("protocol.samples: non-finite value");
    if (!(wi > 0.0)) throw ConfigError("protocol.samples: omega must be > 0");
    t.push_back(ti);
    w.push_back(wi);
  }
  FrequencyProtocol p;
  p.kind_ = Kind::Tabulated;
  p.samples_ = std::move(samples);
  p.spline_ = std::make_shared<QuinticSpline>(t, w);
  p.options_ = options;
  const Window range{t.front(), t.back()};
  if (window) {
    if (!(window->t_end > window->t_start) || window->t_start < range.t_start ||
        window->t_end > range.t_end)
      throw ConfigError("protocol.window must lie inside the sample range");
    p.window_ = *window;
  } else {
    p.window_ = range;
  }
  p.omega0_ = p.spline_->derivatives(0.0 >= range.t_start && 0.0 <= range.t_end ? 0.0 : range.t_start)[0];
  p.delta_ = 0.0;
  p.tau_ = p.time_scale();
  if (options.enforce_edge) p.check_edges();
  p.validity_ = check_validity(p);
  if (!options.allow_inverted && !p.validity_.positive)
    throw ValidityError("Omega^2 < 0 on the window", p.validity_.t_at_min);
  return p;
}

void FrequencyProtocol::check_edges() const {
  // Tabulated schedules have no intrinsic rate; compare with their peak slope.
  double scale = omega0_ / tau_;
  if (kind_ == Kind::Tabulated) {
    scale = 0.0;
    const int n = 16 * static_cast<int>(samples_.size());
    for (int i = 0; i <= n; ++i)
      scale = std::max(scale, std::abs(evaluate(window_.t_start + window_.length() * i / n).d1));
  }
  const double limit = options_.edge_tolerance * scale;
  for (double t : {window_.t_start, window_.t_end}) {
    const double d = std::abs(evaluate(t).d1);
    if (d > limit)
      throw ConfigError("protocol.window: |omega'| = " + std::to_string(d) + " at t = " + std::to_string(t) +
                        " exceeds the edge tolerance " + std::to_string(limit));
  }
}

double FrequencyProtocol::time_scale() const {
  if (kind_ == Kind::ArctanFamily) return tau_;
  return (samples_.back().first - samples_.front().first) / static_cast<double>(samples_.size() - 1);
}

OmegaDerivatives FrequencyProtocol::evaluate(double t) const {
  if (kind_ == Kind::ArctanFamily) {
    const auto r = arctan_terms(omega0_, delta_, tau_, t);
    return {r.omega, r.d1, r.d2, r.d3};
  }
  if (t < spline_->x_min() || t > spline_->x_max())
    throw DomainError("t outside the tabulated sample range", t);
  const auto d = spline_->derivatives(t);
  return {d[0], d[1], d[2], d[3]};
}

double FrequencyProtocol::phase(double t) const {
  if (kind_ == Kind::ArctanFamily) return arctan_terms(omega0_, delta_, tau_, t).phase;
  if (t < spline_->x_min() || t > spline_->x_max())
    throw DomainError("t outside the tabulated sample range", t);
  const double origin = (0.0 >= spline_->x_min() && 0.0 <= spline_->x_max()) ? 0.0 : spline_->x_min();
  return spline_->integral(origin, t);
}

namespace {

void require_in_window(const FrequencyProtocol& p, double t) {
  const Window& w = p.window();
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(w.t_start), std::abs(w.t_end)));
  if (!(t >= w.t_start - slack && t <= w.t_end + slack)) throw DomainError("t outside the protocol window", t);
}

double omega2_unchecked(const FrequencyProtocol& p, double t) {
  const auto d = p.evaluate(t);
  return counterdiabatic_omega2(d.omega, d.d1, d.d2);
}

}  // namespace

OmegaDerivatives omega_derivatives(const FrequencyProtocol& p, double t) {
  require_in_window(p, t);
  return p.evaluate(t);
}

double counterdiabatic_frequency(const FrequencyProtocol& p, double t) {
  require_in_window(p, t);
  const double w2 = omega2_unchecked(p, t);
  if (w2 < 0.0 && !p.options().allow_inverted) throw ValidityError("Omega^2 < 0", t);
  return w2;
}

double counterdiabatic_rate(const FrequencyProtocol& p, double t) {
  require_in_window(p, t);
  const auto d = p.evaluate(t);
  return counterdiabatic_omega2_rate(d.omega, d.d1, d.d2, d.d3);
}

double phase_integral(const FrequencyProtocol& p, double t) {
  require_in_window(p, t);
  return p.phase(t);
}

ValidityReport check_validity(const FrequencyProtocol& p) {
  ValidityReport r;
  const Window& w = p.window();

  // Scan grid: uniform in atan(t/tau) for the arctan family so the central
  // region is resolved for any window width; uniform in t otherwise.
  std::vector<double> grid;
  if (p.kind() == FrequencyProtocol::Kind::ArctanFamily) {
    const double a = std::atan(w.t_start / p.tau()), b = std::atan(w.t_end / p.tau());
    const int n = 8000;
    for (int i = 0; i <= n; ++i) grid.push_back(p.tau() * std::tan(a + (b - a) * i / n));
    grid.front() = w.t_start;
    grid.back() = w.t_end;
  } else {
    const int n = std::max<int>(8000, 16 * static_cast<int>(p.samples().size()));
    for (int i = 0; i <= n; ++i) grid.push_back(w.t_start + w.length() * i / n);
  }

  std::size_t best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = omega2_unchecked(p, grid[i]);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  double t_min = grid[best];
  if (hi > lo) {
    const auto [tm, vm] = boost::math::tools::brent_find_minima(
        [&](double t) { return omega2_unchecked(p, t); }, lo, hi, 52);
    if (vm < best_v) {
      best_v = vm;
      t_min = tm;
    }
  }
  r.min_omega2 = best_v;
  r.t_at_min = t_min;
  r.positive = best_v >= -p.options().validity_tolerance * p.omega0() * p.omega0();

  if (p.kind() == FrequencyProtocol::Kind::ArctanFamily) {
    const double x = p.omega0() * p.tau();
    const double bound = std::sqrt(0.75) * std::abs(p.delta()) / p.omega0();
    r.analytic_bound_met = x >= bound * (1.0 - 1e-12);
    r.at_analytic_boundary = bound > 0.0 && std::abs(x - bound) <= 1e-12 * bound;
  }
  return r;
}

}  // namespace sta
