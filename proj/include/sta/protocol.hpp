#pragma once

// Frequency schedules omega(t), their derivatives and the counterdiabatic
// frequency Omega^2(t) for which the WKB mode of omega is exact.

#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sta/errors.hpp"
#include "sta/taylor.hpp"

namespace sta {

class QuinticSpline;

struct SystemSpec {
  double mass = 1.0;
  double hbar = 1.0;

  void validate() const;
};

struct Window {
  double t_start = 0.0;
  double t_end = 0.0;

  double length() const { return t_end - t_start; }
  bool contains(double t) const { return t >= t_start && t <= t_end; }
};

struct OmegaDerivatives {
  double omega = 0.0;
  double d1 = 0.0;  // first time derivative
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Closed-form pieces of the arctan schedule omega0 + delta*atan(t/tau).
/// Templated so the same expressions evaluate on doubles, complex numbers
/// and Taylor jets.
template <class R>
struct ArctanTerms {
  R omega, d1, d2, d3, phase;
};

template <class R>
ArctanTerms<R> arctan_terms(double omega0, double delta, double tau, const R& t) {
  using std::atan;
  using std::log;
  const R u = t / tau;
  const R q = 1.0 / (1.0 + u * u);
  ArctanTerms<R> r;
  r.omega = omega0 + delta * atan(u);
  r.d1 = (delta / tau) * q;
  r.d2 = (delta / (tau * tau)) * (-2.0 * u * q * q);
  r.d3 = (delta / (tau * tau * tau)) * (q * q * q * (6.0 * u * u - 2.0));
  r.phase = omega0 * t + delta * tau * (u * atan(u) - 0.5 * log(1.0 + u * u));
  return r;
}

/// Omega^2 = omega^2 + (1/2)(omega''/omega - (3/2)(omega'/omega)^2).
template <class R>
R counterdiabatic_omega2(const R& w, const R& w1, const R& w2) {
  const R a = w1 / w;
  return w * w + 0.5 * (w2 / w - 1.5 * a * a);
}

/// d(Omega^2)/dt expanded in closed form.
template <class R>
R counterdiabatic_omega2_rate(const R& w, const R& w1, const R& w2, const R& w3) {
  const R a = w1 / w;
  return 2.0 * w * w1 + 0.5 * (w3 / w - 4.0 * a * (w2 / w) + 3.0 * a * a * a);
}

struct ProtocolOptions {
  /// Tolerated edge derivative: |omega'(edge)| <= edge_tolerance*omega0/tau.
  double edge_tolerance = 1e-3;
  /// Reject windows whose edges violate edge_tolerance.
  bool enforce_edge = true;
  /// Accept schedules with negative Omega^2 somewhere on the window.
  bool allow_inverted = false;
  /// Slack below zero tolerated on min Omega^2, in units of omega0^2.
  double validity_tolerance = 1e-9;
};

struct ValidityReport {
  double min_omega2 = 0.0;
  double t_at_min = 0.0;
  /// omega0*tau >= sqrt(3/4)*delta/omega0 (arctan only; always true otherwise).
  bool analytic_bound_met = true;
  /// Parameters sit on the analytic bound (relative 1e-12).
  bool at_analytic_boundary = false;
  bool positive = true;  // min_omega2 >= -tolerance
};

class FrequencyProtocol {
 public:
  enum class Kind { ArctanFamily, Tabulated };

  /// Arctan schedule. Without an explicit window, [-c*tau, c*tau] with
  /// c = default_window_multiple(delta/omega0, edge_tolerance).
  static FrequencyProtocol arctan(double omega0, double delta, double tau,
                                  std::optional<Window> window = std::nullopt,
                                  const ProtocolOptions& options = {});

  /// Interpolated schedule through (t, omega) samples. Needs >= 8 samples.
  static FrequencyProtocol tabulated(std::vector<std::pair<double, double>> samples,
                                     std::optional<Window> window = std::nullopt,
                                     const ProtocolOptions& options = {});

  Kind kind() const { return kind_; }
  double omega0() const { return omega0_; }
  double delta() const { return delta_; }
  double tau() const { return tau_; }
  const Window& window() const { return window_; }
  const ProtocolOptions& options() const { return options_; }
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }
  const ValidityReport& validity() const { return validity_; }

  /// Natural time scale: tau for arctan, mean sample spacing otherwise.
  double time_scale() const;
  /// Arctan schedules are defined for every real t.
  bool unbounded() const { return kind_ == Kind::ArctanFamily; }

  /// Derivatives without the window check (used by perturbed evaluation and
  /// by tail expansions beyond the window).
  OmegaDerivatives evaluate(double t) const;
  /// Integral of omega from 0 (or from the first sample if 0 is outside the
  /// table) to t.
  double phase(double t) const;

  const QuinticSpline* spline() const { return spline_.get(); }

 private:
  FrequencyProtocol() = default;
  void check_edges() const;

  Kind kind_ = Kind::ArctanFamily;
  double omega0_ = 1.0;
  double delta_ = 0.0;
  double tau_ = 1.0;
  Window window_;
  ProtocolOptions options_;
  std::vector<std::pair<double, double>> samples_;
  std::shared_ptr<const QuinticSpline> spline_;
  ValidityReport validity_;
};

/// Smallest window multiple c >= 20 for which the arctan edges satisfy
/// |omega'| <= edge_tolerance*omega0/tau.
double default_window_multiple(double delta_over_omega0, double edge_tolerance);

OmegaDerivatives omega_derivatives(const FrequencyProtocol& p, double t);
/// Throws ValidityError at points where Omega^2 < 0 unless the protocol
/// allows inverted frequencies.
double counterdiabatic_frequency(const FrequencyProtocol& p, double t);
double counterdiabatic_rate(const FrequencyProtocol& p, double t);
/// Integral of omega from the phase origin to t (see FrequencyProtocol::phase).
double phase_integral(const FrequencyProtocol& p, double t);

/// Minimum of Omega^2 over the window (grid scan refined with Brent).
ValidityReport check_validity(const FrequencyProtocol& p);

}  // namespace sta
