#include "sta/cost.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace sta {

void DrivingSpec::validate() const {
  if (!(M > 0.0) || !std::isfinite(M)) throw ConfigError("drive.M must be finite and > 0");
  if (!std::isfinite(theta_dot) || theta_dot == 0.0) throw ConfigError("drive.theta_dot must be finite and nonzero");
  if (!(var_theta0 >= 0.0) || !std::isfinite(var_theta0)) throw ConfigError("drive.var_theta0 must be >= 0");
  if (!(var_P0 >= 0.0) || !std::isfinite(var_P0)) throw ConfigError("drive.var_P0 must be >= 0");
  if (cross_correlation != 0.0) throw UnsupportedError("drive.cross_correlation must be 0");
  if (!std::isfinite(H_D)) throw ConfigError("drive.H_D must be finite");
}

double noise_kernel(const DrivingSpec& d, double t, double tp) {
  return d.var_theta0 + d.var_P0 * t * tp / (d.M * d.M);
}

double dissipation_kernel(const DrivingSpec& d, double t, double tp) {
  return t > tp ? (t - tp) / (2.0 * d.M) : 0.0;
}

NuMu nu_mu_from_integrals(const OscillatoryResult& I0, const OscillatoryResult& I1, const DrivingSpec& drive,
                          const SystemSpec& system) {
  NuMu r;
  r.I0 = I0;
  r.I1 = I1;
  r.nu = 2.0 * drive.var_theta0 * std::norm(I0.value) +
         2.0 * drive.var_P0 * std::norm(I1.value) / (drive.M * drive.M);
  const std::complex<double> m = std::complex<double>(0.0, system.hbar / (8.0 * drive.M)) *
                                 (I1.value * std::conj(I0.value) - I0.value * std::conj(I1.value));
  r.mu = m.real();
  r.mu_imag = m.imag();
  return r;
}

NuMu nu_mu(const FrequencyProtocol& p, const DrivingSpec& drive, const SystemSpec& system, const CostOptions& o) {
  drive.validate();
  system.validate();
  const OscillatoryResult I0 = integral_I0(p, drive, o.quadrature);
  const OscillatoryResult I1 = integral_I1(p, drive, I1Form::Reduced, o.quadrature);
  const double scale = std::max(std::abs(I1.value), std::abs(I0.value));
  const auto check = [&](const OscillatoryResult& r, const char* name) {
    const double e = r.abs_error_estimate + (o.quadrature.domain == IntegralDomain::Natural ? r.truncation_bound : 0.0);
    if (scale > 0.0 && e > o.rel_accuracy * scale)
      throw AccuracyError(std::string(name) + ": quadrature error above budget", std::abs(r.value), e);
  };
  check(I0, "I0");
  check(I1, "I1");
  return nu_mu_from_integrals(I0, I1, drive, system);
}

TransitionProbabilities transition_probabilities(double nu, double mu, int n) {
  if (n < 0) throw ConfigError("n must be >= 0");
  const double nn = n;
  TransitionProbabilities t;
  t.p_down = 0.5 * (nu + 0.5 * mu) * nn * (nn - 1.0);
  t.p_up = 0.5 * (nu - 0.5 * mu) * (nn + 1.0) * (nn + 2.0);
  t.negative = t.p_down < 0.0 || t.p_up < 0.0;
  t.perturbative_ok = t.p_up + t.p_down <= 0.1;
  return t;
}

double delta_n(double nu, double mu, int n) {
  if (n < 0) throw ConfigError("n must be >= 0");
  const double nn = n;
  return 2.0 * nu * (2.0 * nn + 1.0) - mu * (nn * nn + nn + 1.0);
}

double extra_work(double dn, const FrequencyProtocol& p, const SystemSpec& system) {
  return dn * system.hbar * omega_derivatives(p, p.window().t_end).omega;
}

double nu_estimate(const FrequencyProtocol& p, const DrivingSpec& drive, NuEstimateMode mode,
                   const SystemSpec& system) {
  if (p.kind() != FrequencyProtocol::Kind::ArctanFamily)
    throw UnsupportedError("nu_estimate needs an arctan protocol");
  if (!(drive.H_D > 0.0)) throw ConfigError("drive.H_D must be > 0 for nu_estimate");
  const double x = p.omega0() * p.tau();
  const double y = p.delta() / p.omega0();
  if (y == 0.0) return 0.0;
  const double uncertainty = system.hbar / (drive.H_D * p.tau());
  if (mode == NuEstimateMode::ClosedForm)
    return 2.0 * std::numbers::pi * std::numbers::pi * y * y * uncertainty * std::exp(-4.0 * x);
  const double F = f_curve(x, std::abs(y), 1e-6 * std::exp(-2.0 * x)).value;
  return 2.0 * F * F * y * y * uncertainty;
}

CostReport compute_cost(const FrequencyProtocol& p, const DrivingSpec& drive, const SystemSpec& system, int n,
                        const CostOptions& o) {
  const NuMu nm = nu_mu(p, drive, system, o);
  CostReport r;
  r.n = n;
  r.nu = nm.nu;
  r.mu = nm.mu;
  r.I0 = nm.I0;
  r.I1 = nm.I1;
  const TransitionProbabilities tp = transition_probabilities(r.nu, r.mu, n);
  r.p_down = tp.p_down;
  r.p_up = tp.p_up;
  r.perturbative_ok = tp.perturbative_ok;
  r.negative_probability = tp.negative;
  r.delta_n = delta_n(r.nu, r.mu, n);
  r.adiabaticity_violated = adiabaticity_violated(r.delta_n);
  r.delta_W = extra_work(r.delta_n, p, system);
  return r;
}

}  // namespace sta
