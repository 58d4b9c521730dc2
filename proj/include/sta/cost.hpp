#pragma once

// Cost of the shortcut: noise and dissipation kernels of the driving,
// the coefficients nu and mu, transition weights and injected energy.

#include "sta/drive.hpp"
#include "sta/oscillatory.hpp"
#include "sta/protocol.hpp"

namespace sta {

/// N(t, t') = <theta0^2> + <P0^2> t t' / M^2.
double noise_kernel(const DrivingSpec& drive, double t, double tp);
/// D(t, t') = (t - t')/(2M) for t > t', zero otherwise.
double dissipation_kernel(const DrivingSpec& drive, double t, double tp);

struct CostOptions {
  QuadratureOptions quadrature;
  /// Largest tolerated (error + truncation) of I0 and I1 relative to |I1|.
  double rel_accuracy = 1e-8;
};

struct NuMu {
  double nu = 0.0;
  double mu = 0.0;
  double mu_imag = 0.0;  // imaginary residue of the mu formula, kept for checks
  OscillatoryResult I0;
  OscillatoryResult I1;
};

/// nu = 2<theta0^2>|I0|^2 + 2<P0^2>|I1|^2/M^2, mu = (i hbar/8M)(I1 I0* - I0 I1*).
NuMu nu_mu(const FrequencyProtocol& p, const DrivingSpec& drive, const SystemSpec& system = {},
           const CostOptions& options = {});
NuMu nu_mu_from_integrals(const OscillatoryResult& I0, const OscillatoryResult& I1, const DrivingSpec& drive,
                          const SystemSpec& system);

struct TransitionProbabilities {
  double p_down = 0.0;  // weight on n-2
  double p_up = 0.0;    // weight on n+2
  bool perturbative_ok = true;  // p_up + p_down <= 0.1
  bool negative = false;        // a weight came out negative
};

TransitionProbabilities transition_probabilities(double nu, double mu, int n);

/// 2 nu (2n+1) - mu (n^2+n+1).
double delta_n(double nu, double mu, int n);
/// Delta n >= 1 breaks adiabaticity.
inline bool adiabaticity_violated(double dn) { return dn >= 1.0; }

/// Delta n * hbar * omega(t_end).
double extra_work(double dn, const FrequencyProtocol& p, const SystemSpec& system);

enum class NuEstimateMode { FCurve, ClosedForm };

/// Order-of-magnitude nu from an energy-time uncertainty estimate of the
/// driving's momentum spread (<P^2>/2M = hbar/tau).
double nu_estimate(const FrequencyProtocol& p, const DrivingSpec& drive, NuEstimateMode mode,
                   const SystemSpec& system = {});

struct CostReport {
  double nu = 0.0;
  double mu = 0.0;
  double delta_n = 0.0;
  double delta_W = 0.0;
  double p_down = 0.0;
  double p_up = 0.0;
  bool perturbative_ok = true;
  bool negative_probability = false;
  bool adiabaticity_violated = false;
  int n = 0;
  OscillatoryResult I0;
  OscillatoryResult I1;
};

CostReport compute_cost(const FrequencyProtocol& p, const DrivingSpec& drive, const SystemSpec& system, int n,
                        const CostOptions& options = {});

}  // namespace sta
