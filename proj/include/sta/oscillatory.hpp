#pragma once

// Oscillatory integrals over the protocol: I0, I1 (defining and reduced
// forms) and the dimensionless shape integral F[x, y].

#include <complex>
#include <optional>

#include "sta/drive.hpp"
#include "sta/protocol.hpp"

namespace sta {

struct OscillatoryResult {
  std::complex<double> value;
  double abs_error_estimate = 0.0;
  /// Bound on what lies outside the integrated range: the neglected
  /// remainder of the tail expansion on the natural domain, or the
  /// magnitude of the omitted tails when restricted to the window.
  double truncation_bound = 0.0;
  long panels = 0;
};

enum class IntegralDomain {
  Natural,  // whole real line for arctan schedules, sample range otherwise
  Window,   // the protocol window only
};

enum class I1Form { Defining, Reduced };

struct QuadratureOptions {
  double rel_tol = 1e-13;  // per panel, relative to the panel's L1 mass
  double abs_tol = 0.0;    // spread over the integration length
  IntegralDomain domain = IntegralDomain::Natural;
  /// Start of the analytic tails in units of the natural scale (tau for
  /// the time integrals, 1 for F). Chosen automatically when empty.
  std::optional<double> tail_start;
  long max_panels = 4'000'000;
};

/// I0 = int dt (Omega^2)'(t) f^2(t), derivative taken in the driving angle.
OscillatoryResult integral_I0(const FrequencyProtocol& p, const DrivingSpec& drive,
                              const QuadratureOptions& options = {});
/// I1 = int dt t (Omega^2)'(t) f^2(t), or its integrated-by-parts form.
OscillatoryResult integral_I1(const FrequencyProtocol& p, const DrivingSpec& drive, I1Form form,
                              const QuadratureOptions& options = {});

/// Complex value of the integral whose modulus is F[x, y].
OscillatoryResult f_curve_integral(double x, double y, const QuadratureOptions& options = {});

struct FCurveValue {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  double truncation_bound = 0.0;
};

/// F[x, y] = |int ds G(s) exp(-2 i x phi(s))| over the real line. Throws
/// AccuracyError when the combined error exceeds abs_tol.
FCurveValue f_curve(double x, double y, double abs_tol = 1e-9, const QuadratureOptions& options = {});

}  // namespace sta
