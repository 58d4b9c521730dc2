#pragma once

// Mode functions f(t) of the oscillator, WKB modes, Bogoliubov
// coefficients and action-angle variables.

#include <complex>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "sta/dop853.hpp"
#include "sta/protocol.hpp"

namespace sta {

using Complex = std::complex<double>;

/// Initial values of (f, f') at the start of the window.
struct CauchyData {
  Complex f;
  Complex fdot;

  /// Instantaneous vacuum: f = 1/sqrt(2 w), f' = -i sqrt(w/2).
  static CauchyData vacuum(double omega);
  /// Adiabatic vacuum: the WKB mode of omega with zero phase,
  /// f' = (-i w - w'/(2w)) f.
  static CauchyData adiabatic(double omega, double omega_dot);
};

struct ModeOptions {
  double rtol = 1e-13;
  double atol = 1e-15;
  std::size_t output_points = 2001;
  /// Wronskian drift above this raises AccuracyError.
  double max_wronskian_drift = 1e-6;
};

class ModeFunction {
 public:
  std::vector<double> grid;
  std::vector<Complex> f;
  std::vector<Complex> fdot;
  double wronskian_drift = 0.0;
  Dop853Stats stats;

  double t_start() const { return grid.front(); }
  double t_end() const { return grid.back(); }
  /// (f, f') at any t in the window from the stored step interpolants.
  std::pair<Complex, Complex> at(double t) const;

  std::vector<Dop853Dense<4>> steps;
};

/// W = i(f* f' - f f'*).
inline double wronskian(Complex f, Complex fdot) {
  return (Complex(0.0, 1.0) * (std::conj(f) * fdot - f * std::conj(fdot))).real();
}

/// Solves f'' + Omega^2(t) f = 0 on the window.
ModeFunction solve_mode(const std::function<double(double)>& omega2, const Window& window,
                        const CauchyData& initial, const ModeOptions& options = {});

enum class ModeDrive { Counterdiabatic, Plain };

/// Omega^2(t) (counterdiabatic) or omega(t)^2 (plain) for the protocol.
std::function<double(double)> drive_frequency(const FrequencyProtocol& p, ModeDrive drive);

/// Convenience: drive the protocol's own window from the instantaneous vacuum.
ModeFunction solve_mode(const FrequencyProtocol& p, ModeDrive drive, const ModeOptions& options = {});

/// f = exp(-i S)/sqrt(2 w) with S the phase accumulated since the window
/// start, and its exact time derivative.
std::pair<Complex, Complex> wkb_mode(const FrequencyProtocol& p, double t);

enum class ReferenceVacuum { Instantaneous, Adiabatic };

struct BogoliubovCoefficients {
  Complex alpha;
  Complex beta;
  /// |w'(t_end)|/w^2 exceeded the edge tolerance: the final vacuum is ambiguous.
  bool reference_ambiguous = false;

  double normalization() const { return std::norm(alpha) - std::norm(beta); }
};

/// Projects the mode at t_end onto the reference modes g e^{-i w t} and
/// its conjugate. The adiabatic reference includes the -w'/(2w) amplitude
/// drift of the WKB mode.
BogoliubovCoefficients bogoliubov(const ModeFunction& mode, double reference_omega,
                                  double reference_omega_dot = 0.0,
                                  ReferenceVacuum reference = ReferenceVacuum::Instantaneous,
                                  double edge_tolerance = 1e-3);
BogoliubovCoefficients bogoliubov(Complex f, Complex fdot, double reference_omega, double reference_omega_dot,
                                  ReferenceVacuum reference, double edge_tolerance = 1e-3);

/// (2n+1)|beta|^2.
double particle_number(const BogoliubovCoefficients& b, int n_initial);

struct ActionAngle {
  double J = 0.0;    // action
  double phi = 0.0;  // angle
  bool degenerate = false;
};

/// Inverts X = sqrt(J/m)(f e^{-i phi} + cc), P = sqrt(mJ)(f' e^{-i phi} + cc).
/// J carries units of action; J/hbar is the value used by the Wigner module.
ActionAngle action_angle(double X, double P, Complex f, Complex fdot, const SystemSpec& system);
ActionAngle action_angle(double X, double P, const ModeFunction& mode, double t, const SystemSpec& system);
/// Phase-space point for given (J, phi).
std::pair<double, double> phase_space_point(const ActionAngle& aa, Complex f, Complex fdot,
                                            const SystemSpec& system);

/// CSV: t, re_f, im_f, re_fdot, im_fdot, wronskian_error.
void write_mode_csv(std::ostream& out, const ModeFunction& mode);

}  // namespace sta
