#pragma once

// Wigner functions of oscillator eigenstates as functions of the action,
// f_n(J) = 2(-1)^n e^{-s/2} L_n(s) with s = 4J/hbar.

#include <array>
#include <vector>

namespace sta {

inline constexpr int kMaxLaguerreDegree = 200;

/// L_n(s) by upward three-term recursion. Degrees above 200 are rejected.
double laguerre(int n, double s);

/// f_n and its first three derivatives with respect to s.
std::array<double, 4> wigner_s_derivatives(int n, double s);

class WignerEigenstate {
 public:
  WignerEigenstate(int n, double hbar = 1.0);

  int n() const { return n_; }
  double hbar() const { return hbar_; }

  double operator()(double J) const;
  /// F, dF/dJ, d2F/dJ2, d3F/dJ3.
  std::array<double, 4> derivatives(double J) const;

 private:
  int n_;
  double hbar_;
};

struct RecursionResiduals {
  double value_identity = 0.0;       // J F_n expansion
  double derivative_identity = 0.0;  // J F_n' expansion
  double second_identity = 0.0;      // (hbar J/4) F_n'' expansion
  double ode = 0.0;                  // eigenvalue ODE, relative to max |F_n|

  double max_recursion() const;
};

/// Evaluates the three recurrence identities and the eigenvalue ODE on
/// the grid. Derivatives come from the Laguerre derivative recursion
/// L_n' = (n/s)(L_n - L_{n-1}).
RecursionResiduals verify_recursions(int n, const std::vector<double>& J_grid, double hbar = 1.0);

struct Decomposition {
  int n = 0;
  double c_down = 0.0;  // coefficient on F_{n-2} (zero when n < 2)
  double c_same = 0.0;  // coefficient on F_n
  double c_up = 0.0;    // coefficient on F_{n+2}
  double residual = 0.0;       // off-basis norm / norm of the correction
  double correction_norm = 0.0;
};

/// Applies nu J[F' + (J F')'] + (mu J/hbar)[F + (J F)' + (hbar^2/4)(F'' + (J F'')')]
/// to F_n on Gauss nodes over s in (0, 4(n+6)+40] and least-squares
/// projects onto {F_{n-2}, F_n, F_{n+2}} with the inner product int ds.
/// Throws Error when the off-basis residual exceeds 1e-6.
Decomposition final_state_decomposition(int n, double nu, double mu, double hbar = 1.0);

}  // namespace sta
