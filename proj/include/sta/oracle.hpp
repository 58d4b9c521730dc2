#pragma once

// Monte Carlo check of the perturbative cost: the driving's initial
// fluctuations become c-number Gaussian draws, each sample is propagated
// exactly and its excitation compared with the first-order prediction.

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "sta/drive.hpp"
#include "sta/modes.hpp"
#include "sta/oscillatory.hpp"
#include "sta/protocol.hpp"

namespace sta {

struct SampleSpec {
  long n_samples = 1000;
  std::uint64_t seed = 0;
  int n_initial = 0;
};

enum class Perturbation {
  Linear,  // Omega^2(t) + (Omega^2)'(t) theta(t)
  Exact,   // Omega^2 evaluated at the shifted angle
};

struct OracleOptions {
  Perturbation perturbation = Perturbation::Linear;
  int threads = 1;
  bool keep_samples = false;
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  /// Fraction of rejected samples above which the report carries a warning.
  double rejection_warning = 0.01;
};

struct SampleRecord {
  long k = 0;
  double theta0 = 0.0;
  double P0 = 0.0;
  double beta_sq = 0.0;
  double beta_lin_sq = 0.0;
  bool rejected = false;
};

struct OracleReport {
  std::uint64_t seed = 0;
  long n_samples = 0;
  int n_initial = 0;
  long rejected = 0;
  bool rejection_warning = false;
  double mean_beta_sq = 0.0;
  std::optional<double> std_error;  // undefined for a single sample
  double delta_n_mc = 0.0;
  double nu = 0.0;
  double nu_prediction = 0.0;  // delta_n(nu, 0, n)
  double ratio = 0.0;          // delta_n_mc / nu_prediction
  double calibration_constant = 0.0;  // sum |beta|^2 / sum |beta_lin|^2
  double max_linear_rel_error = 0.0;  // worst per-sample ||beta|^2 - |beta_lin|^2| over the mean |beta_lin|^2
  std::complex<double> I0;
  std::complex<double> I1;
  std::vector<SampleRecord> samples;
};

/// Counter-based stream for sample k: independent of evaluation order.
std::mt19937_64 sample_engine(std::uint64_t seed, std::uint64_t k);

/// Zero-mean Gaussian (theta0, P0) with the drive's variances.
std::pair<double, double> sample_fluctuation(std::mt19937_64& rng, const DrivingSpec& drive);

/// Omega^2 seen by the system when the driving angle carries the
/// fluctuation theta(t) = theta0 + P0 t / M.
double perturbed_frequency(const FrequencyProtocol& p, const DrivingSpec& drive, double theta0, double P0,
                           double t, Perturbation mode = Perturbation::Linear);

/// Largest |delta Omega^2|/Omega^2 over the window for one-sigma fluctuations.
double relative_perturbation(const FrequencyProtocol& p, const DrivingSpec& drive);
/// Rescales both variances so that relative_perturbation equals target.
DrivingSpec linear_regime_drive(const FrequencyProtocol& p, const DrivingSpec& drive, double target = 1e-3);

OracleReport run_oracle(const FrequencyProtocol& p, const DrivingSpec& drive, const SampleSpec& spec,
                        const OracleOptions& options = {});

/// Sum in a fixed pairwise order, independent of how values were produced.
double pairwise_sum(const double* v, std::size_t n);

}  // namespace sta
