#pragma once

#include <vector>

#include "sta/errors.hpp"

namespace sta {

/// Classical driving parameters and the initial Gaussian fluctuations of
/// the driving's angle and momentum.
struct DrivingSpec {
  double M = 1.0;          // effective mass 1/H_D''
  double theta_dot = 1.0;  // angular velocity H_D'
  double var_theta0 = 0.0;
  double var_P0 = 0.0;
  double cross_correlation = 0.0;  // must be zero
  double H_D = 1.0;                // only used by nu_estimate
  /// Non-empty when a time-dependent angular velocity was requested; every
  /// integral path rejects it.
  std::vector<double> theta_dot_profile;

  void validate() const;
  void require_constant_rate() const {
    if (!theta_dot_profile.empty())
      throw UnsupportedError("drive.theta_dot: only a constant angular velocity is supported");
  }
};

}  // namespace sta
