#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sta/oscillatory.hpp"

using namespace sta;

namespace {

DrivingSpec rate(double theta_dot) {
  DrivingSpec d;
  d.theta_dot = theta_dot;
  return d;
}

}  // namespace

TEST_CASE("I0 vanishes for a constant driving rate") {
  for (double tau : {0.8, 1.5, 3.0}) {
    const auto p = FrequencyProtocol::arctan(1.0, 0.5, tau);
    const auto I0 = integral_I0(p, rate(1.0));
    const auto I1 = integral_I1(p, rate(1.0), I1Form::Reduced);
    CHECK(std::abs(I0.value) <= I0.abs_error_estimate + I0.truncation_bound);
    CHECK(std::abs(I0.value) < 1e-12 * std::abs(I1.value));
  }
}

TEST_CASE("defining and reduced forms of I1 agree") {
  for (double x : {0.6, 1.0, 2.0})
    for (double y : {0.1, 0.3, 0.5}) {
      const auto p = FrequencyProtocol::arctan(1.0, y, x);
      const auto a = integral_I1(p, rate(1.3), I1Form::Defining);
      const auto b = integral_I1(p, rate(1.3), I1Form::Reduced);
      CHECK(std::abs(a.value - b.value) < 1e-10 * std::abs(b.value));
    }
}

TEST_CASE("|I1| equals (delta/(theta_dot omega0)) F[omega0 tau, delta/omega0]") {
  const double omega0 = 2.0, delta = 0.8, tau = 0.6, theta_dot = 0.7;
  const auto p = FrequencyProtocol::arctan(omega0, delta, tau);
  const auto I1 = integral_I1(p, rate(theta_dot), I1Form::Reduced);
  const double F = f_curve(omega0 * tau, delta / omega0).value;
  CHECK(std::abs(I1.value) == doctest::Approx(delta / (theta_dot * omega0) * F).epsilon(1e-11));
}

TEST_CASE("decreasing delta uses |delta| in F") {
  const auto p = FrequencyProtocol::arctan(1.0, -0.4, 1.2);
  const auto I1 = integral_I1(p, rate(1.0), I1Form::Reduced);
  CHECK(std::abs(I1.value) == doctest::Approx(0.4 * f_curve(1.2, 0.4).value).epsilon(1e-11));
}

TEST_CASE("the tail bound is honest") {
  for (double x : {0.1, 1.0, 4.0}) {
    QuadratureOptions near, far;
    near.tail_start = 10.0;
    far.tail_start = 20.0;
    const auto a = f_curve_integral(x, 0.5, near);
    const auto b = f_curve_integral(x, 0.5, far);
    CHECK(std::abs(a.value - b.value) <=
          a.truncation_bound + b.truncation_bound + a.abs_error_estimate + b.abs_error_estimate);
  }
}

TEST_CASE("window-restricted integrals differ from the full line by at most the reported tails") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  QuadratureOptions w;
  w.domain = IntegralDomain::Window;
  const auto full = integral_I1(p, rate(1.0), I1Form::Defining);
  const auto cut = integral_I1(p, rate(1.0), I1Form::Defining, w);
  CHECK(std::abs(full.value - cut.value) <= cut.truncation_bound + cut.abs_error_estimate + full.abs_error_estimate);
  CHECK(cut.truncation_bound > 0.0);
}

TEST_CASE("tabulated schedule reproduces the arctan integral on the window") {
  const auto ref = FrequencyProtocol::arctan(1.0, 0.3, 1.0, Window{-40.0, 40.0});
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 1600; ++i) {
    const double t = -40.0 + 0.05 * i;
    s.emplace_back(t, arctan_terms(1.0, 0.3, 1.0, t).omega);
  }
  const auto tab = FrequencyProtocol::tabulated(s);
  QuadratureOptions w;
  w.domain = IntegralDomain::Window;
  w.rel_tol = 1e-10;
  const auto a = integral_I1(ref, rate(1.0), I1Form::Reduced, w);
  const auto b = integral_I1(tab, rate(1.0), I1Form::Reduced, w);
  CHECK(std::abs(a.value - b.value) < 1e-5 * std::abs(a.value));
}

TEST_CASE("small-x behaviour is 1/x") {
  const double f1 = f_curve(1e-3, 0.5).value, f2 = f_curve(1e-2, 0.5).value;
  const double slope = std::log(f2 / f1) / std::log(10.0);
  CHECK(slope == doctest::Approx(-1.0).epsilon(0.01));
}

TEST_CASE("weak ramp approaches the y = 0 law") {
  const double r = f_curve(3.0, 0.05).value / (std::numbers::pi * std::exp(-6.0));
  CHECK(r * r == doctest::Approx(1.00568).epsilon(1e-4));
}

TEST_CASE("errors") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  CHECK_THROWS_AS(integral_I0(p, rate(0.0)), ConfigError);
  DrivingSpec profile;
  profile.theta_dot_profile = {1.0, 2.0};
  CHECK_THROWS_AS(integral_I1(p, profile, I1Form::Reduced), UnsupportedError);
  CHECK_THROWS_AS(f_curve(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(f_curve(1.0, 0.7), DomainError);
  CHECK_THROWS_AS(f_curve(1.0, 0.5, 1e-30), AccuracyError);
  const auto flat = FrequencyProtocol::arctan(1.0, 0.0, 1.0);
  CHECK(integral_I1(flat, rate(1.0), I1Form::Reduced).value == std::complex<double>(0.0));
}
