#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "sta/protocol.hpp"

using namespace sta;

namespace {

ProtocolOptions inverted_ok() {
  ProtocolOptions o;
  o.allow_inverted = true;
  return o;
}

}  // namespace

TEST_CASE("delta = 0 gives a constant frequency") {
  const auto p = FrequencyProtocol::arctan(1.3, 0.0, 2.0);
  for (double t : {-30.0, -1.0, 0.0, 0.5, 17.0}) {
    CHECK(counterdiabatic_frequency(p, t) == doctest::Approx(1.69).epsilon(1e-15));
    CHECK(counterdiabatic_rate(p, t) == 0.0);
  }
}

TEST_CASE("closed-form derivatives match Taylor jets") {
  const double omega0 = 1.0, delta = 0.4, tau = 1.7;
  for (double t : {-3.0, -0.4, 0.0, 0.9, 5.0}) {
    const auto jet = arctan_terms(omega0, delta, tau, Taylor<4>::variable(t));
    const auto d = arctan_terms(omega0, delta, tau, t);
    CHECK(d.d1 == doctest::Approx(jet.omega.derivative(1)).epsilon(1e-13));
    CHECK(d.d2 == doctest::Approx(jet.omega.derivative(2)).epsilon(1e-12));
    CHECK(d.d3 == doctest::Approx(jet.omega.derivative(3)).epsilon(1e-12));
    CHECK(d.omega == doctest::Approx(jet.phase.derivative(1)).epsilon(1e-14));
    const auto w2 = counterdiabatic_omega2(jet.omega, jet.d1, jet.d2);
    CHECK(counterdiabatic_omega2_rate(d.omega, d.d1, d.d2, d.d3) == doctest::Approx(w2.derivative(1)).epsilon(1e-12));
  }
}

TEST_CASE("phase integral agrees with quadrature of omega") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  for (double t : {-10.0, -1.0, 2.0, 15.0}) {
    const double q = GK::integrate([&](double s) { return omega_derivatives(p, s).omega; }, 0.0, t, 12, 1e-14);
    CHECK(phase_integral(p, t) == doctest::Approx(q).epsilon(1e-13));
  }
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(FrequencyProtocol::arctan(0.0, 0.1, 1.0), ConfigError);
  CHECK_THROWS_AS(FrequencyProtocol::arctan(1.0, 0.1, -1.0), ConfigError);
  CHECK_THROWS_AS(FrequencyProtocol::arctan(1.0, 0.7, 5.0), ConfigError);  // |delta| > 2/pi omega0
  CHECK_THROWS_AS(FrequencyProtocol::arctan(1.0, 0.5, 1.0, Window{-3.0, 3.0}), ConfigError);  // edges too steep
  CHECK_THROWS_AS(FrequencyProtocol::arctan(1.0, 0.5, 1.0, Window{2.0, 1.0}), ConfigError);
}

TEST_CASE("out-of-window evaluation is a domain error") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  CHECK_THROWS_AS(omega_derivatives(p, p.window().t_end + 1.0), DomainError);
  CHECK_THROWS_AS(counterdiabatic_frequency(p, p.window().t_start - 1.0), DomainError);
}

TEST_CASE("default window meets the edge rule") {
  for (double y : {0.1, 0.5, 0.6}) {
    const double c = default_window_multiple(y, 1e-3);
    CHECK(c >= 20.0);
    CHECK(y / (1.0 + c * c) <= 1e-3);
    const auto p = FrequencyProtocol::arctan(1.0, y, 1.0);
    CHECK(p.window().t_end == doctest::Approx(c));
  }
  CHECK(default_window_multiple(0.5, 1e-3) == 23.0);
}

TEST_CASE("validity: analytic bound") {
  // omega0 tau >= sqrt(3/4) delta/omega0
  CHECK_THROWS_AS(FrequencyProtocol::arctan(1.0, 0.5, 0.3), ValidityError);
  const auto ok = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  CHECK(ok.validity().positive);
  CHECK(ok.validity().analytic_bound_met);
  CHECK(ok.validity().min_omega2 > 0.0);
  const auto bad = FrequencyProtocol::arctan(1.0, 0.5, 0.3, std::nullopt, inverted_ok());
  CHECK_FALSE(bad.validity().positive);
  CHECK_FALSE(bad.validity().analytic_bound_met);
  CHECK_THROWS_AS(counterdiabatic_frequency(FrequencyProtocol::arctan(1.0, 0.5, 0.3, std::nullopt, ProtocolOptions{}), 0.0),
                  ValidityError);
}

// At omega0 tau = sqrt(3/4) delta/omega0 the counterdiabatic frequency still
// dips below zero just after t = 0, so the bound is necessary but not sufficient.
TEST_CASE("boundary parameters keep Omega^2 non-negative" * doctest::should_fail()) {
  const double y = 0.5;
  const double x = std::sqrt(0.75) * y;
  const auto p = FrequencyProtocol::arctan(1.0, y, x, std::nullopt, inverted_ok());
  CHECK(p.validity().at_analytic_boundary);
  CHECK(p.validity().min_omega2 >= -1e-9);
}

TEST_CASE("boundary dip and the sufficient threshold") {
  const double y = 0.5;
  const auto at_bound = FrequencyProtocol::arctan(1.0, y, std::sqrt(0.75) * y, std::nullopt, inverted_ok());
  CHECK(at_bound.validity().min_omega2 == doctest::Approx(-0.0364).epsilon(0.02));
  CHECK(at_bound.validity().t_at_min / at_bound.tau() == doctest::Approx(0.107).epsilon(0.05));
  // smallest omega0 tau with Omega^2 >= 0 everywhere is about 0.44008 for y = 1/2
  CHECK(FrequencyProtocol::arctan(1.0, y, 0.4402).validity().positive);
  CHECK_THROWS_AS(FrequencyProtocol::arctan(1.0, y, 0.4399), ValidityError);
}

TEST_CASE("tabulated protocol") {
  std::vector<std::pair<double, double>> few;
  for (int i = 0; i < 7; ++i) few.emplace_back(i, 1.0);
  CHECK_THROWS_AS(FrequencyProtocol::tabulated(few), ConfigError);

  const auto ref = FrequencyProtocol::arctan(1.0, 0.3, 1.0);
  std::vector<std::pair<double, double>> s;
  for (int i = 0; i <= 800; ++i) {
    const double t = -40.0 + 0.1 * i;
    s.emplace_back(t, arctan_terms(1.0, 0.3, 1.0, t).omega);
  }
  const auto p = FrequencyProtocol::tabulated(s);
  for (const auto& [t, w] : s) CHECK(omega_derivatives(p, t).omega == doctest::Approx(w).epsilon(1e-14));
  for (double t : {-2.05, 0.0, 0.33, 1.77}) {
    const auto a = omega_derivatives(p, t), b = ref.evaluate(t);
    CHECK(a.d1 == doctest::Approx(b.d1).epsilon(1e-6));
    CHECK(a.d2 == doctest::Approx(b.d2).epsilon(1e-4));
    CHECK(phase_integral(p, t) - phase_integral(p, 0.0) ==
          doctest::Approx(phase_integral(ref, t)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(omega_derivatives(p, 41.0), DomainError);
}
