#include <doctest.h>

#include <cmath>
#include <cstring>

#include "sta/oracle.hpp"

using namespace sta;

namespace {

DrivingSpec drive(double var_theta0, double var_P0) {
  DrivingSpec d;
  d.var_theta0 = var_theta0;
  d.var_P0 = var_P0;
  return d;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("zero variances draw zeros") {
  auto rng = sample_engine(7, 3);
  for (int i = 0; i < 10; ++i) {
    const auto [a, b] = sample_fluctuation(rng, drive(0.0, 0.0));
    CHECK(a == 0.0);
    CHECK(b == 0.0);
  }
}

TEST_CASE("sampler moments") {
  const long N = 100000;
  double sum = 0.0, sq = 0.0;
  for (long k = 0; k < N; ++k) {
    auto rng = sample_engine(11, static_cast<std::uint64_t>(k));
    const auto [a, b] = sample_fluctuation(rng, drive(0.5, 2.0));
    sum += a;
    sq += b * b;
  }
  CHECK(std::abs(sum / N) < 4.0 * std::sqrt(0.5 / N));
  CHECK(sq / N == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("sample streams depend only on (seed, k)") {
  auto a = sample_engine(5, 9), b = sample_engine(5, 9), c = sample_engine(5, 10), d = sample_engine(6, 9);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}

TEST_CASE("perturbed frequency") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  DrivingSpec d = drive(1.0, 1.0);
  d.M = 2.0;
  d.theta_dot = 0.5;
  for (double t : {-3.0, 0.2, 4.0}) {
    CHECK(perturbed_frequency(p, d, 0.0, 0.0, t) == counterdiabatic_frequency(p, t));
    // momentum alone grows linearly in t
    const double shift = perturbed_frequency(p, d, 0.0, 0.3, t) - counterdiabatic_frequency(p, t);
    CHECK(shift == doctest::Approx(counterdiabatic_rate(p, t) / d.theta_dot * 0.3 * t / d.M).epsilon(1e-12).scale(1e-15));
  }
  // linearized and exact differ at second order
  auto gap = [&](double th) {
    return std::abs(perturbed_frequency(p, d, th, 0.0, 0.3, Perturbation::Exact) -
                    perturbed_frequency(p, d, th, 0.0, 0.3, Perturbation::Linear));
  };
  CHECK(gap(1e-3) / gap(1e-4) == doctest::Approx(100.0).epsilon(0.01));
}

TEST_CASE("pairwise sum") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + i);
  double s = 0.0;
  for (double x : v) s += x;
  CHECK(pairwise_sum(v.data(), v.size()) == doctest::Approx(s).epsilon(1e-14));
  CHECK(pairwise_sum(v.data(), 0) == 0.0);
}

TEST_CASE("zero variances give no excitation") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  const auto r = run_oracle(p, drive(0.0, 0.0), {5, 1, 2});
  CHECK(r.delta_n_mc == 0.0);
  REQUIRE(r.std_error);
  CHECK(*r.std_error == 0.0);
}

TEST_CASE("single sample has no standard error") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  const auto r = run_oracle(p, linear_regime_drive(p, drive(1.0, 1.0)), {1, 3, 0});
  CHECK_FALSE(r.std_error.has_value());
}

TEST_CASE("each sample follows first-order theory in the linear regime") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  const DrivingSpec d = linear_regime_drive(p, drive(1.0, 0.5), 1e-4);
  CHECK(relative_perturbation(p, d) == doctest::Approx(1e-4).epsilon(1e-9));
  const auto r = run_oracle(p, d, {50, 4, 0});
  CHECK(r.rejected == 0);
  CHECK(r.max_linear_rel_error < 0.01);
  CHECK(r.calibration_constant == doctest::Approx(1.0).epsilon(0.01));
  CHECK(r.std_error.value() > 0.0);
}

TEST_CASE("report is bit-identical for any thread count") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.2);
  const DrivingSpec d = linear_regime_drive(p, drive(1.0, 1.0));
  OracleOptions one, many;
  many.threads = 3;
  const auto a = run_oracle(p, d, {40, 99, 1}, one);
  const auto b = run_oracle(p, d, {40, 99, 1}, many);
  CHECK(same_bits(a.mean_beta_sq, b.mean_beta_sq));
  CHECK(same_bits(*a.std_error, *b.std_error));
  CHECK(same_bits(a.calibration_constant, b.calibration_constant));
}

TEST_CASE("negative frequencies are counted and flagged") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 0.5);
  const auto r = run_oracle(p, drive(25.0, 0.0), {40, 2, 0});
  CHECK(r.rejected > 0);
  CHECK(r.rejection_warning);
}

TEST_CASE("sample spec validation") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  CHECK_THROWS_AS(run_oracle(p, drive(0.0, 0.0), {0, 1, 0}), ConfigError);
  CHECK_THROWS_AS(run_oracle(p, drive(0.0, 0.0), {1, 1, -1}), ConfigError);
}
