#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sta/dop853.hpp"
#include "sta/modes.hpp"

using namespace sta;

TEST_CASE("vacuum data is Wronskian-normalized") {
  for (double w : {0.3, 1.0, 7.0}) {
    const auto v = CauchyData::vacuum(w);
    CHECK(wronskian(v.f, v.fdot) == doctest::Approx(1.0).epsilon(1e-15));
    const auto a = CauchyData::adiabatic(w, 0.2);
    CHECK(wronskian(a.f, a.fdot) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(CauchyData::vacuum(0.0), DomainError);
}

TEST_CASE("constant frequency stays in the vacuum") {
  const auto p = FrequencyProtocol::arctan(1.5, 0.0, 1.0, Window{0.0, 40.0});
  const auto m = solve_mode(p, ModeDrive::Plain);
  for (std::size_t i = 0; i < m.grid.size(); i += 97) {
    const Complex exact = std::exp(Complex(0.0, -1.5 * m.grid[i])) / std::sqrt(3.0);
    CHECK(std::abs(m.f[i] - exact) < 1e-10);
  }
  const auto b = bogoliubov(m, 1.5);
  CHECK(std::norm(b.beta) < 1e-20);
  CHECK(b.normalization() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("counterdiabatic drive follows the WKB mode") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  const Window& w = p.window();
  const auto d0 = p.evaluate(w.t_start);
  const auto m = solve_mode(drive_frequency(p, ModeDrive::Counterdiabatic), w,
                            CauchyData::adiabatic(d0.omega, d0.d1));
  double worst = 0.0;
  for (std::size_t i = 0; i < m.grid.size(); ++i) worst = std::max(worst, std::abs(m.f[i] - wkb_mode(p, m.grid[i]).first));
  CHECK(worst < 1e-9);
  const auto d1 = p.evaluate(w.t_end);
  CHECK(std::norm(bogoliubov(m, d1.omega, d1.d1, ReferenceVacuum::Adiabatic).beta) < 1e-18);
  CHECK(m.wronskian_drift < 1e-10);
}

TEST_CASE("instantaneous vacuum on a long window") {
  const double tau = 1.0;
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, tau, Window{-1000.0 * tau, 1000.0 * tau});
  const auto m = solve_mode(p, ModeDrive::Counterdiabatic);
  const auto e = p.evaluate(p.window().t_end);
  CHECK(std::norm(bogoliubov(m, e.omega, e.d1).beta) < 1e-10);
}

TEST_CASE("plain drive of a fast ramp creates excitations") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 0.5);
  const auto m = solve_mode(p, ModeDrive::Plain);
  const auto e = p.evaluate(p.window().t_end);
  const auto b = bogoliubov(m, e.omega, e.d1);
  CHECK(std::norm(b.beta) > 1e-4);
  CHECK(b.normalization() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(particle_number(b, 3) == doctest::Approx(7.0 * std::norm(b.beta)));
}

TEST_CASE("steep final edge marks the reference as ambiguous") {
  const auto b = bogoliubov(Complex(0.5, 0.0), Complex(0.0, -0.5), 1.0, 0.5, ReferenceVacuum::Instantaneous, 1e-3);
  CHECK(b.reference_ambiguous);
}

TEST_CASE("action-angle inversion round trip") {
  const SystemSpec sys{2.0, 1.0};
  const Complex f = std::polar(0.6, 0.3), fd = Complex(0.1, -0.9);
  // normalize so that the Wronskian is one
  const double W = wronskian(f, fd);
  const Complex fn = f / std::sqrt(W), fdn = fd / std::sqrt(W);
  for (auto [X, P] : {std::pair{0.7, -0.2}, std::pair{-1.3, 2.1}, std::pair{0.0, 0.5}}) {
    const ActionAngle aa = action_angle(X, P, fn, fdn, sys);
    const auto [X2, P2] = phase_space_point(aa, fn, fdn, sys);
    CHECK(X2 == doctest::Approx(X).epsilon(1e-13));
    CHECK(P2 == doctest::Approx(P).epsilon(1e-13));
  }
  CHECK(action_angle(0.0, 0.0, fn, fdn, sys).degenerate);
}

TEST_CASE("energy is omega J for a constant frequency") {
  const SystemSpec sys{1.5, 1.0};
  const double w = 2.0;
  const auto v = CauchyData::vacuum(w);
  const double X = 0.4, P = -1.1;
  const ActionAngle aa = action_angle(X, P, v.f, v.fdot, sys);
  CHECK(w * aa.J == doctest::Approx(P * P / (2.0 * sys.mass) + 0.5 * sys.mass * w * w * X * X).epsilon(1e-13));
}

TEST_CASE("J is an exact invariant along classical trajectories") {
  const SystemSpec sys{1.0, 1.0};
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  const auto m = solve_mode(p, ModeDrive::Counterdiabatic);
  const auto omega2 = drive_frequency(p, ModeDrive::Counterdiabatic);
  const double t0 = m.t_start(), t1 = m.t_end();
  const double X0 = 0.8, P0 = 0.3;
  Dop853<2> solver({1e-13, 1e-15});
  const auto y = solver.integrate(
      [&](double t, const std::array<double, 2>& s, std::array<double, 2>& ds) {
        ds[0] = s[1] / sys.mass;
        ds[1] = -sys.mass * omega2(t) * s[0];
      },
      t0, {X0, P0}, t1);
  const ActionAngle a = action_angle(X0, P0, m, t0, sys);
  const ActionAngle b = action_angle(y[0], y[1], m, t1, sys);
  CHECK(b.J == doctest::Approx(a.J).epsilon(1e-8));
  CHECK(std::remainder(b.phi - a.phi, 2.0 * M_PI) == doctest::Approx(0.0).epsilon(1e-7));
}

TEST_CASE("mode CSV layout") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.0, 1.0, Window{0.0, 1.0});
  ModeOptions o;
  o.output_points = 3;
  std::ostringstream s;
  write_mode_csv(s, solve_mode(p, ModeDrive::Plain, o));
  std::string header;
  std::istringstream in(s.str());
  std::getline(in, header);
  CHECK(header == "t,re_f,im_f,re_fdot,im_fdot,wronskian_error");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("Wronskian drift above the limit raises") {
  const auto p = FrequencyProtocol::arctan(1.0, 0.5, 1.0);
  ModeOptions o;
  o.rtol = 1e-4;
  o.atol = 1e-6;
  o.max_wronskian_drift = 1e-14;
  CHECK_THROWS_AS(solve_mode(p, ModeDrive::Counterdiabatic, o), AccuracyError);
}
