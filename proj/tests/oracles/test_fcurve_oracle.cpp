#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "oracles/contour_oracle.hpp"
#include "sta/oscillatory.hpp"

namespace {

struct Point {
  double x, F;
};

std::vector<Point> fixture() {
  std::ifstream in(STA_FIXTURE_DIR "/fcurve.csv");
  REQUIRE(in.good());
  std::string line;
  std::getline(in, line);
  std::vector<Point> out;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return out;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("fixture values at 30 digits agree with the rotated-contour oracle") {
  const auto pts = fixture();
  REQUIRE(pts.size() == 40);
  for (const auto& p : pts) CHECK(rel(oracle::f_curve(p.x, 0.5), p.F) < 1e-11);
}

TEST_CASE("f_curve matches the fixture over the figure grid") {
  for (const auto& p : fixture()) {
    const auto v = sta::f_curve(p.x, 0.5);
    CHECK(rel(v.value, p.F) < 1e-10);
    // the reported bound covers the actual error
    CHECK(std::abs(v.value - p.F) <= v.abs_error_estimate + v.truncation_bound + 1e-15 * p.F);
  }
}

TEST_CASE("tabulated reference values") {
  CHECK(rel(sta::f_curve(1.0, 0.5).value, 0.616230993122648) < 1e-12);
  CHECK(rel(sta::f_curve(2.0, 0.5).value, 0.0759450942981248) < 1e-12);
  CHECK(rel(sta::f_curve(4.0, 0.5).value, 0.00118141561241028) < 1e-10);
  CHECK(rel(sta::f_curve(0.1, 0.5).value, 5.15806878457112) < 1e-12);
}

TEST_CASE("f_curve agrees with the contour oracle off the figure grid") {
  for (double y : {0.0, 0.1, 0.3, 0.5, 0.6})
    for (double x : {0.05, 0.3, 0.7, 1.5, 3.0})
      CHECK(rel(sta::f_curve(x, y).value, oracle::f_curve(x, y)) < 1e-10);
}

TEST_CASE("y = 0 reduces to pi exp(-2x)") {
  for (double x : {0.1, 0.2, 0.5, 1.0, 2.0, 4.0}) {
    const double exact = std::numbers::pi * std::exp(-2.0 * x);
    CHECK(rel(oracle::f_curve(x, 0.0), exact) < 1e-12);
    CHECK(rel(sta::f_curve(x, 0.0).value, exact) < 1e-10);
  }
}
