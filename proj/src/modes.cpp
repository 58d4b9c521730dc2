#include "sta/modes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sta/io.hpp"

namespace sta {

CauchyData CauchyData::vacuum(double omega) {
  if (!(omega > 0.0)) throw DomainError("vacuum data needs omega > 0", omega);
  return {Complex(1.0 / std::sqrt(2.0 * omega), 0.0), Complex(0.0, -std::sqrt(omega / 2.0))};
}

CauchyData CauchyData::adiabatic(double omega, double omega_dot) {
  if (!(omega > 0.0)) throw DomainError("adiabatic data needs omega > 0", omega);
  const Complex f(1.0 / std::sqrt(2.0 * omega), 0.0);
  return {f, Complex(-omega_dot / (2.0 * omega), -omega) * f};
}

std::pair<Complex, Complex> ModeFunction::at(double t) const {
  if (steps.empty() || t < t_start() || t > t_end()) throw DomainError("t outside the solved window", t);
  auto it = std::lower_bound(steps.begin(), steps.end(), t,
                             [](const Dop853Dense<4>& s, double v) { return s.t1() < v; });
  if (it == steps.end()) --it;
  const auto y = (*it)(t);
  return {Complex(y[0], y[1]), Complex(y[2], y[3])};
}

ModeFunction solve_mode(const std::function<double(double)>& omega2, const Window& window,
                        const CauchyData& initial, const ModeOptions& options) {
  if (!(options.rtol > 0.0) || !(options.atol > 0.0)) throw ConfigError("ODE tolerances must be > 0");
  if (!(window.t_end > window.t_start)) throw ConfigError("mode window must have t_start < t_end");
  const std::size_t n_out = std::max<std::size_t>(2, options.output_points);

  ModeFunction m;
  m.grid.resize(n_out);
  for (std::size_t i = 0; i < n_out; ++i)
    m.grid[i] = window.t_start + window.length() * static_cast<double>(i) / static_cast<double>(n_out - 1);
  m.grid.back() = window.t_end;
  m.f.resize(n_out);
  m.fdot.resize(n_out);

  Dop853Options o;
  o.rtol = options.rtol;
  o.atol = options.atol;
  Dop853<4> solver(o);

  std::size_t next = 1;
  m.f[0] = initial.f;
  m.fdot[0] = initial.fdot;
  auto rhs = [&](double t, const std::array<double, 4>& y, std::array<double, 4>& d) {
    const double w2 = omega2(t);
    d[0] = y[2];
    d[1] = y[3];
    d[2] = -w2 * y[0];
    d[3] = -w2 * y[1];
  };
  auto observe = [&](const Dop853Dense<4>& step) {
    m.steps.push_back(step);
    while (next < n_out && m.grid[next] <= step.t1()) {
      const auto y = step(m.grid[next]);
      m.f[next] = {y[0], y[1]};
      m.fdot[next] = {y[2], y[3]};
      ++next;
    }
  };
  const std::array<double, 4> y0 = {initial.f.real(), initial.f.imag(), initial.fdot.real(), initial.fdot.imag()};
  const auto y1 = solver.integrate(rhs, window.t_start, y0, window.t_end, observe);
  m.f.back() = {y1[0], y1[1]};
  m.fdot.back() = {y1[2], y1[3]};
  m.stats = solver.stats();

  const double w0 = wronskian(initial.f, initial.fdot);
  for (std::size_t i = 0; i < n_out; ++i)
    m.wronskian_drift = std::max(m.wronskian_drift, std::abs(wronskian(m.f[i], m.fdot[i]) - w0));
  if (m.wronskian_drift > options.max_wronskian_drift)
    throw AccuracyError("Wronskian drift exceeds tolerance", m.wronskian_drift, options.max_wronskian_drift);
  return m;
}

std::function<double(double)> drive_frequency(const FrequencyProtocol& p, ModeDrive drive) {
  if (drive == ModeDrive::Plain)
    return [&p](double t) {
      const double w = p.evaluate(t).omega;
      return w * w;
    };
  return [&p](double t) { return counterdiabatic_frequency(p, t); };
}

ModeFunction solve_mode(const FrequencyProtocol& p, ModeDrive drive, const ModeOptions& options) {
  const double w = omega_derivatives(p, p.window().t_start).omega;
  return solve_mode(drive_frequency(p, drive), p.window(), CauchyData::vacuum(w), options);
}

std::pair<Complex, Complex> wkb_mode(const FrequencyProtocol& p, double t) {
  const OmegaDerivatives d = omega_derivatives(p, t);
  const double S = phase_integral(p, t) - phase_integral(p, p.window().t_start);
  const Complex f = std::polar(1.0 / std::sqrt(2.0 * d.omega), -S);
  return {f, Complex(-d.d1 / (2.0 * d.omega), -d.omega) * f};
}

BogoliubovCoefficients bogoliubov(Complex f, Complex fdot, double w, double wdot, ReferenceVacuum reference,
                                  double edge_tolerance) {
  if (!(w > 0.0)) throw DomainError("reference frequency must be > 0", w);
  const double kappa = reference == ReferenceVacuum::Adiabatic ? wdot / (2.0 * w) : 0.0;
  const double g = 1.0 / std::sqrt(2.0 * w);
  const Complex I(0.0, 1.0);
  BogoliubovCoefficients b;
  // Reference mode g with g' = (-i w - kappa) g; alpha and beta are its
  // Wronskian projections.
  b.alpha = I * g * (fdot - Complex(-kappa, w) * f);
  b.beta = -I * g * (fdot + Complex(kappa, w) * f);
  b.reference_ambiguous = std::abs(wdot) / (w * w) > edge_tolerance;
  return b;
}

BogoliubovCoefficients bogoliubov(const ModeFunction& mode, double w, double wdot, ReferenceVacuum reference,
                                  double edge_tolerance) {
  return bogoliubov(mode.f.back(), mode.fdot.back(), w, wdot, reference, edge_tolerance);
}

double particle_number(const BogoliubovCoefficients& b, int n_initial) {
  if (n_initial < 0) throw ConfigError("n_initial must be >= 0");
  return (2.0 * n_initial + 1.0) * std::norm(b.beta);
}

ActionAngle action_angle(double X, double P, Complex f, Complex fdot, const SystemSpec& system) {
  const double sm = std::sqrt(system.mass);
  const Complex c = Complex(0.0, 1.0) * (std::conj(f) * (P / sm) - std::conj(fdot) * (sm * X));
  ActionAngle aa;
  aa.J = std::norm(c);
  if (aa.J == 0.0) {
    aa.degenerate = true;
    return aa;
  }
  aa.phi = -std::arg(c);
  return aa;
}

ActionAngle action_angle(double X, double P, const ModeFunction& mode, double t, const SystemSpec& system) {
  const auto [f, fd] = mode.at(t);
  return action_angle(X, P, f, fd, system);
}

std::pair<double, double> phase_space_point(const ActionAngle& aa, Complex f, Complex fdot, const SystemSpec& system) {
  const Complex a = std::polar(std::sqrt(aa.J), -aa.phi);
  return {2.0 * std::sqrt(1.0 / system.mass) * (a * f).real(), 2.0 * std::sqrt(system.mass) * (a * fdot).real()};
}

void write_mode_csv(std::ostream& out, const ModeFunction& mode) {
  CsvWriter csv(out, {"t", "re_f", "im_f", "re_fdot", "im_fdot", "wronskian_error"});
  const double w0 = wronskian(mode.f.front(), mode.fdot.front());
  for (std::size_t i = 0; i < mode.grid.size(); ++i)
    csv.row({mode.grid[i], mode.f[i].real(), mode.f[i].imag(), mode.fdot[i].real(), mode.fdot[i].imag(),
             std::abs(wronskian(mode.f[i], mode.fdot[i]) - w0)});
}

}  // namespace sta
