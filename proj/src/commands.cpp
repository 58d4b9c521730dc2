#include "sta/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace sta {

using nlohmann::json;

namespace {

OutputFormat format_or(const CommandOptions& o, OutputFormat fallback) { return o.format.value_or(fallback); }

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

const DrivingSpec& require_drive(const RunConfig& c) {
  if (!c.drive) throw ConfigError("drive: missing");
  return *c.drive;
}

QuadratureOptions quadrature(const RunConfig& c) {
  QuadratureOptions q;
  q.rel_tol = c.tolerances.quad_rel;
  return q;
}

}  // namespace

int cmd_protocol(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const FrequencyProtocol p = make_protocol(c);
  std::vector<double> grid;
  if (p.kind() == FrequencyProtocol::Kind::Tabulated) {
    for (const auto& s : p.samples())
      if (p.window().contains(s.first)) grid.push_back(s.first);
  } else {
    const Window& w = p.window();
    const std::size_t n = c.output_points;
    for (std::size_t i = 0; i < n; ++i) grid.push_back(w.t_start + w.length() * static_cast<double>(i) / static_cast<double>(n - 1));
    grid.back() = w.t_end;
  }
  if (format_or(o, OutputFormat::Csv) == OutputFormat::Csv) {
    CsvWriter csv(out, {"t", "omega", "Omega2", "dOmega2_dt"});
    for (double t : grid)
      csv.row({t, omega_derivatives(p, t).omega, counterdiabatic_frequency(p, t), counterdiabatic_rate(p, t)});
    return 0;
  }
  json rows = json::array();
  for (double t : grid)
    rows.push_back({t, omega_derivatives(p, t).omega, counterdiabatic_frequency(p, t), counterdiabatic_rate(p, t)});
  write_json(out, json{{"window", {p.window().t_start, p.window().t_end}},
                       {"validity", to_json(p.validity())},
                       {"columns", {"t", "omega", "Omega2", "dOmega2_dt"}},
                       {"rows", std::move(rows)}});
  return 0;
}

int cmd_modes(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const FrequencyProtocol p = make_protocol(c);
  ModeOptions mo;
  mo.rtol = c.tolerances.ode_rel;
  mo.atol = c.tolerances.ode_abs;
  mo.output_points = c.output_points;
  const ModeFunction m = solve_mode(p, c.mode_drive, mo);
  if (format_or(o, OutputFormat::Csv) == OutputFormat::Csv) {
    write_mode_csv(out, m);
    return 0;
  }
  const OmegaDerivatives end = p.evaluate(p.window().t_end);
  const double tol = p.options().edge_tolerance;
  const auto inst = bogoliubov(m, end.omega, end.d1, ReferenceVacuum::Instantaneous, tol);
  const auto adia = bogoliubov(m, end.omega, end.d1, ReferenceVacuum::Adiabatic, tol);
  write_json(out, json{{"window", {p.window().t_start, p.window().t_end}},
                       {"drive", c.mode_drive == ModeDrive::Counterdiabatic ? "counterdiabatic" : "plain"},
                       {"wronskian_drift", m.wronskian_drift},
                       {"steps", m.steps.size()},
                       {"instantaneous", {{"alpha", to_json(inst.alpha)},
                                          {"beta", to_json(inst.beta)},
                                          {"beta_sq", std::norm(inst.beta)},
                                          {"reference_ambiguous", inst.reference_ambiguous}}},
                       {"adiabatic", {{"alpha", to_json(adia.alpha)},
                                      {"beta", to_json(adia.beta)},
                                      {"beta_sq", std::norm(adia.beta)}}}});
  return 0;
}

int cmd_fcurve(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const FCurveValue v = f_curve(c.fcurve_x, c.fcurve_y, c.tolerances.quad_abs, quadrature(c));
  if (format_or(o, OutputFormat::Json) == OutputFormat::Csv) {
    CsvWriter csv(out, {"x", "y", "F_xy", "err_estimate", "truncation_bound"});
    csv.row({c.fcurve_x, c.fcurve_y, v.value, v.abs_error_estimate, v.truncation_bound});
    return 0;
  }
  write_json(out, json{{"x", c.fcurve_x},
                       {"y", c.fcurve_y},
                       {"F", v.value},
                       {"abs_error_estimate", v.abs_error_estimate},
                       {"truncation_bound", v.truncation_bound}});
  return 0;
}

int cmd_fig1(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  struct Row {
    double x, F, asymptote, err;
    bool ok;
  };
  std::vector<Row> rows;
  int code = 0;
  for (double x : c.fig1.x_grid) {
    Row r{x, 0.0, std::numbers::pi * std::exp(-2.0 * x), 0.0, true};
    try {
      const FCurveValue v = f_curve(x, c.fig1.y, c.tolerances.quad_abs, quadrature(c));
      r.F = v.value;
      r.err = v.abs_error_estimate + v.truncation_bound;
    } catch (const AccuracyError& e) {
      r.F = e.best_value();
      r.err = e.bound();
      r.ok = false;
      code = 3;
    }
    rows.push_back(r);
  }
  if (format_or(o, OutputFormat::Csv) == OutputFormat::Csv) {
    CsvWriter csv(out, {"x", "F_xy", "pi_exp_minus_2x", "err_estimate", "flag"});
    for (const Row& r : rows) csv.row({r.x, r.F, r.asymptote, r.err}, {r.ok ? "ok" : "accuracy_budget"});
    return code;
  }
  json arr = json::array();
  for (const Row& r : rows)
    arr.push_back(json{{"x", r.x}, {"F_xy", r.F}, {"pi_exp_minus_2x", r.asymptote}, {"err_estimate", r.err},
                       {"flag", r.ok ? "ok" : "accuracy_budget"}});
  write_json(out, json{{"y", c.fig1.y}, {"rows", std::move(arr)}});
  return code;
}

int cmd_cost(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const FrequencyProtocol p = make_protocol(c);
  CostOptions co;
  co.quadrature = quadrature(c);
  const CostReport r = compute_cost(p, require_drive(c), c.system, c.n, co);
  if (format_or(o, OutputFormat::Json) == OutputFormat::Csv) {
    CsvWriter csv(out, {"n", "nu", "mu", "delta_n", "delta_W", "p_down", "p_up"});
    csv.row({static_cast<double>(r.n), r.nu, r.mu, r.delta_n, r.delta_W, r.p_down, r.p_up});
    return 0;
  }
  write_json(out, to_json(r));
  return 0;
}

int cmd_oracle(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const FrequencyProtocol p = make_protocol(c);
  SampleSpec spec = c.samples;
  if (o.seed) spec.seed = *o.seed;
  OracleOptions oo;
  oo.perturbation = c.perturbation;
  oo.threads = o.threads;
  oo.keep_samples = !o.dump_samples.empty() || format_or(o, OutputFormat::Json) == OutputFormat::Csv;
  OracleReport r = run_oracle(p, require_drive(c), spec, oo);

  auto dump = [&](std::ostream& s) {
    CsvWriter csv(s, {"k", "theta0", "P0", "beta_sq", "beta_lin_sq", "rejected"});
    for (const auto& e : r.samples)
      csv.row({static_cast<double>(e.k), e.theta0, e.P0, e.beta_sq, e.beta_lin_sq, e.rejected ? 1.0 : 0.0});
  };
  if (!o.dump_samples.empty()) {
    std::ofstream f(o.dump_samples);
    if (!f) throw ConfigError("--dump-samples: cannot write " + o.dump_samples);
    dump(f);
  }
  if (format_or(o, OutputFormat::Json) == OutputFormat::Csv) {
    dump(out);
    return 0;
  }
  r.samples.clear();
  write_json(out, to_json(r));
  return 0;
}

int cmd_wigner(const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  const double hbar = c.system.hbar;
  std::vector<double> J;
  for (double s : c.wigner.J_grid) J.push_back(s * hbar);
  json arr = json::array();
  const bool csv = format_or(o, OutputFormat::Csv) == OutputFormat::Csv;
  std::optional<CsvWriter> writer;
  if (csv)
    writer.emplace(out, std::vector<std::string>{"n", "value_identity", "derivative_identity", "second_identity",
                                                 "ode", "c_down", "c_same", "c_up", "projection_residual"});
  for (int n = 0; n <= c.wigner.n_max; ++n) {
    const RecursionResiduals r = verify_recursions(n, J, hbar);
    const Decomposition d = final_state_decomposition(n, c.wigner.nu, c.wigner.mu, hbar);
    if (csv) {
      writer->row({static_cast<double>(n), r.value_identity, r.derivative_identity, r.second_identity, r.ode,
                   d.c_down, d.c_same, d.c_up, d.residual});
    } else {
      arr.push_back(json{{"n", n}, {"recursions", to_json(r)}, {"decomposition", to_json(d)}});
    }
  }
  if (!csv) write_json(out, json{{"nu", c.wigner.nu}, {"mu", c.wigner.mu}, {"levels", std::move(arr)}});
  return 0;
}

int run_command(const std::string& name, const RunConfig& c, const CommandOptions& o, std::ostream& out) {
  if (name == "protocol") return cmd_protocol(c, o, out);
  if (name == "modes") return cmd_modes(c, o, out);
  if (name == "fcurve") return cmd_fcurve(c, o, out);
  if (name == "fig1") return cmd_fig1(c, o, out);
  if (name == "cost") return cmd_cost(c, o, out);
  if (name == "oracle") return cmd_oracle(c, o, out);
  if (name == "wigner") return cmd_wigner(c, o, out);
  throw ConfigError("unknown command " + name);
}

}  // namespace sta
