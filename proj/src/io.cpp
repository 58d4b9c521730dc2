#include "sta/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace sta {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) { row(values, {}); }

void CsvWriter::row(const std::vector<double>& values, const std::vector<std::string>& text) {
  if (values.size() + text.size() != columns_) throw Error("csv: row width does not match the header");
  bool first = true;
  for (double v : values) {
    out_ << (first ? "" : ",") << format_double(v);
    first = false;
  }
  for (const auto& s : text) {
    out_ << (first ? "" : ",") << s;
    first = false;
  }
  out_ << '\n';
}

namespace {

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double number(const json& obj, const char* key, const std::string& path, std::optional<double> fallback = {}) {
  const json* v = find(obj, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(path + "." + key + ": missing");
  }
  if (!v->is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v->get<double>();
}

long integer(const json& obj, const char* key, const std::string& path, long fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  return v->get<long>();
}

bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(path + "." + key + ": expected true or false");
  return v->get<bool>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field + ": must be finite and > 0");
  return v;
}

}  // namespace

std::vector<double> default_fig1_grid() {
  std::vector<double> x(40);
  const double a = std::log(0.1), b = std::log(4.0);
  for (int i = 0; i < 40; ++i) x[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / 39.0);
  x.front() = 0.1;
  x.back() = 4.0;
  return x;
}

FrequencyProtocol make_protocol(const json& j) {
  if (!j.is_object()) throw ConfigError("protocol: expected an object");
  ProtocolOptions o;
  o.edge_tolerance = positive(number(j, "edge_tolerance", "protocol", o.edge_tolerance), "protocol.edge_tolerance");
  o.enforce_edge = boolean(j, "enforce_edge", "protocol", o.enforce_edge);
  o.allow_inverted = boolean(j, "allow_inverted", "protocol", o.allow_inverted);
  std::optional<Window> window;
  if (const json* w = find(j, "window")) {
    const auto v = numbers(*w, "protocol.window");
    if (v.size() != 2 || !(v[0] < v[1])) throw ConfigError("protocol.window: expected [t_start, t_end] with t_start < t_end");
    window = Window{v[0], v[1]};
  }
  const json* type = find(j, "type");
  if (!type || !type->is_string()) throw ConfigError("protocol.type: expected \"arctan\" or \"tabulated\"");
  const std::string kind = type->get<std::string>();
  if (kind == "arctan") {
    return FrequencyProtocol::arctan(number(j, "omega0", "protocol"), number(j, "delta", "protocol"),
                                     number(j, "tau", "protocol"), window, o);
  }
  if (kind == "tabulated") {
    const json* s = find(j, "samples");
    if (!s || !s->is_array()) throw ConfigError("protocol.samples: expected an array of [t, omega] pairs");
    std::vector<std::pair<double, double>> samples;
    for (const auto& e : *s) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ConfigError("protocol.samples: expected an array of [t, omega] pairs");
      samples.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return FrequencyProtocol::tabulated(std::move(samples), window, o);
  }
  throw ConfigError("protocol.type: unknown value \"" + kind + "\"");
}

FrequencyProtocol make_protocol(const RunConfig& c) {
  if (c.protocol.is_null()) throw ConfigError("protocol: missing");
  return make_protocol(c.protocol);
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig c;
  const json* version = find(j, "schema_version");
  if (!version || !version->is_number_integer() || version->get<int>() != 1)
    throw ConfigError("schema_version: expected 1");

  if (const json* p = find(j, "protocol")) {
    if (!p->is_object()) throw ConfigError("protocol: expected an object");
    c.protocol = *p;
  }

  if (const json* s = find(j, "system")) {
    if (!s->is_object()) throw ConfigError("system: expected an object");
    c.system.mass = positive(number(*s, "mass", "system", 1.0), "system.mass");
    c.system.hbar = positive(number(*s, "hbar", "system", 1.0), "system.hbar");
  }

  if (const json* d = find(j, "drive")) {
    if (!d->is_object()) throw ConfigError("drive: expected an object");
    DrivingSpec drive;
    drive.M = number(*d, "M", "drive", 1.0);
    if (const json* rate = find(*d, "theta_dot")) {
      if (rate->is_array()) {
        drive.theta_dot_profile = numbers(*rate, "drive.theta_dot");
        drive.theta_dot = drive.theta_dot_profile.empty() ? 1.0 : drive.theta_dot_profile.front();
        if (drive.theta_dot_profile.empty()) throw ConfigError("drive.theta_dot: empty profile");
      } else if (rate->is_number()) {
        drive.theta_dot = rate->get<double>();
      } else {
        throw ConfigError("drive.theta_dot: expected a number");
      }
    }
    drive.var_theta0 = number(*d, "var_theta0", "drive", 0.0);
    drive.var_P0 = number(*d, "var_P0", "drive", 0.0);
    drive.cross_correlation = number(*d, "cross_correlation", "drive", 0.0);
    drive.H_D = number(*d, "H_D", "drive", 1.0);
    drive.validate();
    c.drive = drive;
  }

  if (const json* t = find(j, "tolerances")) {
    if (!t->is_object()) throw ConfigError("tolerances: expected an object");
    c.tolerances.ode_rel = positive(number(*t, "ode_rel", "tolerances", c.tolerances.ode_rel), "tolerances.ode_rel");
    c.tolerances.ode_abs = positive(number(*t, "ode_abs", "tolerances", c.tolerances.ode_abs), "tolerances.ode_abs");
    c.tolerances.quad_abs = positive(number(*t, "quad_abs", "tolerances", c.tolerances.quad_abs), "tolerances.quad_abs");
    c.tolerances.quad_rel = positive(number(*t, "quad_rel", "tolerances", c.tolerances.quad_rel), "tolerances.quad_rel");
  }

  if (const json* s = find(j, "samples")) {
    if (!s->is_object()) throw ConfigError("samples: expected an object");
    c.samples.n_samples = integer(*s, "n_samples", "samples", c.samples.n_samples);
    if (c.samples.n_samples < 1) throw ConfigError("samples.n_samples: must be >= 1");
    if (const json* seed = find(*s, "seed")) {
      if (!seed->is_number_integer() || (!seed->is_number_unsigned() && seed->get<std::int64_t>() < 0))
        throw ConfigError("samples.seed: expected a non-negative integer");
      c.samples.seed = seed->get<std::uint64_t>();
    }
    c.samples.n_initial = static_cast<int>(integer(*s, "n_initial", "samples", 0));
    if (c.samples.n_initial < 0) throw ConfigError("samples.n_initial: must be >= 0");
    if (const json* mode = find(*s, "perturbation")) {
      const std::string m = mode->is_string() ? mode->get<std::string>() : "";
      if (m == "linear") c.perturbation = Perturbation::Linear;
      else if (m == "exact") c.perturbation = Perturbation::Exact;
      else throw ConfigError("samples.perturbation: expected \"linear\" or \"exact\"");
    }
  }

  c.n = static_cast<int>(integer(j, "n", "config", 0));
  if (c.n < 0) throw ConfigError("n: must be >= 0");

  if (const json* m = find(j, "modes")) {
    if (!m->is_object()) throw ConfigError("modes: expected an object");
    if (const json* drive = find(*m, "drive")) {
      const std::string v = drive->is_string() ? drive->get<std::string>() : "";
      if (v == "counterdiabatic") c.mode_drive = ModeDrive::Counterdiabatic;
      else if (v == "plain") c.mode_drive = ModeDrive::Plain;
      else throw ConfigError("modes.drive: expected \"counterdiabatic\" or \"plain\"");
    }
    const long pts = integer(*m, "output_points", "modes", static_cast<long>(c.output_points));
    if (pts < 2) throw ConfigError("modes.output_points: must be >= 2");
    c.output_points = static_cast<std::size_t>(pts);
  }

  if (const json* f = find(j, "fcurve")) {
    if (!f->is_object()) throw ConfigError("fcurve: expected an object");
    c.fcurve_x = positive(number(*f, "x", "fcurve"), "fcurve.x");
    c.fcurve_y = number(*f, "y", "fcurve", 0.5);
  }

  c.fig1.x_grid = default_fig1_grid();
  if (const json* f = find(j, "fig1")) {
    if (!f->is_object()) throw ConfigError("fig1: expected an object");
    if (const json* g = find(*f, "x_grid")) c.fig1.x_grid = numbers(*g, "fig1.x_grid");
    if (c.fig1.x_grid.empty()) throw ConfigError("fig1.x_grid: must not be empty");
    for (double x : c.fig1.x_grid)
      if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("fig1.x_grid: every x must be finite and > 0");
    c.fig1.y = number(*f, "y", "fig1", 0.5);
  }

  for (int i = 0; i < 40; ++i) c.wigner.J_grid.push_back(std::pow(10.0, -3.0 + (std::log10(20.0) + 3.0) * i / 39.0));
  if (const json* w = find(j, "wigner")) {
    if (!w->is_object()) throw ConfigError("wigner: expected an object");
    c.wigner.n_max = static_cast<int>(integer(*w, "n_max", "wigner", c.wigner.n_max));
    if (c.wigner.n_max < 0 || c.wigner.n_max + 2 > kMaxLaguerreDegree)
      throw ConfigError("wigner.n_max: must lie in [0, 198]");
    if (const json* g = find(*w, "J_grid")) c.wigner.J_grid = numbers(*g, "wigner.J_grid");
    for (double J : c.wigner.J_grid)
      if (!(J > 0.0)) throw ConfigError("wigner.J_grid: every J must be > 0");
    c.wigner.nu = number(*w, "nu", "wigner", 0.0);
    c.wigner.mu = number(*w, "mu", "wigner", 0.0);
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

json to_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const OscillatoryResult& r) {
  return json{{"value", to_json(r.value)},
              {"abs_error_estimate", r.abs_error_estimate},
              {"truncation_bound", r.truncation_bound},
              {"panels", r.panels}};
}

json to_json(const ValidityReport& r) {
  return json{{"min_Omega2", r.min_omega2},
              {"t_at_min", r.t_at_min},
              {"analytic_bound_met", r.analytic_bound_met},
              {"at_analytic_boundary", r.at_analytic_boundary},
              {"positive", r.positive}};
}

json to_json(const CostReport& r) {
  return json{{"n", r.n},
              {"nu", r.nu},
              {"mu", r.mu},
              {"delta_n", r.delta_n},
              {"delta_W", r.delta_W},
              {"p_down", r.p_down},
              {"p_up", r.p_up},
              {"perturbative_ok", r.perturbative_ok},
              {"negative_probability", r.negative_probability},
              {"adiabaticity_violated", r.adiabaticity_violated},
              {"provenance", json{{"I0", to_json(r.I0)}, {"I1", to_json(r.I1)}}}};
}

json to_json(const OracleReport& r) {
  json j{{"seed", r.seed},
         {"n_samples", r.n_samples},
         {"n_initial", r.n_initial},
         {"rejected", r.rejected},
         {"warning", r.rejection_warning ? json("more than 1% of samples rejected (negative Omega^2)") : json(nullptr)},
         {"mean_beta_sq", r.mean_beta_sq},
         {"std_error", r.std_error ? json(*r.std_error) : json(nullptr)},
         {"delta_n_mc", r.delta_n_mc},
         {"nu", r.nu},
         {"nu_prediction", r.nu_prediction},
         {"ratio", r.ratio},
         {"calibration_constant", r.calibration_constant},
         {"max_linear_rel_error", r.max_linear_rel_error},
         {"I0", to_json(r.I0)},
         {"I1", to_json(r.I1)}};
  if (!r.samples.empty()) {
    json s = json::array();
    for (const auto& e : r.samples)
      s.push_back(json{{"k", e.k},
                       {"theta0", e.theta0},
                       {"P0", e.P0},
                       {"beta_sq", e.beta_sq},
                       {"beta_lin_sq", e.beta_lin_sq},
                       {"rejected", e.rejected}});
    j["samples"] = std::move(s);
  }
  return j;
}

json to_json(const Decomposition& d) {
  return json{{"n", d.n},
              {"c_down", d.c_down},
              {"c_same", d.c_same},
              {"c_up", d.c_up},
              {"residual", d.residual},
              {"correction_norm", d.correction_norm}};
}

json to_json(const RecursionResiduals& r) {
  return json{{"value_identity", r.value_identity},
              {"derivative_identity", r.derivative_identity},
              {"second_identity", r.second_identity},
              {"ode", r.ode}};
}

}  // namespace sta
