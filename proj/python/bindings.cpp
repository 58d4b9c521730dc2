#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sta/commands.hpp"

namespace py = pybind11;
using namespace sta;

namespace {

// JSON objects cross the boundary as text; the Python side wraps json.loads.
std::string dumps(const nlohmann::json& j) { return j.dump(); }

DrivingSpec drive_from(double M, double theta_dot, double var_theta0, double var_P0) {
  DrivingSpec d;
  d.M = M;
  d.theta_dot = theta_dot;
  d.var_theta0 = var_theta0;
  d.var_P0 = var_P0;
  d.validate();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Intrinsic cost of counterdiabatic oscillator shortcuts";

  static py::exception<Error> base(m, "StaError");
  static py::exception<ConfigError> config(m, "ConfigError", base.ptr());
  static py::exception<ValidityError> validity(m, "ValidityError", base.ptr());
  static py::exception<AccuracyError> accuracy(m, "AccuracyError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config, e.what());
    } catch (const ValidityError& e) {
      py::set_error(validity, e.what());
    } catch (const AccuracyError& e) {
      py::set_error(accuracy, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  m.def("f_curve", [](double x, double y, double abs_tol) {
    const FCurveValue v = f_curve(x, y, abs_tol);
    return py::make_tuple(v.value, v.abs_error_estimate + v.truncation_bound);
  }, py::arg("x"), py::arg("y") = 0.5, py::arg("abs_tol") = 1e-9,
     "F[x, y] and its combined error bound.");

  m.def("counterdiabatic_omega2", [](double omega0, double delta, double tau, double t) {
    const auto a = arctan_terms(omega0, delta, tau, t);
    return counterdiabatic_omega2(a.omega, a.d1, a.d2);
  }, py::arg("omega0"), py::arg("delta"), py::arg("tau"), py::arg("t"));

  m.def("validity", [](double omega0, double delta, double tau) {
    ProtocolOptions o;
    o.allow_inverted = true;
    const ValidityReport r = FrequencyProtocol::arctan(omega0, delta, tau, std::nullopt, o).validity();
    return dumps(to_json(r));
  }, py::arg("omega0"), py::arg("delta"), py::arg("tau"));

  m.def("sta_beta_sq", [](double omega0, double delta, double tau, double window_multiple) {
    const FrequencyProtocol p = FrequencyProtocol::arctan(
        omega0, delta, tau, Window{-window_multiple * tau, window_multiple * tau});
    const ModeFunction mode = solve_mode(p, ModeDrive::Counterdiabatic);
    const OmegaDerivatives end = p.evaluate(p.window().t_end);
    const auto b = bogoliubov(mode, end.omega, end.d1, ReferenceVacuum::Instantaneous, 1.0);
    return py::make_tuple(std::norm(b.beta), mode.wronskian_drift);
  }, py::arg("omega0"), py::arg("delta"), py::arg("tau"), py::arg("window_multiple") = 1000.0,
     "|beta|^2 and Wronskian drift for the counterdiabatic drive.");

  m.def("cost", [](double omega0, double delta, double tau, double M, double theta_dot, double var_theta0,
                   double var_P0, int n) {
    const FrequencyProtocol p = FrequencyProtocol::arctan(omega0, delta, tau);
    return dumps(to_json(compute_cost(p, drive_from(M, theta_dot, var_theta0, var_P0), SystemSpec{}, n)));
  }, py::arg("omega0"), py::arg("delta"), py::arg("tau"), py::arg("M") = 1.0, py::arg("theta_dot") = 1.0,
     py::arg("var_theta0") = 0.0, py::arg("var_P0") = 0.0, py::arg("n") = 0);

  m.def("delta_n", &delta_n, py::arg("nu"), py::arg("mu"), py::arg("n"));
  m.def("laguerre", &laguerre, py::arg("n"), py::arg("s"));
  m.def("wigner", [](int n, double J, double hbar) { return WignerEigenstate(n, hbar)(J); },
        py::arg("n"), py::arg("J"), py::arg("hbar") = 1.0);

  m.def("run", [](const std::string& command, const std::string& config_json, const std::string& format,
                  std::optional<std::uint64_t> seed, int threads) {
    CommandOptions o;
    if (format == "csv") o.format = OutputFormat::Csv;
    else if (format == "json") o.format = OutputFormat::Json;
    else if (!format.empty()) throw ConfigError("format must be csv or json");
    o.seed = seed;
    o.threads = threads;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    std::ostringstream out;
    int code;
    {
      py::gil_scoped_release release;
      code = run_command(command, parse_config(j), o, out);
    }
    return py::make_tuple(code, out.str());
  }, py::arg("command"), py::arg("config_json"), py::arg("format") = "", py::arg("seed") = py::none(),
     py::arg("threads") = 1, "Runs a sta_cost subcommand in process; returns (exit_code, output).");
}
