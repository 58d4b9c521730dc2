#pragma once

// CSV and JSON plumbing for the command-line tool and the bindings.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sta/cost.hpp"
#include "sta/drive.hpp"
#include "sta/modes.hpp"
#include "sta/oracle.hpp"
#include "sta/oscillatory.hpp"
#include "sta/protocol.hpp"
#include "sta/wigner.hpp"

namespace sta {

/// 17 significant digits, '.' separator, independent of the locale.
std::string format_double(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  /// Numeric columns followed by trailing text cells.
  void row(const std::vector<double>& values, const std::vector<std::string>& text);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

struct Tolerances {
  double ode_rel = 1e-13;
  double ode_abs = 1e-15;
  double quad_abs = 1e-9;
  double quad_rel = 1e-13;
};

struct Fig1Spec {
  std::vector<double> x_grid;  // default: 40 log-spaced points on [0.1, 4]
  double y = 0.5;
};

struct WignerSpec {
  int n_max = 10;
  std::vector<double> J_grid;  // default: log grid on [1e-3, 20]
  double nu = 0.0;
  double mu = 0.0;
};

struct RunConfig {
  int schema_version = 1;
  nlohmann::json protocol;  // kept raw; built on demand by make_protocol
  SystemSpec system;
  std::optional<DrivingSpec> drive;
  Tolerances tolerances;
  SampleSpec samples;
  Perturbation perturbation = Perturbation::Linear;
  int n = 0;  // initial level for cost
  ModeDrive mode_drive = ModeDrive::Counterdiabatic;
  std::size_t output_points = 2001;
  double fcurve_x = 1.0;
  double fcurve_y = 0.5;
  Fig1Spec fig1;
  WignerSpec wigner;
};

std::vector<double> default_fig1_grid();

/// Parses a configuration object. Errors raise ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Builds the protocol described by a "protocol" object.
FrequencyProtocol make_protocol(const nlohmann::json& j);
FrequencyProtocol make_protocol(const RunConfig& c);

nlohmann::json to_json(std::complex<double> z);
nlohmann::json to_json(const OscillatoryResult& r);
nlohmann::json to_json(const ValidityReport& r);
nlohmann::json to_json(const CostReport& r);
nlohmann::json to_json(const OracleReport& r);
nlohmann::json to_json(const Decomposition& d);
nlohmann::json to_json(const RecursionResiduals& r);

}  // namespace sta
