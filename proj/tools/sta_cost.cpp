// sta_cost: batch front end for the shortcut-to-adiabaticity cost toolkit.
//
//   sta_cost fig1 --out fig1.csv
//   sta_cost cost --config run.json --format json
//   sta_cost oracle --config run.json --seed 7 --threads 4

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "sta/commands.hpp"

namespace {

int threads_from_env() {
  const char* v = std::getenv("STA_COST_THREADS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw sta::ConfigError("STA_COST_THREADS must be a positive integer");
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intrinsic cost of counterdiabatic harmonic-oscillator shortcuts"};
  app.require_subcommand(1);

  std::string config_path, out_path, format, dump_path;
  std::uint64_t seed = 0;
  int threads = 0;

  const std::map<std::string, std::string> commands = {
      {"protocol", "Tabulate omega, Omega^2 and dOmega^2/dt over the window"},
      {"modes", "Integrate the mode equation and report Bogoliubov coefficients"},
      {"fcurve", "Evaluate the shape integral F[x, y] at one point"},
      {"fig1", "F[x, 1/2] against pi exp(-2x) over an x grid"},
      {"cost", "nu, mu, transition weights and extra work"},
      {"oracle", "Monte Carlo check of the first-order cost"},
      {"wigner", "Wigner recursions and final-state decomposition"},
  };
  std::map<std::string, CLI::Option*> seed_opts;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration (schema_version 1)");
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "Worker threads (fallback: STA_COST_THREADS)")->check(CLI::PositiveNumber);
    if (name == "oracle") {
      seed_opts[name] = sub->add_option("--seed", seed, "Overrides samples.seed");
      sub->add_option("--dump-samples", dump_path, "Per-sample CSV");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    sta::RunConfig config;
    if (!config_path.empty()) {
      config = sta::load_config(config_path);
    } else if (name != "fig1" && name != "wigner" && name != "fcurve") {
      throw sta::ConfigError("--config is required for " + name);
    } else {
      config = sta::parse_config(nlohmann::json{{"schema_version", 1}});
    }

    sta::CommandOptions opts;
    if (format == "csv") opts.format = sta::OutputFormat::Csv;
    if (format == "json") opts.format = sta::OutputFormat::Json;
    if (auto it = seed_opts.find(name); it != seed_opts.end() && it->second->count() > 0) opts.seed = seed;
    opts.threads = threads > 0 ? threads : threads_from_env();
    opts.dump_samples = dump_path;

    // Buffer so a failing command leaves no partial output file behind.
    std::ostringstream buffer;
    const int code = sta::run_command(name, config, opts, buffer);
    if (out_path.empty()) {
      std::cout << buffer.str();
    } else {
      std::ofstream f(out_path);
      if (!f) throw sta::ConfigError("--out: cannot write " + out_path);
      f << buffer.str();
    }
    return code;
  } catch (const sta::Error& e) {
    std::cerr << "sta_cost " << name << ": " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "sta_cost " << name << ": " << e.what() << '\n';
    return 1;
  }
}
