#pragma once

// Subcommands of the sta_cost tool. Each writes its result to a stream and
// returns the process exit code; errors propagate as sta::Error.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "sta/io.hpp"

namespace sta {

enum class OutputFormat { Csv, Json };

struct CommandOptions {
  std::optional<OutputFormat> format;  // each command has its own default
  std::optional<std::uint64_t> seed;   // overrides samples.seed
  int threads = 1;
  std::string dump_samples;  // per-sample CSV path for oracle, empty for none
};

int cmd_protocol(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int cmd_modes(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int cmd_fcurve(const RunConfig& c, const CommandOptions& o, std::ostream& out);
/// Exit code 3 when any row missed its accuracy budget (the row is still
/// written, flagged).
int cmd_fig1(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int cmd_cost(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int cmd_oracle(const RunConfig& c, const CommandOptions& o, std::ostream& out);
int cmd_wigner(const RunConfig& c, const CommandOptions& o, std::ostream& out);

/// Dispatches by subcommand name.
int run_command(const std::string& name, const RunConfig& c, const CommandOptions& o, std::ostream& out);

}  // namespace sta
