#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "orlisov/config.hpp"

namespace orlisov::cli {

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2, gate_refused = 3 };

struct Options {
  bool force = false;
  /// Property filters for `verify`.
  std::vector<std::string> properties;
  /// Extra refinement levels for `modular`.
  int refine = 0;
  /// Built-in fixture for `modular` (ignored when `function_csv` is set).
  std::string fixture = "bubble";
  std::string function_csv;
};

/// Each command writes its CSV under cfg.out and a short summary to `log`.
int cmd_young_audit(const RunConfig& cfg, const Options& opt, std::ostream& log);
int cmd_modular(const RunConfig& cfg, const Options& opt, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const Options& opt, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const Options& opt, std::ostream& log);

/// Dispatch by subcommand name; maps ConfigError to exit code 2.
int run(const std::string& command, const RunConfig& cfg, const Options& opt, std::ostream& log);

}  // namespace orlisov::cli
