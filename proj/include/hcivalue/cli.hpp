#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hcivalue/report.hpp"

namespace hcivalue {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  ///< validation or I/O error
inline constexpr int kExitUsage = 2;

struct CommandOutcome {
  int exit_code = kExitOk;
  std::optional<Report> report;
  std::string output;       ///< rendered report (or help text)
  std::string diagnostics;  ///< what goes to standard error
};

/// Runs one command line. `args` excludes the program name, e.g.
/// {"task", "eval", "scenario.json", "--task", "tv_b", "--format", "json"}.
CommandOutcome run_command(const std::vector<std::string>& args);

/// Same, writing the report to `out` and diagnostics to `err`; returns the exit code.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hcivalue
