#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fhnvs/verify.hpp"
#include "fhnvs_cli/config.hpp"

namespace fhnvs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;

/// Residual threshold used by `verify` to pass a solution.
inline constexpr double kVerifyResidualTol = 1e-6;

struct CommandOptions {
  std::string command;
  std::filesystem::path config;
  std::optional<std::string> out;
  std::optional<double> s;
  std::optional<std::vector<double>> ladder;
  std::optional<std::filesystem::path> solution;
};

const std::vector<std::string>& command_names();

/// Runs one subcommand; returns the process exit status. Diagnostics go to `log`.
int dispatch(const CommandOptions& options, std::ostream& log);

nlohmann::json solution_json(const SolutionReport& rep, bool include_trace);

}  // namespace fhnvs::cli
