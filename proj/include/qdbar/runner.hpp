#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qdbar/config.hpp"

namespace qdbar {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitConditionViolation = 2,
  kExitNumericalFailure = 3,
  kExitPropertyFailure = 4,
  kExitConfigSyntax = 5,
  kExitConfigInvalid = 6,
};

using Cell = std::variant<double, Index, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct RunArtifacts {
  int exit_code = kExitSuccess;
  std::string report_path;
  std::string manifest_path;
  Table table;
  std::string summary_json;  ///< experiment summary, also in the manifest
};

/// Runs one experiment and writes <out>/<experiment>.<format> and
/// <out>/manifest.json. The manifest is written even when rows fail.
RunArtifacts run_experiment(const RunConfig& config);

/// Report serializations (deterministic: shortest round-trip doubles).
std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Column documentation for --help.
std::string report_columns_help();

}  // namespace qdbar
