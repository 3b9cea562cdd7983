// Command-line driver: qdbar <experiment> --config <path> [--out <dir>] [--format csv|json]

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qdbar/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum disk / annulus d-bar experiments"};
  app.footer(qdbar::report_columns_help());
  std::string experiment, config_path, out_dir, format;
  app.add_option("experiment", experiment,
                 "check-weights | norms | parametrix | inverse | schur | continuity | "
                 "uniform-bound")
      ->required();
  app.add_option("--config", config_path, "JSON run description")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--format", format, "csv or json (overrides the config)")
      ->check(CLI::IsMember({"csv", "json"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qdbar::kExitUsage;
  }

  const auto exp = qdbar::parse_experiment(experiment);
  if (!exp) {
    std::cerr << "unknown experiment: " << experiment << "\n";
    return qdbar::kExitUsage;
  }
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read config: " << config_path << "\n";
    return qdbar::kExitUsage;
  }
  std::stringstream text;
  text << in.rdbuf();

  qdbar::RunConfig cfg;
  try {
    cfg = qdbar::parse_config(text.str());
  } catch (const qdbar::ConfigError& e) {
    std::cerr << (e.kind() == qdbar::ConfigError::Kind::Syntax ? "config syntax error: "
                                                               : "invalid config: ")
              << e.what() << "\n";
    return e.kind() == qdbar::ConfigError::Kind::Syntax ? qdbar::kExitConfigSyntax
                                                        : qdbar::kExitConfigInvalid;
  }
  if (cfg.experiment != *exp) {
    std::cerr << "invalid config: experiment \"" << qdbar::to_string(cfg.experiment)
              << "\" does not match the command \"" << experiment << "\"\n";
    return qdbar::kExitConfigInvalid;
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!format.empty()) cfg.format = format;

  try {
    const auto art = qdbar::run_experiment(cfg);
    std::cout << art.report_path << "\n" << art.manifest_path << "\n";
    return art.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qdbar::kExitNumericalFailure;
  }
}
