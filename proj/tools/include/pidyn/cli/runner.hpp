#pragma once

// Executes an experiment configuration and writes its reports.

#include <string>

#include "pidyn/cli/config.hpp"
#include "pidyn/json_io.hpp"

namespace pidyn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitAnalysis = 2;

struct RunOptions {
  unsigned workers = 1;
};

struct RunOutcome {
  int exit_code = kExitOk;
  /// {version, analysis, config, status, result | error}
  Json report;
};

/// Runs the analysis and writes output.json / output.csv / output.svg when
/// configured. Analysis failures (for example overlapping clusters in a
/// decomposition) give exit code 2 with the diagnostics in the report.
/// Throws std::runtime_error when an output file cannot be written.
RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

std::string version_string();

void write_file(const std::string& path, const std::string& contents);

}  // namespace pidyn::cli
