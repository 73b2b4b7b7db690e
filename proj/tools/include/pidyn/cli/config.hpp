#pragma once

// Experiment configuration files (YAML). Every section is a mapping and
// unknown keys are rejected with the file, line and column of the key.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "pidyn/gallery.hpp"
#include "pidyn/json_io.hpp"
#include "pidyn/maps.hpp"
#include "pidyn/recurrence.hpp"

namespace pidyn::cli {

class ConfigError : public std::runtime_error {
 public:
  /// line and column are 1-based; 0 means the position is unknown.
  ConfigError(const std::string& source, int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct SequenceSpec {
  /// Gallery entry name; empty when an inline map literal is used.
  std::string gallery;
  GalleryParams params;
  std::optional<PiecewiseLinearMap> map;

  MapSequence build() const;
};

struct ProcessSpec {
  std::uint64_t tail_index = 0;
  double x0 = 0.0;
  double delta = 0.0;
  std::size_t horizon = 200;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
};

struct SimulateParams {};

struct RecurrenceParams {
  /// Defaults to process.x0.
  std::optional<double> center;
  double radius = 0.1;
  /// Defaults to horizon / 10.
  std::optional<std::size_t> burn_in;
  std::size_t min_visits = 10;
  /// Defaults to delta * {0.25, 0.5, 0.9}.
  std::vector<double> deltas;
};

struct TrapParams {
  /// [lo, hi] or a list of such intervals.
  Region region;
  /// Defaults to the horizon.
  std::optional<std::size_t> within_steps;
};

struct ChainParams {
  double delta_prime = 0.0;
  double start = 0.0;
  double target_center = 0.0;
  double target_radius = 0.0;
  double spacing = 0.0;
};

struct PeriodicParams {
  std::vector<std::size_t> periods{1};
  double tol = 1e-10;
  std::size_t cells = 0;
  bool classify = true;
};

struct DecomposeParams {
  std::vector<std::size_t> levels{1};
  std::size_t orbit_length = 1000000;
  double tol = 1e-3;
  double start = 0.3819660112501051;
  std::size_t transient = 0;
  double dither = 0.0;
};

struct ShadowParams {
  double epsilon = 0.25;
  /// Inclusive step range; defaults to the last quarter of the horizon.
  std::optional<std::size_t> window_first;
  std::optional<std::size_t> window_last;
  std::size_t max_exponent = 4;
  double tol = 1e-10;
};

struct LiYorkeParams {
  std::size_t pairs = 1000;
  std::size_t horizon = 10000;
  std::size_t tail_begin = 0;
  double liminf = 1e-3;
  double limsup = 1e-1;
  double dither = 1e-13;
};

struct CorridorParams {
  std::size_t steps = 3;
  /// Window half-width as a fraction of delta.
  double ratio = 0.5;
  std::size_t batches = 1000000;
};

using AnalysisParams = std::variant<SimulateParams, RecurrenceParams, TrapParams, ChainParams,
                                    PeriodicParams, DecomposeParams, ShadowParams,
                                    LiYorkeParams, CorridorParams>;

struct OutputSpec {
  std::string json;
  std::string csv;
  std::string svg;
};

struct ExperimentConfig {
  std::string source;
  SequenceSpec sequence;
  ProcessSpec process;
  std::string analysis;
  AnalysisParams params;
  OutputSpec output;

  /// The configuration with every default filled in. Worker count is a
  /// scheduling detail and is deliberately absent.
  Json resolved() const;
};

/// Analysis type names accepted in analysis.type.
const std::vector<std::string>& analysis_types();

ExperimentConfig parse_config(const std::string& text, const std::string& source);
ExperimentConfig load_config(const std::string& path);

}  // namespace pidyn::cli
