#pragma once

// Seeded simulation of randomly perturbed nonautonomous processes
//
//   X_0 = x0,   X_{n+1} = f_{k+n}(X_n) + xi_n,   xi_n ~ U[-delta, delta)
//
// The noise xi_n of trial t is draw n of counter stream t under the master
// seed, so every trajectory is a pure function of (config, trial).

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "pidyn/maps.hpp"
#include "pidyn/parallel.hpp"
#include "pidyn/rng.hpp"

namespace pidyn {

struct ProcessConfig {
  MapSequence seq = MapSequence::constant(PiecewiseLinearMap::identity());
  std::uint64_t tail_index = 0;
  double x0 = 0.0;
  double delta = 0.0;
  std::size_t horizon = 1;
  std::uint64_t master_seed = 0;

  /// Throws std::invalid_argument on delta < 0, horizon < 1 or x0 outside [0,1].
  void validate() const;
};

/// One realized process. States are stored unclamped so that excursions
/// beyond [0,1] stay visible.
struct Trajectory {
  std::vector<double> states;
  std::uint64_t tail_index = 0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

/// Thrown when a materialized batch would exceed the configured memory cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// xi_n for trial t: uniform on [-delta, delta).
inline double process_noise(std::uint64_t seed, std::uint64_t trial,
                            std::uint64_t step, double delta) {
  return CounterRng(seed, trial).symmetric(step, delta);
}

/// Precomputes the maps f_k ... f_{k+N-1} once and then produces any trial.
class Simulator {
 public:
  explicit Simulator(ProcessConfig cfg);

  const ProcessConfig& config() const { return cfg_; }

  /// Map applied at step n (that is, f_{k+n}).
  const PiecewiseLinearMap& map_at(std::size_t step) const { return *maps_[step]; }

  Trajectory run(std::uint64_t trial) const;

  /// Writes X_0..X_N into states (resized to N+1).
  void run_into(std::uint64_t trial, std::vector<double>& states) const;

 private:
  ProcessConfig cfg_;
  std::vector<MapSequence::MapPtr> maps_;
};

Trajectory simulate(const ProcessConfig& cfg, std::uint64_t trial);

struct BatchOptions {
  unsigned workers = 1;
  /// Upper bound on trials * (horizon + 1) stored states.
  std::size_t max_states = std::size_t{1} << 26;
};

/// Trajectories for trials 0..trials-1, identical for any worker count.
std::vector<Trajectory> simulate_batch(const ProcessConfig& cfg, std::size_t trials,
                                       const BatchOptions& options = {});

/// Streaming alternative to simulate_batch: summarize(trial, states) is called
/// once per trial and its results are returned in trial order. No trajectory
/// outlives its summary, so memory is bounded by the worker count.
template <class Summarize>
auto fold_trials(const Simulator& sim, std::size_t trials, unsigned workers,
                 Summarize&& summarize) {
  using Result = decltype(summarize(std::uint64_t{}, std::span<const double>{}));
  std::vector<Result> results(trials);
  std::vector<std::vector<double>> buffers(std::max(1u, workers));
  parallel_for(trials, workers, [&](std::size_t i, unsigned worker) {
    auto& states = buffers[worker];
    sim.run_into(i, states);
    results[i] = summarize(static_cast<std::uint64_t>(i),
                           std::span<const double>(states));
  });
  return results;
}

/// CSV with header "trial,step,x" and 17 significant digits per value.
void write_trajectories_csv(std::ostream& out, std::span<const Trajectory> trajectories);

/// Parses the CSV written above. Rows must be grouped by trial with steps
/// 0,1,2,... in order; throws std::invalid_argument with a line number
/// otherwise.
std::vector<Trajectory> read_trajectories_csv(std::istream& in);

}  // namespace pidyn
