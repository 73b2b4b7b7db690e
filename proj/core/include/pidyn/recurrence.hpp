#pragma once

// Finite-horizon Monte Carlo proxies for stochastic recurrence, absorbing
// regions and escape probabilities.
//
// "X_n visits U infinitely often" is not finitely checkable. A trial counts as
// recurrent when it makes at least r visits to the open ball U at steps in
// (B, N]. The survival function of the visit count is reported as well, so
// the estimate for any r' <= r can be read off the same report.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pidyn/maps.hpp"
#include "pidyn/stochproc.hpp"

namespace pidyn {

/// Open ball B(center, radius).
struct Ball {
  double center = 0.0;
  double radius = 0.0;
  bool contains(double x) const { return std::abs(x - center) < radius; }
};

/// Binomial proportion with its Wald standard error sqrt(p(1-p)/M).
struct Proportion {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double value() const { return trials ? static_cast<double>(hits) / trials : 0.0; }
  double standard_error() const;
};

struct RecurrenceQuery {
  double center = 0.0;
  double radius = 0.1;
  std::size_t burn_in = 0;
  std::size_t min_visits = 10;
  std::size_t horizon = 1000;
  std::vector<double> deltas;
  std::size_t trials = 10000;

  /// Throws std::invalid_argument on radius <= 0, min_visits < 1,
  /// burn_in >= horizon, an empty delta grid or a negative/NaN delta'.
  void validate() const;
};

/// Default delta' grid: delta * {0.25, 0.5, 0.9}.
std::vector<double> default_delta_grid(double delta);

struct DeltaRecurrence {
  double delta_prime = 0.0;
  Proportion qualified;
  /// visit_histogram[v] = number of trials with exactly v visits after burn-in.
  std::vector<std::size_t> visit_histogram;
  /// Trials that never entered U at any step >= 1.
  std::size_t never_hit = 0;
  double mean_first_hit = 0.0;  // over trials that hit
  double mean_return_gap = 0.0; // over all consecutive visit pairs
  std::size_t max_return_gap = 0;

  double estimate() const { return qualified.value(); }
  double standard_error() const { return qualified.standard_error(); }
  /// Fraction of trials with at least r visits after burn-in.
  double estimate_at(std::size_t r) const;
};

struct RecurrenceReport {
  RecurrenceQuery query;
  std::uint64_t tail_index = 0;
  std::uint64_t seed = 0;
  std::vector<DeltaRecurrence> per_delta;
};

/// Runs query.trials processes per delta' starting at query.center (the
/// queried point) under seq shifted by tail_index.
RecurrenceReport estimate_recurrence(const MapSequence& seq, std::uint64_t tail_index,
                                     const RecurrenceQuery& query, std::uint64_t seed,
                                     unsigned workers = 1);

/// Finite union of closed intervals.
struct Region {
  std::vector<Interval> parts;

  Region() = default;
  Region(Interval single) : parts{single} {}  // NOLINT(google-explicit-constructor)
  explicit Region(std::vector<Interval> intervals) : parts(std::move(intervals)) {}

  bool contains(double x) const {
    for (const auto& p : parts) {
      if (p.contains(x)) return true;
    }
    return false;
  }
};

struct TrapStatus {
  std::optional<std::size_t> first_entry;
  std::optional<std::size_t> first_exit;  // first step outside after entering
  bool stays() const { return !first_exit.has_value(); }
};

struct TrapReport {
  Region region;
  std::vector<TrapStatus> per_trajectory;
  std::size_t entered = 0;
  std::size_t exited = 0;
  /// True iff no trajectory ever leaves the region after entering it.
  bool trapped() const { return exited == 0; }
};

TrapStatus trap_status(std::span<const double> states, const Region& region);

TrapReport detect_trap(std::span<const Trajectory> trajectories, const Region& region);

/// Fraction of trials with X_n in region for some n <= within_steps.
Proportion escape_probability(const MapSequence& seq, std::uint64_t tail_index,
                              double x0, double delta, const Region& region,
                              std::size_t within_steps, std::size_t trials,
                              std::uint64_t seed, unsigned workers = 1);

/// Escape estimate within within_steps and trap statistics over the whole
/// horizon, from one streaming pass over the trials.
struct AbsorptionReport {
  Proportion escape;
  std::size_t within_steps = 0;
  TrapReport trap;
};

AbsorptionReport analyze_absorption(const ProcessConfig& cfg, const Region& region,
                                    std::size_t within_steps, std::size_t trials,
                                    unsigned workers = 1);

}  // namespace pidyn
