#include "pidyn/recurrence.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace pidyn {

double Proportion::standard_error() const {
  if (trials == 0) return 0.0;
  const double p = value();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

void RecurrenceQuery::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("recurrence radius must be positive");
  if (min_visits < 1) throw std::invalid_argument("min_visits must be at least 1");
  if (burn_in >= horizon) throw std::invalid_argument("burn_in must be smaller than horizon");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (!(center >= 0.0 && center <= 1.0)) {
    throw std::invalid_argument("recurrence center must lie in [0,1]");
  }
  if (deltas.empty()) throw std::invalid_argument("delta' grid is empty");
  for (double d : deltas) {
    // delta' = 0 is the noiseless orbit and is allowed as a degenerate case
    if (!(d >= 0.0) || !std::isfinite(d)) {
      throw std::invalid_argument("delta' must be finite and non-negative, got " +
                                  std::to_string(d));
    }
  }
}

std::vector<double> default_delta_grid(double delta) {
  return {0.25 * delta, 0.5 * delta, 0.9 * delta};
}

double DeltaRecurrence::estimate_at(std::size_t r) const {
  const std::size_t total = std::accumulate(visit_histogram.begin(), visit_histogram.end(),
                                            std::size_t{0});
  if (total == 0) return 0.0;
  std::size_t at_least = 0;
  for (std::size_t v = std::min(r, visit_histogram.size()); v < visit_histogram.size(); ++v) {
    at_least += visit_histogram[v];
  }
  return static_cast<double>(at_least) / static_cast<double>(total);
}

namespace {

struct VisitSummary {
  std::size_t visits_after_burn_in = 0;
  std::size_t first_hit = 0;  // 0 = never
  std::size_t gap_count = 0;
  std::size_t gap_sum = 0;
  std::size_t gap_max = 0;
};

VisitSummary summarize_visits(std::span<const double> states, Ball ball,
                              std::size_t burn_in) {
  VisitSummary s;
  std::size_t last = 0;
  for (std::size_t n = 1; n < states.size(); ++n) {
    if (!ball.contains(states[n])) continue;
    if (n > burn_in) ++s.visits_after_burn_in;
    if (s.first_hit == 0) {
      s.first_hit = n;
    } else {
      const std::size_t gap = n - last;
      ++s.gap_count;
      s.gap_sum += gap;
      s.gap_max = std::max(s.gap_max, gap);
    }
    last = n;
  }
  return s;
}

}  // namespace

RecurrenceReport estimate_recurrence(const MapSequence& seq, std::uint64_t tail_index,
                                     const RecurrenceQuery& query, std::uint64_t seed,
                                     unsigned workers) {
  query.validate();
  RecurrenceReport report;
  report.query = query;
  report.tail_index = tail_index;
  report.seed = seed;
  const Ball ball{query.center, query.radius};

  for (double dp : query.deltas) {
    ProcessConfig cfg;
    cfg.seq = seq;
    cfg.tail_index = tail_index;
    cfg.x0 = query.center;
    cfg.delta = dp;
    cfg.horizon = query.horizon;
    cfg.master_seed = seed;
    const Simulator sim(cfg);
    const auto summaries = fold_trials(sim, query.trials, workers,
                                       [&](std::uint64_t, std::span<const double> states) {
                                         return summarize_visits(states, ball, query.burn_in);
                                       });

    DeltaRecurrence out;
    out.delta_prime = dp;
    out.visit_histogram.assign(query.horizon - query.burn_in + 1, 0);
    out.qualified.trials = summaries.size();
    std::size_t hit_count = 0, first_hit_sum = 0, gap_count = 0, gap_sum = 0;
    for (const auto& s : summaries) {
      ++out.visit_histogram[s.visits_after_burn_in];
      if (s.visits_after_burn_in >= query.min_visits) ++out.qualified.hits;
      if (s.first_hit == 0) {
        ++out.never_hit;
      } else {
        ++hit_count;
        first_hit_sum += s.first_hit;
      }
      gap_count += s.gap_count;
      gap_sum += s.gap_sum;
      out.max_return_gap = std::max(out.max_return_gap, s.gap_max);
    }
    out.mean_first_hit = hit_count ? static_cast<double>(first_hit_sum) / hit_count : 0.0;
    out.mean_return_gap = gap_count ? static_cast<double>(gap_sum) / gap_count : 0.0;
    report.per_delta.push_back(std::move(out));
  }
  return report;
}

TrapStatus trap_status(std::span<const double> states, const Region& region) {
  TrapStatus status;
  for (std::size_t n = 0; n < states.size(); ++n) {
    const bool inside = region.contains(states[n]);
    if (!status.first_entry) {
      if (inside) status.first_entry = n;
    } else if (!inside) {
      status.first_exit = n;
      break;
    }
  }
  return status;
}

namespace {

void tally(TrapReport& report) {
  for (const auto& s : report.per_trajectory) {
    if (s.first_entry) ++report.entered;
    if (s.first_exit) ++report.exited;
  }
}

}  // namespace

TrapReport detect_trap(std::span<const Trajectory> trajectories, const Region& region) {
  TrapReport report;
  report.region = region;
  report.per_trajectory.reserve(trajectories.size());
  for (const auto& t : trajectories) report.per_trajectory.push_back(trap_status(t.states, region));
  tally(report);
  return report;
}

Proportion escape_probability(const MapSequence& seq, std::uint64_t tail_index, double x0,
                              double delta, const Region& region, std::size_t within_steps,
                              std::size_t trials, std::uint64_t seed, unsigned workers) {
  if (within_steps < 1) throw std::invalid_argument("within_steps must be at least 1");
  ProcessConfig cfg;
  cfg.seq = seq;
  cfg.tail_index = tail_index;
  cfg.x0 = x0;
  cfg.delta = delta;
  cfg.horizon = within_steps;
  cfg.master_seed = seed;
  return analyze_absorption(cfg, region, within_steps, trials, workers).escape;
}

AbsorptionReport analyze_absorption(const ProcessConfig& cfg, const Region& region,
                                    std::size_t within_steps, std::size_t trials,
                                    unsigned workers) {
  if (within_steps < 1) throw std::invalid_argument("within_steps must be at least 1");
  if (within_steps > cfg.horizon) {
    throw std::invalid_argument("within_steps exceeds the simulated horizon");
  }
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const Simulator sim(cfg);
  AbsorptionReport report;
  report.within_steps = within_steps;
  report.trap.region = region;
  report.trap.per_trajectory =
      fold_trials(sim, trials, workers, [&](std::uint64_t, std::span<const double> states) {
        return trap_status(states, region);
      });
  tally(report.trap);
  report.escape.trials = trials;
  for (const auto& s : report.trap.per_trajectory) {
    if (s.first_entry && *s.first_entry <= within_steps) ++report.escape.hits;
  }
  return report;
}

}  // namespace pidyn
