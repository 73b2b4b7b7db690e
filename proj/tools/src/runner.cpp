#include "pidyn/cli/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pidyn/chains.hpp"
#include "pidyn/cli/svg.hpp"
#include "pidyn/periodic.hpp"
#include "pidyn/recurrence.hpp"
#include "pidyn/stochproc.hpp"

namespace pidyn::cli {

std::string version_string() { return std::string("pidyn ") + PIDYN_VERSION_STRING; }

void write_file(const std::string& path, const std::string& contents) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

namespace {

// Analysis failure carrying structured diagnostics for the report.
struct AnalysisFailure {
  std::string message;
  Json details;
};

struct Context {
  const ExperimentConfig& cfg;
  const RunOptions& opts;
  const MapSequence& seq;

  ProcessConfig process(double x0, double delta) const {
    ProcessConfig p;
    p.seq = seq;
    p.tail_index = cfg.process.tail_index;
    p.x0 = x0;
    p.delta = delta;
    p.horizon = cfg.process.horizon;
    p.master_seed = cfg.process.seed;
    return p;
  }

  // Writes the CSV dump and the trajectory plot (trial 0) when requested.
  void dump_trajectories(const ProcessConfig& p) const {
    if (!cfg.output.csv.empty()) {
      const auto batch = simulate_batch(p, cfg.process.trials, {opts.workers});
      std::ostringstream out;
      write_trajectories_csv(out, batch);
      write_file(cfg.output.csv, out.str());
    }
    if (!cfg.output.svg.empty()) {
      const auto t = simulate(p, 0);
      write_file(cfg.output.svg, trajectory_svg(t.states, "trajectory, trial 0"));
    }
  }

  void plot_map(const PiecewiseLinearMap& f) const {
    if (!cfg.output.svg.empty()) write_file(cfg.output.svg, map_svg(f, "limit map"));
  }

  Json operator()(const SimulateParams&) const {
    const auto p = process(cfg.process.x0, cfg.process.delta);
    const Simulator sim(p);
    struct Summary {
      double last = 0.0, lo = 0.0, hi = 0.0, max_noise = 0.0;
    };
    const auto rows = fold_trials(sim, cfg.process.trials, opts.workers,
                                  [&](std::uint64_t, std::span<const double> xs) {
                                    Summary s{xs.back(), xs[0], xs[0], 0.0};
                                    for (std::size_t n = 0; n + 1 < xs.size(); ++n) {
                                      s.lo = std::min(s.lo, xs[n + 1]);
                                      s.hi = std::max(s.hi, xs[n + 1]);
                                      s.max_noise = std::max(
                                          s.max_noise, std::abs(xs[n + 1] - sim.map_at(n)(xs[n])));
                                    }
                                    return s;
                                  });
    double sum = 0.0, lo = rows[0].lo, hi = rows[0].hi, noise = 0.0;
    for (const auto& r : rows) {
      sum += r.last;
      lo = std::min(lo, r.lo);
      hi = std::max(hi, r.hi);
      noise = std::max(noise, r.max_noise);
    }
    dump_trajectories(p);
    return {{"trajectories", rows.size()},
            {"mean_final_state", sum / static_cast<double>(rows.size())},
            {"min_state", lo},
            {"max_state", hi},
            {"max_noise", noise},
            {"valid", noise <= cfg.process.delta}};
  }

  Json operator()(const RecurrenceParams& r) const {
    RecurrenceQuery q;
    q.center = r.center.value_or(cfg.process.x0);
    q.radius = r.radius;
    q.horizon = cfg.process.horizon;
    q.burn_in = r.burn_in.value_or(cfg.process.horizon / 10);
    q.min_visits = r.min_visits;
    q.deltas = r.deltas.empty() ? default_delta_grid(cfg.process.delta) : r.deltas;
    q.trials = cfg.process.trials;
    const auto report =
        estimate_recurrence(seq, cfg.process.tail_index, q, cfg.process.seed, opts.workers);
    plot_map(seq.limit());
    return to_json(report);
  }

  Json operator()(const TrapParams& t) const {
    const auto p = process(cfg.process.x0, cfg.process.delta);
    const auto report = analyze_absorption(p, t.region, t.within_steps.value_or(p.horizon),
                                           cfg.process.trials, opts.workers);
    dump_trajectories(p);
    return to_json(report);
  }

  Json operator()(const ChainParams& c) const {
    ChainSearchOptions o;
    o.spacing = c.spacing;
    const auto result = find_delta_chain(seq.limit(), c.delta_prime, c.start,
                                         {c.target_center, c.target_radius}, o);
    plot_map(seq.limit());
    return to_json(result, seq.limit());
  }

  Json operator()(const PeriodicParams& p) const {
    const auto& f = seq.limit();
    Json out = Json::array();
    PeriodicSearchOptions o;
    o.tol = p.tol;
    o.cells = p.cells;
    for (std::size_t n : p.periods) {
      auto found = find_periodic_points(f, n, o);
      Json plateau_labels = Json::array();
      if (p.classify) {
        for (auto& orbit : found.orbits) orbit = classify_attractivity(f, orbit);
        PeriodicSearchResult only_plateaus = found;
        only_plateaus.orbits.clear();
        const auto reps = with_plateau_representatives(f, only_plateaus);
        // the midpoint representative is first of each triple
        for (std::size_t i = 0; i < reps.size(); i += 3) {
          plateau_labels.push_back(to_string(classify_attractivity(f, reps[i]).label));
        }
      }
      Json j = to_json(found);
      for (std::size_t i = 0; i < plateau_labels.size(); ++i) {
        j["plateaus"][i]["label"] = plateau_labels[i];
      }
      out.push_back(j);
    }
    plot_map(f);
    return {{"searches", out}};
  }

  Json operator()(const DecomposeParams& d) const {
    const auto& g = seq.limit();
    DecompositionOptions o;
    o.start = d.start;
    o.transient = d.transient;
    o.dither = d.dither;
    o.seed = cfg.process.seed;
    std::vector<std::size_t> levels = d.levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    Json decs = Json::array();
    std::vector<IntervalDecomposition> done;
    for (std::size_t k : levels) {
      try {
        done.push_back(decompose_omega(g, k, d.orbit_length, d.tol, o));
        decs.push_back(to_json(done.back()));
      } catch (const DecompositionError& e) {
        Json hulls = Json::array();
        for (const auto& h : e.hulls()) hulls.push_back(to_json(h));
        throw AnalysisFailure{e.what(), {{"level", k}, {"hulls", hulls}, {"completed", decs}}};
      }
    }
    // parent hull of every hull at the next requested level
    Json nesting = Json::array();
    for (std::size_t j = 0; j + 1 < done.size(); ++j) {
      Json parents = Json::array();
      bool nested = true;
      for (const auto& child : done[j + 1].hulls) {
        Json parent = nullptr;
        for (std::size_t i = 0; i < done[j].hulls.size(); ++i) {
          if (done[j].hulls[i].contains(child)) {
            parent = i;
            break;
          }
        }
        nested = nested && !parent.is_null();
        parents.push_back(parent);
      }
      nesting.push_back({{"level", done[j + 1].level},
                         {"parent_level", done[j].level},
                         {"parents", parents},
                         {"nested", nested}});
    }
    plot_map(g);
    return {{"decompositions", decs}, {"nesting", nesting}};
  }

  Json operator()(const ShadowParams& s) const {
    const auto& f = seq.limit();
    PeriodicSearchOptions o;
    o.tol = s.tol;
    const auto candidates = shadow_candidates(f, s.max_exponent, o);
    if (candidates.empty()) throw AnalysisFailure{"no periodic candidates found", Json::object()};
    const auto p = process(cfg.process.x0, cfg.process.delta);
    const Simulator sim(p);
    const std::size_t first = s.window_first.value_or(p.horizon - p.horizon / 4);
    const std::size_t last = s.window_last.value_or(p.horizon);
    const auto rows = fold_trials(sim, cfg.process.trials, opts.workers,
                                  [&](std::uint64_t, std::span<const double> xs) {
                                    return shadow_test(xs, candidates, s.epsilon, first, last + 1);
                                  });
    std::vector<std::size_t> best(candidates.size(), 0);
    std::size_t passed = 0;
    double worst = 0.0;
    for (const auto& r : rows) {
      if (r.shadowed) ++passed;
      ++best[r.orbit_index];
      worst = std::max(worst, r.sup_error);
    }
    Json cands = Json::array();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      Json c = to_json(candidates[i]);
      c["best_for"] = best[i];
      cands.push_back(c);
    }
    dump_trajectories(p);
    Proportion prop{passed, rows.size()};
    return {{"shadowed", to_json(prop)}, {"worst_sup_error", worst}, {"candidates", cands}};
  }

  Json operator()(const LiYorkeParams& l) const {
    LiYorkeOptions o;
    o.pairs = l.pairs;
    o.horizon = l.horizon;
    o.tail_begin = l.tail_begin;
    o.liminf_threshold = l.liminf;
    o.limsup_threshold = l.limsup;
    o.seed = cfg.process.seed;
    o.dither = l.dither;
    o.workers = opts.workers;
    const auto seq_shifted = seq.tail_shift(cfg.process.tail_index);
    plot_map(seq.limit());
    return to_json(liyorke_scan(seq_shifted, o));
  }

  Json operator()(const CorridorParams& c) const {
    const double delta = cfg.process.delta;
    return to_json(corridor_monte_carlo(c.steps, c.ratio * delta, delta, cfg.process.seed,
                                        c.batches, opts.workers));
  }
};

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  RunOutcome outcome;
  Json& report = outcome.report;
  report["version"] = version_string();
  report["analysis"] = cfg.analysis;
  report["config"] = cfg.resolved();
  try {
    const auto seq = cfg.sequence.build();
    const Context ctx{cfg, options, seq};
    report["result"] = std::visit(ctx, cfg.params);
    report["status"] = "ok";
  } catch (const AnalysisFailure& f) {
    report["status"] = "failed";
    report["error"] = f.message;
    report["diagnostics"] = f.details;
    outcome.exit_code = kExitAnalysis;
  } catch (const std::runtime_error& e) {
    report["status"] = "failed";
    report["error"] = e.what();
    outcome.exit_code = kExitAnalysis;
  } catch (const std::invalid_argument& e) {
    report["status"] = "failed";
    report["error"] = e.what();
    outcome.exit_code = kExitAnalysis;
  }
  if (!cfg.output.json.empty()) write_file(cfg.output.json, dump_json(report));
  return outcome;
}

}  // namespace pidyn::cli
