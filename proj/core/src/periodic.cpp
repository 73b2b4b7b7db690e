#include "pidyn/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pidyn/parallel.hpp"
#include "pidyn/rng.hpp"

namespace pidyn {

std::string to_string(Attractivity a) {
  switch (a) {
    case Attractivity::attractive: return "attractive";
    case Attractivity::repelling: return "repelling";
    case Attractivity::neutral: return "neutral";
    case Attractivity::unclassified: return "unclassified";
  }
  return "unclassified";
}

namespace {

std::vector<std::size_t> proper_divisors(std::size_t n) {
  std::vector<std::size_t> d;
  for (std::size_t i = 1; i < n; ++i) {
    if (n % i == 0) d.push_back(i);
  }
  return d;
}

bool has_smaller_period(const PiecewiseLinearMap& f, double x, std::size_t n, double tol) {
  for (std::size_t d : proper_divisors(n)) {
    if (std::abs(iterate(f, x, d) - x) < 10.0 * tol) return true;
  }
  return false;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Bisection on the sign of g between lo and hi (signs differ, neither zero).
template <class G>
double bisect_sign(G&& g, double lo, double hi) {
  const int s_lo = sign_of(g(lo));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if (sign_of(gm) == s_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Boundary of the zero set between `outside` (|g| > tol) and `inside`.
template <class G>
double bisect_edge(G&& g, double outside, double inside, double tol) {
  for (int it = 0; it < 200 && std::abs(inside - outside) > 1e-3 * tol; ++it) {
    const double mid = 0.5 * (outside + inside);
    if (mid == outside || mid == inside) break;
    if (std::abs(g(mid)) <= tol) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return inside;
}

std::vector<double> orbit_from(const PiecewiseLinearMap& f, double x, std::size_t n,
                               std::span<const double> roots, double match_tol,
                               std::vector<bool>* used) {
  std::vector<double> pts;
  pts.reserve(n);
  double y = x;
  for (std::size_t i = 0; i < n; ++i) {
    double point = y;
    if (!roots.empty()) {
      const auto it = std::lower_bound(roots.begin(), roots.end(), y);
      std::size_t best = roots.size();
      double best_d = match_tol;
      for (auto c : {it, it == roots.begin() ? it : it - 1}) {
        if (c == roots.end()) continue;
        const double d = std::abs(*c - y);
        if (d <= best_d) {
          best_d = d;
          best = static_cast<std::size_t>(c - roots.begin());
        }
      }
      if (best < roots.size()) {
        point = roots[best];
        if (used) (*used)[best] = true;
      }
    }
    pts.push_back(point);
    y = f(y);
  }
  const auto leftmost = std::min_element(pts.begin(), pts.end());
  std::rotate(pts.begin(), leftmost, pts.end());
  return pts;
}

}  // namespace

PeriodicSearchResult find_periodic_points(const PiecewiseLinearMap& f, std::size_t period,
                                          const PeriodicSearchOptions& options) {
  if (period < 1) throw std::invalid_argument("period must be at least 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const Interval dom = options.domain.value_or(Interval{0.0, 1.0});
  if (!(dom.lo >= 0.0 && dom.hi <= 1.0 && dom.lo < dom.hi)) {
    throw std::invalid_argument("search domain must be a non-degenerate sub-interval of [0,1]");
  }
  const double tol = options.tol;

  const double lipschitz =
      std::min(1e6, std::pow(std::max(1.0, f.max_abs_slope()), static_cast<double>(period)));
  std::size_t cells = options.cells;
  if (cells == 0) {
    cells = static_cast<std::size_t>(std::clamp(16.0 * (lipschitz + 1.0), 4096.0, 1048576.0));
  }

  auto g = [&](double x) { return iterate(f, x, period) - x; };
  auto grid = [&](std::size_t i) {
    return i == cells ? dom.hi
                      : dom.lo + (dom.hi - dom.lo) * static_cast<double>(i) /
                                     static_cast<double>(cells);
  };
  const double h = (dom.hi - dom.lo) / static_cast<double>(cells);

  std::vector<double> values(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) values[i] = g(grid(i));
  auto is_zero = [&](std::size_t i) { return std::abs(values[i]) <= tol; };

  PeriodicSearchResult result;
  result.period = period;
  result.cells = cells;
  std::vector<double> raw_roots;

  std::size_t i = 0;
  while (i <= cells) {
    if (is_zero(i)) {
      std::size_t j = i;
      while (j + 1 <= cells && is_zero(j + 1)) ++j;
      if (j - i >= 2) {
        const double lo = i == 0 ? grid(0) : bisect_edge(g, grid(i - 1), grid(i), tol);
        const double hi = j == cells ? grid(cells) : bisect_edge(g, grid(j + 1), grid(j), tol);
        const double mid = 0.5 * (lo + hi);
        if (!has_smaller_period(f, mid, period, tol)) {
          result.plateaus.push_back({{lo, hi}, period});
        }
      } else if (i > 0 && j < cells && sign_of(values[i - 1]) != sign_of(values[j + 1])) {
        raw_roots.push_back(bisect_sign(g, grid(i - 1), grid(j + 1)));
      } else {
        raw_roots.push_back(0.5 * (grid(i) + grid(j)));
      }
      i = j + 1;
      continue;
    }
    if (i < cells && !is_zero(i + 1)) {
      if (sign_of(values[i]) != sign_of(values[i + 1])) {
        raw_roots.push_back(bisect_sign(g, grid(i), grid(i + 1)));
      } else if (std::abs(values[i]) + std::abs(values[i + 1]) <= (lipschitz + 1.0) * h) {
        ++result.possible_misses;
      }
    }
    ++i;
  }

  std::sort(raw_roots.begin(), raw_roots.end());
  for (double r : raw_roots) {
    if (!result.roots.empty() && r - result.roots.back() <= tol) continue;
    if (has_smaller_period(f, r, period, tol)) continue;
    result.roots.push_back(r);
  }

  const double match_tol = std::max(1e3 * tol, 1e-9);
  std::vector<bool> used(result.roots.size(), false);
  for (std::size_t r = 0; r < result.roots.size(); ++r) {
    if (used[r]) continue;
    used[r] = true;
    PeriodicOrbit orbit;
    orbit.period = period;
    orbit.points = orbit_from(f, result.roots[r], period, result.roots, match_tol, &used);
    result.orbits.push_back(std::move(orbit));
  }
  return result;
}

double orbit_multiplier(const PiecewiseLinearMap& f, const PeriodicOrbit& orbit,
                        double fd_step) {
  const double x = orbit.points.at(0);
  const std::size_t n = orbit.period;
  const double h = fd_step;
  if (x - h < 0.0) return (iterate(f, x + h, n) - iterate(f, x, n)) / h;
  if (x + h > 1.0) return (iterate(f, x, n) - iterate(f, x - h, n)) / h;
  return (iterate(f, x + h, n) - iterate(f, x - h, n)) / (2.0 * h);
}

PeriodicOrbit classify_attractivity(const PiecewiseLinearMap& f, PeriodicOrbit orbit,
                                    const AttractivityProbe& probe) {
  if (orbit.points.empty()) throw std::invalid_argument("orbit has no points");
  const double p = orbit.points[0];
  const std::size_t half = std::max<std::size_t>(1, probe.samples / 2);

  bool all_converge = true;
  bool all_leave = true;
  std::size_t probed = 0;
  for (std::size_t j = 1; j <= half; ++j) {
    for (double side : {-1.0, 1.0}) {
      const double y0 = clamp_unit(p + side * probe.radius * static_cast<double>(j) /
                                           static_cast<double>(half));
      if (y0 == p) continue;
      ++probed;
      double y = y0;
      bool left = false;
      for (std::size_t s = 0; s < probe.steps; ++s) {
        y = iterate(f, y, orbit.period);
        if (std::abs(y - p) >= probe.radius) left = true;
      }
      // a sample that left and came back is not counted as attracted: dyadic
      // maps such as the tent send every double to 0 after ~55 doublings
      all_converge = all_converge && !left && std::abs(y - p) < probe.tol;
      all_leave = all_leave && left;
    }
  }
  if (probed == 0) all_converge = all_leave = false;

  orbit.multiplier = orbit_multiplier(f, orbit, probe.fd_step);
  const double m = std::abs(orbit.multiplier);
  if (all_converge) {
    orbit.label = Attractivity::attractive;
  } else if (all_leave) {
    orbit.label = Attractivity::repelling;
  } else {
    orbit.label = Attractivity::neutral;
  }
  orbit.inconclusive = (orbit.label == Attractivity::attractive && m > 1.0 + 1e-6) ||
                       (orbit.label == Attractivity::repelling && m < 1.0 - 1e-6);
  if (std::abs(m - 1.0) <= 1e-6) orbit.label = Attractivity::neutral;
  return orbit;
}

std::vector<std::size_t> IntervalDecomposition::spatial_order() const {
  std::vector<std::size_t> idx(hulls.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return hulls[a].lo < hulls[b].lo; });
  return idx;
}

IntervalDecomposition decompose_omega(const PiecewiseLinearMap& g, std::size_t level,
                                      std::size_t orbit_length, double tol,
                                      const DecompositionOptions& options) {
  if (level > 20) throw std::invalid_argument("decomposition level too large");
  const std::size_t clusters = std::size_t{1} << level;
  const std::size_t transient = options.transient ? options.transient : orbit_length / 10;
  if (orbit_length <= transient || orbit_length - transient < 4 * clusters) {
    throw std::invalid_argument("orbit too short for 2^level clusters after the transient");
  }

  const CounterRng dither(derive_seed(options.seed, "decompose-dither"), 0);
  auto step = [&](double x, std::size_t n) {
    double y = g(x);
    if (options.dither > 0.0) y = clamp_unit(y + dither.symmetric(n, options.dither));
    return y;
  };

  std::vector<double> tail;
  tail.reserve(orbit_length - transient + 1);
  double x = clamp_unit(options.start);
  for (std::size_t n = 1; n <= orbit_length; ++n) {
    x = step(x, n);
    if (n > transient) tail.push_back(x);
  }

  std::vector<Interval> by_residue(clusters, {std::numeric_limits<double>::infinity(),
                                              -std::numeric_limits<double>::infinity()});
  for (std::size_t t = 0; t < tail.size(); ++t) {
    auto& hull = by_residue[(transient + 1 + t) % clusters];
    hull.lo = std::min(hull.lo, tail[t]);
    hull.hi = std::max(hull.hi, tail[t]);
  }
  std::size_t anchor = 0;
  for (std::size_t r = 1; r < clusters; ++r) {
    if (by_residue[r].lo < by_residue[anchor].lo) anchor = r;
  }

  IntervalDecomposition dec;
  dec.level = level;
  for (std::size_t i = 0; i < clusters; ++i) dec.hulls.push_back(by_residue[(anchor + i) % clusters]);

  dec.margin = std::numeric_limits<double>::infinity();
  const auto order = dec.spatial_order();
  for (std::size_t j = 0; j + 1 < order.size(); ++j) {
    dec.margin = std::min(dec.margin, dec.hulls[order[j + 1]].lo - dec.hulls[order[j]].hi);
  }
  if (!(dec.margin > 0.0)) {
    throw DecompositionError("level " + std::to_string(level) +
                                 " clusters overlap (minimum gap " + std::to_string(dec.margin) +
                                 "); the orbit does not separate into 2^level portions",
                             dec.hulls);
  }

  // g maps each sampled portion into the next hull (checked on every tail
  // point, including the image of the last one).
  for (std::size_t t = 0; t < tail.size(); ++t) {
    const std::size_t i = ((transient + 1 + t) % clusters + clusters - anchor) % clusters;
    const Interval& next = dec.hulls[dec.successor(i)];
    const double y = g(tail[t]);
    const double out = std::max({next.lo - y, y - next.hi, 0.0});
    dec.invariance_defect = std::max(dec.invariance_defect, out);
  }
  if (dec.invariance_defect > tol) {
    throw DecompositionError("level " + std::to_string(level) +
                                 " portions are not mapped into their successors (defect " +
                                 std::to_string(dec.invariance_defect) + ")",
                             dec.hulls);
  }
  return dec;
}

ShadowResult shadow_test(std::span<const double> states,
                         std::span<const PeriodicOrbit> candidates, double epsilon,
                         std::size_t window_begin, std::size_t window_end) {
  if (window_begin >= window_end || window_end > states.size()) {
    throw std::invalid_argument("shadowing window must be a non-empty step range inside the trajectory");
  }
  ShadowResult best;
  best.sup_error = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& orbit = candidates[c];
    const std::size_t n = orbit.points.size();
    if (n == 0) continue;
    for (std::size_t phase = 0; phase < n; ++phase) {
      double sup = 0.0;
      for (std::size_t m = window_begin; m < window_end && sup < best.sup_error; ++m) {
        sup = std::max(sup, std::abs(states[m] - orbit.points[(phase + m) % n]));
      }
      if (sup < best.sup_error) {
        best.sup_error = sup;
        best.orbit_index = c;
        best.phase = phase;
      }
    }
  }
  best.shadowed = best.sup_error < epsilon;
  return best;
}

std::vector<PeriodicOrbit> with_plateau_representatives(const PiecewiseLinearMap& f,
                                                        const PeriodicSearchResult& found) {
  std::vector<PeriodicOrbit> out = found.orbits;
  for (const auto& plateau : found.plateaus) {
    for (double rep : {plateau.span.mid(), plateau.span.lo, plateau.span.hi}) {
      PeriodicOrbit orbit;
      orbit.period = plateau.period;
      orbit.isolated = false;
      orbit.points = orbit_from(f, rep, plateau.period, {}, 0.0, nullptr);
      out.push_back(std::move(orbit));
    }
  }
  return out;
}

std::vector<PeriodicOrbit> shadow_candidates(const PiecewiseLinearMap& f,
                                             std::size_t max_exponent,
                                             const PeriodicSearchOptions& options) {
  std::vector<PeriodicOrbit> out;
  for (std::size_t e = 0; e <= max_exponent; ++e) {
    const auto found = find_periodic_points(f, std::size_t{1} << e, options);
    auto reps = with_plateau_representatives(f, found);
    out.insert(out.end(), reps.begin(), reps.end());
  }
  return out;
}

LiYorkeReport liyorke_scan(const MapSequence& seq, const LiYorkeOptions& options) {
  if (options.horizon < 100) throw std::invalid_argument("Li-Yorke scan needs horizon >= 100");
  if (options.pairs < 1) throw std::invalid_argument("Li-Yorke scan needs at least one pair");
  const std::size_t tail = options.tail_begin ? options.tail_begin : options.horizon / 2;
  if (tail >= options.horizon) throw std::invalid_argument("tail window is empty");

  const auto maps = seq.window(0, options.horizon);
  const CounterRng sampler(derive_seed(options.seed, "liyorke-pairs"), 0);
  const std::uint64_t dither_key = derive_seed(options.seed, "liyorke-dither");

  LiYorkeReport report;
  report.pairs = options.pairs;
  report.samples.resize(options.pairs);
  parallel_for(options.pairs, options.workers, [&](std::size_t p, unsigned) {
    LiYorkePair pair;
    pair.x = sampler.uniform(2 * p);
    pair.y = sampler.uniform(2 * p + 1);
    const CounterRng dx(dither_key, 2 * p);
    const CounterRng dy(dither_key, 2 * p + 1);
    double x = pair.x;
    double y = pair.y;
    pair.min_distance = std::numeric_limits<double>::infinity();
    pair.max_distance = 0.0;
    for (std::size_t n = 0; n < options.horizon; ++n) {
      x = (*maps[n])(x);
      y = (*maps[n])(y);
      if (options.dither > 0.0) {
        x += dx.symmetric(n, options.dither);
        y += dy.symmetric(n, options.dither);
      }
      if (n >= tail) {
        const double d = std::abs(x - y);
        pair.min_distance = std::min(pair.min_distance, d);
        pair.max_distance = std::max(pair.max_distance, d);
      }
    }
    report.samples[p] = pair;
  });
  for (std::size_t p = 0; p < report.samples.size(); ++p) {
    const auto& s = report.samples[p];
    if (s.min_distance < options.liminf_threshold && s.max_distance > options.limsup_threshold) {
      report.flagged_indices.push_back(p);
    }
  }
  report.flagged = report.flagged_indices.size();
  return report;
}

}  // namespace pidyn
