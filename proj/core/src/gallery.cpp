#include "pidyn/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pidyn {

PiecewiseLinearMap example1_limit() {
  return PiecewiseLinearMap({0.0, 0.5, 0.75, 1.0}, {0.0, 0.0, 1.0, 1.0});
}

PiecewiseLinearMap example1_map(std::uint64_t n) {
  if (n + 3 > 1074) return example1_limit();
  const int e = static_cast<int>(n);
  const double peak = std::ldexp(1.0, -(e + 3));
  const double foot = std::ldexp(1.0, -(e + 2));
  return PiecewiseLinearMap({0.0, peak, foot, 0.5, 0.75, 1.0}, {0.0, 1.0, 0.0, 0.0, 1.0, 1.0});
}

MapSequence example1_seq() {
  return MapSequence(SequenceKind::example1, example1_map, example1_limit(), "example1");
}

PiecewiseLinearMap tent() { return PiecewiseLinearMap({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}); }

PiecewiseLinearMap truncated_tent(double lambda) {
  if (!(lambda > 0.5 && lambda < 1.0)) {
    throw std::invalid_argument("truncated_tent: lambda must lie in (1/2, 1)");
  }
  const auto t = tent();
  const double t1 = t(lambda);
  const double t2 = t(t1);
  return PiecewiseLinearMap({0.0, t1, 0.5, 1.0}, {t2, t2, 1.0, 0.0});
}

PiecewiseLinearMap remark3_map() {
  return PiecewiseLinearMap({0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, {0.0, 0.0, 0.4, 0.6, 1.0, 1.0});
}

PiecewiseLinearMap contraction() { return PiecewiseLinearMap({0.0, 1.0}, {0.25, 0.75}); }

PiecewiseLinearMap shift_clamped(const PiecewiseLinearMap& f, double c) {
  const auto b = f.breakpoints();
  const auto v = f.values();
  std::vector<double> xs;
  std::vector<double> ys;
  auto push = [&](double x, double y) {
    if (!xs.empty() && x <= xs.back()) return;
    xs.push_back(x);
    ys.push_back(clamp_unit(y));
  };
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    const double a = v[i] + c;
    const double z = v[i + 1] + c;
    push(b[i], a);
    std::vector<double> cuts;
    for (double level : {0.0, 1.0}) {
      if ((a - level) * (z - level) < 0.0) {
        cuts.push_back(b[i] + (level - a) / (z - a) * (b[i + 1] - b[i]));
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (double x : cuts) {
      if (x < b[i + 1]) push(x, a + (z - a) * (x - b[i]) / (b[i + 1] - b[i]));
    }
  }
  xs.push_back(1.0);
  ys.push_back(clamp_unit(v.back() + c));
  return PiecewiseLinearMap(std::move(xs), std::move(ys));
}

MapSequence additive_decay(const PiecewiseLinearMap& limit, double amplitude, double rate,
                           std::string label) {
  if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("decay rate must lie in [0,1)");
  if (!std::isfinite(amplitude)) throw std::invalid_argument("amplitude must be finite");
  auto gen = [limit, amplitude, rate](std::uint64_t n) {
    const double c = amplitude * std::pow(rate, static_cast<double>(n));
    return c == 0.0 ? limit : shift_clamped(limit, c);
  };
  return MapSequence(SequenceKind::additive_decay, gen, limit, std::move(label));
}

namespace {

struct Node {
  double x;
  double y;
};

}  // namespace

Example2Result example2_map(std::size_t depth, double tol, double lambda,
                            std::size_t orbit_length) {
  const auto g = truncated_tent(lambda);
  Example2Result out{g, {}};
  out.report.depth = depth;
  out.report.lambda = lambda;
  if (depth == 0) return out;

  std::vector<std::vector<Interval>> spatial(depth + 2);
  for (std::size_t k = 1; k <= depth + 1; ++k) {
    try {
      const auto dec = decompose_omega(g, k, orbit_length, 1e-9);
      for (std::size_t i : dec.spatial_order()) spatial[k].push_back(dec.hulls[i]);
    } catch (const DecompositionError& e) {
      throw ConstructionError("example2: depth " + std::to_string(depth) + " needs level " +
                              std::to_string(k) + " hulls: " + e.what());
    }
  }

  std::vector<Node> nodes;
  std::vector<Interval> all_intervals;
  for (std::size_t k = 1; k <= depth; ++k) {
    Example2Level level;
    level.k = k;
    level.hulls = spatial[k];
    const std::size_t period = std::size_t{1} << k;
    std::vector<Interval> gaps;
    for (std::size_t i = 0; i < spatial[k].size(); ++i) {
      const Interval& left = spatial[k + 1][2 * i];
      const Interval& right = spatial[k + 1][2 * i + 1];
      if (!spatial[k][i].contains(left) || !spatial[k][i].contains(right)) {
        throw ConstructionError("example2: level " + std::to_string(k + 1) +
                                " hulls are not nested in level " + std::to_string(k) +
                                " hull " + std::to_string(i));
      }
      const Interval gap{left.hi, right.lo};
      PeriodicSearchOptions opt;
      opt.tol = tol;
      opt.domain = gap;
      const auto found = find_periodic_points(g, period, opt);
      if (found.roots.empty()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "example2: no period-" << period << " point in gap (" << gap.lo << ", " << gap.hi
            << ") of level " << k << " hull " << i;
        throw ConstructionError(msg.str());
      }
      // the gap midpoint picks the root if rounding produced neighbours
      const double x = *std::min_element(
          found.roots.begin(), found.roots.end(), [&](double a, double b) {
            return std::abs(a - gap.mid()) < std::abs(b - gap.mid());
          });
      level.points.push_back(x);
      level.residuals.push_back(std::abs(iterate(g, x, period) - x));
      level.point_eps.push_back(std::min(x - gap.lo, gap.hi - x));
    }
    const auto best = std::min_element(level.point_eps.begin(), level.point_eps.end());
    level.eps = *best;
    level.selected = static_cast<std::size_t>(best - level.point_eps.begin());
    if (!(level.eps > 0.0)) {
      throw ConstructionError("example2: level " + std::to_string(k) + " has eps <= 0");
    }

    const double e = level.eps;
    const double s = 0.4 * e;
    for (std::size_t i = 0; i < level.points.size(); ++i) {
      const double x = level.points[i];
      const double c = g(x);
      level.intervals.push_back({x - e, x + e});
      nodes.push_back({x - e, g(x - e)});
      if (i == level.selected) {
        nodes.push_back({x - 0.8 * e, c + s * (2.0 * g(0.0) - 1.0)});
        for (double t : g.breakpoints()) {
          nodes.push_back({x - s + 2.0 * s * t, c + s * (2.0 * g(t) - 1.0)});
        }
        nodes.push_back({x + 0.8 * e, c + s * (2.0 * g(1.0) - 1.0)});
      } else {
        nodes.push_back({x - 0.8 * e, c - 0.8 * e});
        nodes.push_back({x + 0.8 * e, c + 0.8 * e});
      }
      nodes.push_back({x + e, g(x + e)});
    }
    all_intervals.insert(all_intervals.end(), level.intervals.begin(), level.intervals.end());
    out.report.levels.push_back(std::move(level));
  }

  std::sort(all_intervals.begin(), all_intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t j = 0; j + 1 < all_intervals.size(); ++j) {
    if (!(all_intervals[j].hi < all_intervals[j + 1].lo)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "example2: modification intervals [" << all_intervals[j].lo << ", "
          << all_intervals[j].hi << "] and [" << all_intervals[j + 1].lo << ", "
          << all_intervals[j + 1].hi << "] overlap";
      throw ConstructionError(msg.str());
    }
  }
  if (all_intervals.front().lo <= 0.0 || all_intervals.back().hi >= 1.0) {
    throw ConstructionError("example2: modification interval leaves (0,1)");
  }

  for (std::size_t j = 0; j < g.breakpoints().size(); ++j) {
    const double b = g.breakpoints()[j];
    const bool covered = std::any_of(all_intervals.begin(), all_intervals.end(),
                                     [&](const Interval& I) { return I.contains(b); });
    if (!covered) nodes.push_back({b, g.values()[j]});
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.x < b.x; });

  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& n : nodes) {
    if (!xs.empty() && n.x <= xs.back()) {
      throw ConstructionError("example2: breakpoints collide at the working precision");
    }
    if (!(n.y >= 0.0 && n.y <= 1.0)) {
      throw ConstructionError("example2: modified map leaves [0,1]");
    }
    xs.push_back(n.x);
    ys.push_back(n.y);
  }
  out.map = PiecewiseLinearMap(std::move(xs), std::move(ys));
  return out;
}

namespace {

double param(const GalleryParams& p, const std::string& name) { return p.at(name); }

std::size_t depth_param(const GalleryParams& p) {
  const double d = param(p, "depth");
  if (!(d >= 0.0 && d <= 8.0) || d != std::floor(d)) {
    throw std::invalid_argument("depth must be an integer in [0, 8]");
  }
  return static_cast<std::size_t>(d);
}

std::vector<GalleryEntry> make_gallery() {
  std::vector<GalleryEntry> g;
  g.push_back({"example1", true,
               "Spiked sequence converging pointwise but not uniformly to example1_limit; a "
               "tent of height 1 on [0, 1/(4*2^n)] feeds the absorbing branch at 1",
               {},
               [](const GalleryParams&) { return example1_seq(); }});
  g.push_back({"example1_limit", false,
               "Limit of the spiked sequence: 0 on [0,1/2], 4x-2 on [1/2,3/4], 1 on [3/4,1]",
               {},
               [](const GalleryParams&) {
                 return MapSequence::constant(example1_limit(), "example1_limit");
               }});
  g.push_back({"tent", false, "Full tent map 1 - |2x - 1|", {},
               [](const GalleryParams&) { return MapSequence::constant(tent(), "tent"); }});
  g.push_back({"truncated_tent", false,
               "Tent map flattened to tau^2(lambda) on [0, tau(lambda)]; type 2^infinity at "
               "the Feigenbaum parameter",
               {{"lambda", kFeigenbaumLambda, "truncation parameter in (1/2, 1)"}},
               [](const GalleryParams& p) {
                 return MapSequence::constant(truncated_tent(param(p, "lambda")),
                                              "truncated_tent");
               }});
  g.push_back({"remark3", false,
               "Two absorbing plateaus at 0 and 1 separated by a segment of fixed points on "
               "[2/5, 3/5]",
               {},
               [](const GalleryParams&) {
                 return MapSequence::constant(remark3_map(), "remark3");
               }});
  g.push_back({"contraction", false, "Line through (0, 1/4) and (1, 3/4); fixed point 1/2", {},
               [](const GalleryParams&) {
                 return MapSequence::constant(contraction(), "contraction");
               }});
  g.push_back({"contraction_decay", true,
               "Contraction shifted up by amplitude * rate^n, clamped into [0,1]",
               {{"amplitude", 0.2, "initial vertical shift"},
                {"rate", 0.5, "geometric decay rate in [0,1)"}},
               [](const GalleryParams& p) {
                 return additive_decay(contraction(), param(p, "amplitude"), param(p, "rate"),
                                       "contraction_decay");
               }});
  g.push_back({"example2", false,
               "Truncated tent modified around its period-2^k points for k <= depth: a "
               "diminished copy of g on one interval per level, slope-1 translations on the "
               "others",
               {{"depth", 3.0, "construction depth K"},
                {"lambda", kFeigenbaumLambda, "truncation parameter in (1/2, 1)"},
                {"tol", 1e-10, "periodic point tolerance"}},
               [](const GalleryParams& p) {
                 return MapSequence::constant(
                     example2_map(depth_param(p), param(p, "tol"), param(p, "lambda")).map,
                     "example2");
               }});
  return g;
}

}  // namespace

const std::vector<GalleryEntry>& gallery() {
  static const std::vector<GalleryEntry> entries = make_gallery();
  return entries;
}

const GalleryEntry& gallery_entry(std::string_view name) {
  for (const auto& e : gallery()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : gallery()) known += (known.empty() ? "" : ", ") + e.name;
  throw std::invalid_argument("unknown gallery entry '" + std::string(name) + "' (known: " +
                              known + ")");
}

MapSequence build_gallery(std::string_view name, const GalleryParams& params) {
  const auto& entry = gallery_entry(name);
  GalleryParams full;
  for (const auto& p : entry.params) full[p.name] = p.default_value;
  for (const auto& [key, value] : params) {
    if (!full.contains(key)) {
      throw std::invalid_argument("gallery entry '" + entry.name + "' has no parameter '" + key +
                                  "'");
    }
    full[key] = value;
  }
  return entry.construct(full);
}

}  // namespace pidyn
