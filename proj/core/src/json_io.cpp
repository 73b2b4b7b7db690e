#include "pidyn/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pidyn {

namespace {

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write(std::string& out, const Json& v, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        write(out, item, indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        write(out, item, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      write_number(out, v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

Json opt(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json intervals(const std::vector<Interval>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

}  // namespace

std::string dump_json(const Json& value, int indent) {
  std::string out;
  write(out, value, indent, 0);
  out += '\n';
  return out;
}

Json map_to_json(const PiecewiseLinearMap& map) {
  Json j;
  j["breakpoints"] = std::vector<double>(map.breakpoints().begin(), map.breakpoints().end());
  j["values"] = std::vector<double>(map.values().begin(), map.values().end());
  return j;
}

PiecewiseLinearMap map_from_json(const Json& value) {
  if (!value.is_object()) throw std::invalid_argument("map literal must be an object");
  for (const auto& [key, _] : value.items()) {
    if (key != "breakpoints" && key != "values") {
      throw std::invalid_argument("map literal has unknown key '" + key + "'");
    }
  }
  auto read = [&](const char* key) {
    if (!value.contains(key) || !value[key].is_array()) {
      throw std::invalid_argument(std::string("map literal needs an array '") + key + "'");
    }
    std::vector<double> xs;
    for (const auto& e : value[key]) {
      if (!e.is_number()) throw std::invalid_argument(std::string(key) + " must hold numbers");
      xs.push_back(e.get<double>());
    }
    return xs;
  };
  return PiecewiseLinearMap(read("breakpoints"), read("values"));
}

Json to_json(const Interval& interval) { return Json::array({interval.lo, interval.hi}); }

Json to_json(const Region& region) { return intervals(region.parts); }

Json to_json(const Proportion& p) {
  return {{"estimate", p.value()},
          {"stderr", p.standard_error()},
          {"hits", p.hits},
          {"trials", p.trials}};
}

Json to_json(const RecurrenceReport& report) {
  Json rows = Json::array();
  for (const auto& d : report.per_delta) {
    // sparse [visits, trials] pairs
    Json hist = Json::array();
    for (std::size_t v = 0; v < d.visit_histogram.size(); ++v) {
      if (d.visit_histogram[v]) hist.push_back(Json::array({v, d.visit_histogram[v]}));
    }
    rows.push_back({{"delta_prime", d.delta_prime},
                    {"estimate", d.estimate()},
                    {"stderr", d.standard_error()},
                    {"trials", d.qualified.trials},
                    {"r", report.query.min_visits},
                    {"burn_in", report.query.burn_in},
                    {"horizon", report.query.horizon},
                    {"seed", report.seed},
                    {"never_hit", d.never_hit},
                    {"mean_first_hit", d.mean_first_hit},
                    {"mean_return_gap", d.mean_return_gap},
                    {"max_return_gap", d.max_return_gap},
                    {"visit_histogram", hist}});
  }
  return {{"center", report.query.center},
          {"radius", report.query.radius},
          {"tail_index", report.tail_index},
          {"per_delta", rows}};
}

Json to_json(const TrapReport& report) {
  std::size_t never = 0;
  Json exits = Json::array();
  for (std::size_t t = 0; t < report.per_trajectory.size(); ++t) {
    const auto& s = report.per_trajectory[t];
    if (!s.first_entry) ++never;
    if (s.first_exit) {
      exits.push_back({{"trial", t}, {"first_entry", opt(s.first_entry)},
                       {"first_exit", opt(s.first_exit)}});
    }
  }
  return {{"region", to_json(report.region)},
          {"trajectories", report.per_trajectory.size()},
          {"entered", report.entered},
          {"never_entered", never},
          {"exited", report.exited},
          {"trapped", report.trapped()},
          {"exits", exits}};
}

Json to_json(const AbsorptionReport& report) {
  Json j = to_json(report.escape);
  j["within_steps"] = report.within_steps;
  return {{"escape", j}, {"trap", to_json(report.trap)}};
}

Json to_json(const DeltaChain& chain, const ChainCheck& check) {
  return {{"points", chain.points},
          {"delta_prime", chain.delta_prime},
          {"max_link_error", check.max_link_error},
          {"valid", check.valid}};
}

Json to_json(const ChainSearchResult& result, const PiecewiseLinearMap& f) {
  Json j;
  j["found"] = result.chain.has_value();
  j["chain"] = result.chain ? to_json(*result.chain, validate_chain(f, *result.chain))
                            : Json(nullptr);
  j["spacing"] = result.spacing;
  j["nodes_reached"] = result.nodes_reached;
  j["reachable"] = intervals(result.reachable);
  return j;
}

Json to_json(const CorridorCheck& check) {
  return {{"analytic", check.analytic}, {"monte_carlo", to_json(check.estimate)},
          {"agrees", check.agrees}};
}

Json to_json(const PeriodicOrbit& orbit) {
  return {{"period", orbit.period},
          {"points", orbit.points},
          {"label", to_string(orbit.label)},
          {"multiplier", orbit.multiplier},
          {"isolated", orbit.isolated},
          {"inconclusive", orbit.inconclusive}};
}

Json to_json(const PeriodicSearchResult& result) {
  Json orbits = Json::array();
  for (const auto& o : result.orbits) orbits.push_back(to_json(o));
  Json plateaus = Json::array();
  for (const auto& p : result.plateaus) {
    plateaus.push_back({{"interval", to_json(p.span)}, {"period", p.period}});
  }
  return {{"period", result.period},
          {"orbits", orbits},
          {"plateaus", plateaus},
          {"cells", result.cells},
          {"possible_misses", result.possible_misses}};
}

Json to_json(const IntervalDecomposition& dec) {
  return {{"level", dec.level},
          {"hulls", intervals(dec.hulls)},
          {"margin", dec.margin},
          {"invariance_defect", dec.invariance_defect}};
}

Json to_json(const ShadowResult& result) {
  return {{"shadowed", result.shadowed},
          {"orbit_index", result.orbit_index},
          {"phase", result.phase},
          {"sup_error", result.sup_error}};
}

Json to_json(const LiYorkeReport& report) {
  Json flagged = Json::array();
  for (std::size_t p : report.flagged_indices) {
    const auto& s = report.samples[p];
    flagged.push_back(
        {{"x", s.x}, {"y", s.y}, {"min_distance", s.min_distance}, {"max_distance", s.max_distance}});
  }
  return {{"pairs", report.pairs}, {"flagged", report.flagged}, {"flagged_pairs", flagged}};
}

Json to_json(const Example2Report& report) {
  Json levels = Json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"k", l.k},
                      {"points", l.points},
                      {"residuals", l.residuals},
                      {"point_eps", l.point_eps},
                      {"eps", l.eps},
                      {"selected", l.selected},
                      {"intervals", intervals(l.intervals)},
                      {"hulls", intervals(l.hulls)}});
  }
  return {{"depth", report.depth}, {"lambda", report.lambda}, {"levels", levels}};
}

}  // namespace pidyn
