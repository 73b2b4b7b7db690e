#include "pidyn/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace pidyn::cli {

ConfigError::ConfigError(const std::string& source, int line, int column,
                         const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ":" +
                                        std::to_string(column) + ": " + message
                                  : source + ": " + message),
      line_(line),
      column_(column) {}

MapSequence SequenceSpec::build() const {
  if (map) return MapSequence::constant(*map, "inline");
  return build_gallery(gallery, params);
}

const std::vector<std::string>& analysis_types() {
  static const std::vector<std::string> types{"simulate", "recurrence", "trap",
                                              "chain",    "periodic",   "decompose",
                                              "shadow",   "liyorke",    "corridor"};
  return types;
}

namespace {

// Mapping section with key bookkeeping: finish() rejects keys never read.
class Section {
 public:
  Section(YAML::Node node, const std::string& source, std::string name)
      : node_(std::move(node)), source_(source), name_(std::move(name)) {
    if (!node_.IsMap()) throw error(node_, "section '" + name_ + "' must be a mapping");
  }

  ConfigError error(const YAML::Node& at, const std::string& msg) const {
    const auto mark = at.Mark();
    if (mark.is_null()) return ConfigError(source_, 0, 0, msg);
    return ConfigError(source_, mark.line + 1, mark.column + 1, msg);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return static_cast<bool>(node_[key]);
  }

  YAML::Node raw(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto n = raw(key);
    if (!n) {
      if (fallback) return *fallback;
      throw error(node_, name_ + "." + key + " is required");
    }
    return as_number(n, key);
  }

  std::optional<double> maybe_number(const std::string& key) {
    const auto n = raw(key);
    if (!n) return std::nullopt;
    return as_number(n, key);
  }

  std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt,
                    std::size_t min = 0) {
    const auto n = raw(key);
    if (!n) {
      if (fallback) return *fallback;
      throw error(node_, name_ + "." + key + " is required");
    }
    return as_count(n, key, min);
  }

  std::optional<std::size_t> maybe_count(const std::string& key, std::size_t min = 0) {
    const auto n = raw(key);
    if (!n) return std::nullopt;
    return as_count(n, key, min);
  }

  std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
    const auto n = raw(key);
    if (!n) {
      if (fallback) return *fallback;
      throw error(node_, name_ + "." + key + " is required");
    }
    if (!n.IsScalar()) throw error(n, name_ + "." + key + " must be a string");
    return n.Scalar();
  }

  std::uint64_t seed(const std::string& key) {
    const auto n = raw(key);
    if (!n) return 0;
    try {
      if (!n.IsScalar() || n.Scalar().starts_with("-")) throw YAML::Exception(n.Mark(), "");
      return n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      throw error(n, name_ + "." + key + " must be an unsigned 64-bit integer");
    }
  }

  bool flag(const std::string& key, bool fallback) {
    const auto n = raw(key);
    if (!n) return fallback;
    try {
      return n.as<bool>();
    } catch (const YAML::Exception&) {
      throw error(n, name_ + "." + key + " must be true or false");
    }
  }

  std::vector<double> numbers(const std::string& key) {
    const auto n = raw(key);
    if (!n) return {};
    if (!n.IsSequence()) throw error(n, name_ + "." + key + " must be a list of numbers");
    std::vector<double> out;
    for (const auto& e : n) out.push_back(as_number(e, key));
    return out;
  }

  Region region(const std::string& key) {
    const auto n = raw(key);
    if (!n) throw error(node_, name_ + "." + key + " is required");
    auto pair = [&](const YAML::Node& e) {
      if (!e.IsSequence() || e.size() != 2) {
        throw error(e, name_ + "." + key + " intervals must be [lo, hi]");
      }
      const Interval iv{as_number(e[0], key), as_number(e[1], key)};
      if (!(iv.lo <= iv.hi)) throw error(e, name_ + "." + key + " needs lo <= hi");
      return iv;
    };
    if (!n.IsSequence() || n.size() == 0) {
      throw error(n, name_ + "." + key + " must be [lo, hi] or a list of [lo, hi]");
    }
    if (!n[0].IsSequence()) return Region(pair(n));
    std::vector<Interval> parts;
    for (const auto& e : n) parts.push_back(pair(e));
    return Region(std::move(parts));
  }

  std::vector<std::size_t> counts(const std::string& key, std::size_t min) {
    const auto n = raw(key);
    if (!n) return {};
    if (n.IsScalar()) return {as_count(n, key, min)};
    if (!n.IsSequence()) throw error(n, name_ + "." + key + " must be an integer or a list");
    std::vector<std::size_t> out;
    for (const auto& e : n) out.push_back(as_count(e, key, min));
    return out;
  }

  void require(bool ok, const std::string& key, const std::string& msg) {
    if (ok) return;
    const auto n = node_[key];
    throw error(n ? n : node_, name_ + "." + key + " " + msg);
  }

  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.Scalar();
      if (!seen_.contains(key)) {
        throw error(kv.first, "unknown key '" + key + "' in section '" + name_ + "'");
      }
    }
  }

  const YAML::Node& node() const { return node_; }
  const std::string& source() const { return source_; }

 private:
  double as_number(const YAML::Node& n, const std::string& key) const {
    double v = 0.0;
    try {
      if (!n.IsScalar()) throw YAML::Exception(n.Mark(), "not a scalar");
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      throw error(n, name_ + "." + key + " must be a number");
    }
    if (!std::isfinite(v)) throw error(n, name_ + "." + key + " must be finite");
    return v;
  }

  std::size_t as_count(const YAML::Node& n, const std::string& key, std::size_t min) const {
    const double v = as_number(n, key);
    if (v != std::floor(v) || v < static_cast<double>(min) || v > 9007199254740992.0) {
      throw error(n, name_ + "." + key + " must be an integer >= " + std::to_string(min));
    }
    return static_cast<std::size_t>(v);
  }

  YAML::Node node_;
  std::string source_;
  std::string name_;
  std::set<std::string> seen_;
};

void check_unit(Section& s, const std::string& key, double v) {
  s.require(v >= 0.0 && v <= 1.0, key, "must lie in [0,1]");
}

SequenceSpec parse_sequence(Section s) {
  SequenceSpec spec;
  const bool has_gallery = s.has("gallery");
  const bool has_map = s.has("map");
  if (has_gallery == has_map) {
    throw s.error(s.node(), "sequence needs exactly one of 'gallery' or 'map'");
  }
  if (has_map) {
    const auto m = s.raw("map");
    Section lit(m, s.source(), "sequence.map");
    try {
      spec.map = PiecewiseLinearMap(lit.numbers("breakpoints"), lit.numbers("values"));
      lit.finish();
    } catch (const std::invalid_argument& e) {
      throw s.error(m, std::string("invalid map literal: ") + e.what());
    }
    if (s.has("params")) throw s.error(s.raw("params"), "params apply to gallery entries only");
  } else {
    spec.gallery = s.text("gallery");
    try {
      const auto& entry = gallery_entry(spec.gallery);
      if (s.has("params")) {
        Section p(s.raw("params"), s.source(), "sequence.params");
        for (const auto& decl : entry.params) {
          if (p.has(decl.name)) spec.params[decl.name] = p.number(decl.name);
        }
        p.finish();
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw s.error(s.raw("gallery"), e.what());
    }
  }
  s.finish();
  return spec;
}

ProcessSpec parse_process(Section s) {
  ProcessSpec p;
  p.tail_index = s.count("tail_index", 0);
  p.x0 = s.number("x0", 0.0);
  check_unit(s, "x0", p.x0);
  p.delta = s.number("delta", 0.0);
  s.require(p.delta >= 0.0, "delta", "must be non-negative");
  p.horizon = s.count("horizon", 200, 1);
  p.trials = s.count("trials", 1000, 1);
  p.seed = s.seed("seed");
  s.finish();
  return p;
}

AnalysisParams parse_analysis(Section& s, const std::string& type, const ProcessSpec& proc) {
  if (type == "simulate") return SimulateParams{};
  if (type == "recurrence") {
    RecurrenceParams r;
    r.center = s.maybe_number("center");
    if (r.center) check_unit(s, "center", *r.center);
    r.radius = s.number("radius", 0.1);
    s.require(r.radius > 0.0, "radius", "must be positive");
    r.burn_in = s.maybe_count("burn_in");
    s.require(r.burn_in.value_or(proc.horizon / 10) < proc.horizon, "burn_in",
              "must be smaller than process.horizon");
    r.min_visits = s.count("min_visits", 10, 1);
    r.deltas = s.numbers("deltas");
    for (double d : r.deltas) s.require(d >= 0.0, "deltas", "must be non-negative");
    if (r.deltas.empty()) {
      s.require(proc.delta > 0.0 || s.has("deltas"), "deltas",
                "must be given when process.delta is 0");
    }
    return r;
  }
  if (type == "trap") {
    TrapParams t;
    t.region = s.region("region");
    t.within_steps = s.maybe_count("within_steps", 1);
    s.require(t.within_steps.value_or(proc.horizon) <= proc.horizon, "within_steps",
              "must not exceed process.horizon");
    return t;
  }
  if (type == "chain") {
    ChainParams c;
    c.delta_prime = s.number("delta_prime");
    s.require(c.delta_prime > 0.0, "delta_prime", "must be positive");
    c.start = s.number("start");
    check_unit(s, "start", c.start);
    c.target_center = s.number("target_center");
    c.target_radius = s.number("target_radius");
    s.require(c.target_radius > 0.0, "target_radius", "must be positive");
    c.spacing = s.number("spacing", 0.0);
    s.require(c.spacing >= 0.0 && (c.spacing == 0.0 || c.spacing < c.delta_prime / 2.0),
              "spacing", "must be 0 (default) or below delta_prime / 2");
    return c;
  }
  if (type == "periodic") {
    PeriodicParams p;
    if (s.has("periods")) p.periods = s.counts("periods", 1);
    s.require(!p.periods.empty(), "periods", "must not be empty");
    for (auto n : p.periods) s.require(n <= 64, "periods", "must be at most 64");
    p.tol = s.number("tol", 1e-10);
    s.require(p.tol > 0.0, "tol", "must be positive");
    p.cells = s.count("cells", 0);
    s.require(p.cells <= (std::size_t{1} << 24), "cells", "must be at most 2^24");
    p.classify = s.flag("classify", true);
    return p;
  }
  if (type == "decompose") {
    DecomposeParams d;
    if (s.has("levels")) d.levels = s.counts("levels", 0);
    s.require(!d.levels.empty(), "levels", "must not be empty");
    for (auto k : d.levels) s.require(k <= 16, "levels", "must be at most 16");
    d.orbit_length = s.count("orbit_length", 1000000, 1);
    s.require(d.orbit_length <= 100000000, "orbit_length", "must be at most 1e8");
    d.tol = s.number("tol", 1e-3);
    s.require(d.tol > 0.0, "tol", "must be positive");
    d.start = s.number("start", d.start);
    check_unit(s, "start", d.start);
    d.transient = s.count("transient", 0);
    d.dither = s.number("dither", 0.0);
    s.require(d.dither >= 0.0, "dither", "must be non-negative");
    return d;
  }
  if (type == "shadow") {
    ShadowParams p;
    p.epsilon = s.number("epsilon", 0.25);
    s.require(p.epsilon > 0.0, "epsilon", "must be positive");
    if (s.has("window")) {
      const auto w = s.numbers("window");
      s.require(w.size() == 2 && w[0] >= 0.0 && w[0] <= w[1] && w[0] == std::floor(w[0]) &&
                    w[1] == std::floor(w[1]) && w[1] <= static_cast<double>(proc.horizon),
                "window", "must be [first, last] steps with first <= last <= process.horizon");
      p.window_first = static_cast<std::size_t>(w[0]);
      p.window_last = static_cast<std::size_t>(w[1]);
    }
    p.max_exponent = s.count("max_exponent", 4);
    s.require(p.max_exponent <= 6, "max_exponent", "must be at most 6");
    p.tol = s.number("tol", 1e-10);
    s.require(p.tol > 0.0, "tol", "must be positive");
    return p;
  }
  if (type == "liyorke") {
    LiYorkeParams l;
    l.pairs = s.count("pairs", 1000, 1);
    l.horizon = s.count("horizon", 10000, 100);
    l.tail_begin = s.count("tail_begin", 0);
    s.require(l.tail_begin < l.horizon, "tail_begin", "must be below horizon");
    l.liminf = s.number("liminf", 1e-3);
    l.limsup = s.number("limsup", 1e-1);
    s.require(l.liminf > 0.0 && l.limsup > 0.0, "liminf", "and limsup must be positive");
    l.dither = s.number("dither", 1e-13);
    s.require(l.dither >= 0.0, "dither", "must be non-negative");
    return l;
  }
  CorridorParams c;
  c.steps = s.count("steps", 3, 1);
  c.ratio = s.number("ratio", 0.5);
  s.require(c.ratio > 0.0 && c.ratio <= 1.0, "ratio", "must lie in (0, 1]");
  c.batches = s.count("batches", 1000000, 1);
  s.require(proc.delta > 0.0, "steps", "requires process.delta > 0");
  return c;
}

OutputSpec parse_output(Section s) {
  OutputSpec o;
  o.json = s.text("json", "");
  o.csv = s.text("csv", "");
  o.svg = s.text("svg", "");
  s.finish();
  return o;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, e.mark.line + 1, e.mark.column + 1, e.msg);
  }
  if (!root || root.IsNull()) throw ConfigError(source, 0, 0, "configuration is empty");
  Section top(root, source, "top level");

  ExperimentConfig cfg;
  cfg.source = source;
  if (!top.has("sequence")) throw top.error(root, "missing section 'sequence'");
  cfg.sequence = parse_sequence(Section(top.raw("sequence"), source, "sequence"));
  if (top.has("process")) cfg.process = parse_process(Section(top.raw("process"), source, "process"));

  if (!top.has("analysis")) throw top.error(root, "missing section 'analysis'");
  const auto an = top.raw("analysis");
  if (!an || an.IsNull() || (an.IsMap() && an.size() == 0)) {
    throw top.error(an, "analysis block is empty");
  }
  Section analysis(an, source, "analysis");
  if (!analysis.has("type")) throw analysis.error(an, "analysis.type is required");
  cfg.analysis = analysis.text("type");
  const auto& types = analysis_types();
  if (std::find(types.begin(), types.end(), cfg.analysis) == types.end()) {
    std::string known;
    for (const auto& t : types) known += (known.empty() ? "" : ", ") + t;
    throw analysis.error(analysis.raw("type"),
                         "unknown analysis type '" + cfg.analysis + "' (known: " + known + ")");
  }
  cfg.params = parse_analysis(analysis, cfg.analysis, cfg.process);
  analysis.finish();

  if (top.has("output")) cfg.output = parse_output(Section(top.raw("output"), source, "output"));
  top.finish();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot open configuration file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

namespace {

struct ParamsToJson {
  const ProcessSpec& proc;

  Json operator()(const SimulateParams&) const { return Json::object(); }
  Json operator()(const RecurrenceParams& r) const {
    return {{"center", r.center.value_or(proc.x0)},
            {"radius", r.radius},
            {"burn_in", r.burn_in.value_or(proc.horizon / 10)},
            {"min_visits", r.min_visits},
            {"deltas", r.deltas.empty() ? default_delta_grid(proc.delta) : r.deltas}};
  }
  Json operator()(const TrapParams& t) const {
    return {{"region", to_json(t.region)},
            {"within_steps", t.within_steps.value_or(proc.horizon)}};
  }
  Json operator()(const ChainParams& c) const {
    return {{"delta_prime", c.delta_prime},
            {"start", c.start},
            {"target_center", c.target_center},
            {"target_radius", c.target_radius},
            {"spacing", c.spacing > 0.0 ? c.spacing : c.delta_prime / 8.0}};
  }
  Json operator()(const PeriodicParams& p) const {
    return {{"periods", p.periods}, {"tol", p.tol}, {"cells", p.cells}, {"classify", p.classify}};
  }
  Json operator()(const DecomposeParams& d) const {
    return {{"levels", d.levels},         {"orbit_length", d.orbit_length},
            {"tol", d.tol},               {"start", d.start},
            {"transient", d.transient ? d.transient : d.orbit_length / 10},
            {"dither", d.dither}};
  }
  Json operator()(const ShadowParams& s) const {
    return {{"epsilon", s.epsilon},
            {"window", Json::array({s.window_first.value_or(proc.horizon - proc.horizon / 4),
                                    s.window_last.value_or(proc.horizon)})},
            {"max_exponent", s.max_exponent},
            {"tol", s.tol}};
  }
  Json operator()(const LiYorkeParams& l) const {
    return {{"pairs", l.pairs},
            {"horizon", l.horizon},
            {"tail_begin", l.tail_begin ? l.tail_begin : l.horizon / 2},
            {"liminf", l.liminf},
            {"limsup", l.limsup},
            {"dither", l.dither}};
  }
  Json operator()(const CorridorParams& c) const {
    return {{"steps", c.steps}, {"ratio", c.ratio}, {"batches", c.batches}};
  }
};

}  // namespace

Json ExperimentConfig::resolved() const {
  Json seq;
  if (sequence.map) {
    seq["map"] = map_to_json(*sequence.map);
  } else {
    seq["gallery"] = sequence.gallery;
    Json params = Json::object();
    for (const auto& p : gallery_entry(sequence.gallery).params) {
      const auto it = sequence.params.find(p.name);
      params[p.name] = it != sequence.params.end() ? it->second : p.default_value;
    }
    seq["params"] = params;
  }
  Json analysis_json = std::visit(ParamsToJson{process}, params);
  Json analysis = {{"type", this->analysis}};
  for (const auto& [k, v] : analysis_json.items()) analysis[k] = v;
  return {{"sequence", seq},
          {"process",
           {{"tail_index", process.tail_index},
            {"x0", process.x0},
            {"delta", process.delta},
            {"horizon", process.horizon},
            {"trials", process.trials},
            {"seed", process.seed}}},
          {"analysis", analysis},
          {"output", {{"json", output.json}, {"csv", output.csv}, {"svg", output.svg}}}};
}

}  // namespace pidyn::cli
