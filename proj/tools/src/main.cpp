#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "pidyn/cli/config.hpp"
#include "pidyn/cli/runner.hpp"
#include "pidyn/cli/svg.hpp"
#include "pidyn/gallery.hpp"
#include "pidyn/json_io.hpp"
#include "pidyn/stochproc.hpp"

namespace {

using namespace pidyn;
using namespace pidyn::cli;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  unsigned workers = 1;
  std::string out;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

int run_config(const std::string& path, const std::string& verb, const Globals& g) {
  auto cfg = load_config(path);
  if (!verb.empty() && cfg.analysis != verb) {
    std::cerr << path << ": analysis.type is '" << cfg.analysis << "' but the '" << verb
              << "' verb was used\n";
    return kExitValidation;
  }
  if (g.seed) cfg.process.seed = *g.seed;
  if (g.trials) cfg.process.trials = *g.trials;
  if (!g.out.empty()) cfg.output.json = g.out;
  const auto outcome = run_experiment(cfg, {g.workers});
  if (cfg.output.json.empty()) std::cout << dump_json(outcome.report);
  if (outcome.exit_code != kExitOk) {
    std::cerr << "analysis failed: " << outcome.report.value("error", std::string()) << "\n";
  }
  return outcome.exit_code;
}

std::string map_literal(const PiecewiseLinearMap& f) {
  auto list = [](std::span<const double> xs) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", xs[i]);
      s += (i ? ", " : "") + std::string(buf);
    }
    return s + "]";
  };
  return "breakpoints: " + list(f.breakpoints()) + "\nvalues: " + list(f.values()) + "\n";
}

int gallery_list() {
  for (const auto& e : gallery()) {
    std::cout << e.name << (e.is_sequence ? " (sequence)" : " (map)") << "\n  " << e.provenance
              << "\n";
    for (const auto& p : e.params) {
      std::cout << "  --param " << p.name << "=" << p.default_value << "  " << p.description
                << "\n";
    }
  }
  return kExitOk;
}

int gallery_build(const std::string& name, const std::vector<std::string>& raw_params,
                  std::optional<std::size_t> depth, std::optional<std::uint64_t> index,
                  const std::string& report_path, const std::string& out) {
  GalleryParams params;
  for (const auto& kv : raw_params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--param expects key=value, got " + kv);
    std::size_t used = 0;
    const std::string value = kv.substr(eq + 1);
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("--param value is not a number: " + kv);
    params[kv.substr(0, eq)] = v;
  }
  if (depth) params["depth"] = static_cast<double>(*depth);
  const auto seq = build_gallery(name, params);
  if (!report_path.empty()) {
    if (name != "example2") throw std::invalid_argument("--report applies to example2 only");
    const auto full = gallery_entry(name);
    GalleryParams p;
    for (const auto& d : full.params) p[d.name] = params.contains(d.name) ? params[d.name] : d.default_value;
    const auto built = example2_map(static_cast<std::size_t>(p["depth"]), p["tol"], p["lambda"]);
    Json j = {{"version", version_string()}, {"construction", to_json(built.report)}};
    write_file(report_path, dump_json(j));
  }
  const auto f = index ? *seq.at(*index) : seq.limit();
  emit(out, map_literal(f));
  return kExitOk;
}

int plot(const std::string& input, const std::string& gallery_name, std::uint64_t trial,
         const std::string& out) {
  if (!gallery_name.empty()) {
    emit(out, map_svg(build_gallery(gallery_name).limit(), gallery_name));
    return kExitOk;
  }
  std::ifstream in(input);
  if (!in) throw std::invalid_argument("cannot open " + input);
  if (input.ends_with(".csv")) {
    const auto trajs = read_trajectories_csv(in);
    for (const auto& t : trajs) {
      if (t.trial == trial) {
        emit(out, trajectory_svg(t.states, "trajectory, trial " + std::to_string(trial)));
        return kExitOk;
      }
    }
    throw std::invalid_argument("trial " + std::to_string(trial) + " not found in " + input);
  }
  std::stringstream buf;
  buf << in.rdbuf();
  YAML::Node node;
  try {
    node = YAML::Load(buf.str());
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(input + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!node.IsMap()) throw std::invalid_argument(input + ": expected a map literal");
  auto read = [&](const char* key) {
    std::vector<double> xs;
    if (!node[key] || !node[key].IsSequence()) {
      throw std::invalid_argument(input + ": map literal needs a list '" + key + "'");
    }
    for (const auto& e : node[key]) xs.push_back(e.as<double>());
    return xs;
  };
  for (const auto& kv : node) {
    const auto key = kv.first.Scalar();
    if (key != "breakpoints" && key != "values") {
      throw std::invalid_argument(input + ":" + std::to_string(kv.first.Mark().line + 1) +
                                  ": unknown key '" + key + "'");
    }
  }
  const PiecewiseLinearMap f(read("breakpoints"), read("values"));
  emit(out, map_svg(f, input));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation and analysis of randomly perturbed nonautonomous interval maps",
               "pidyn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  Globals g;
  app.add_option("--seed", g.seed, "Override process.seed");
  app.add_option("--trials", g.trials, "Override process.trials")->check(CLI::PositiveNumber);
  app.add_option("--workers", g.workers, "Worker threads (results do not depend on it)")
      ->check(CLI::Range(1u, 256u));
  app.add_option("--out", g.out, "Output path (JSON report, map literal or SVG)");

  std::string config_path;
  std::string verb;
  auto* run = app.add_subcommand("run", "Run the analysis named in a configuration file");
  run->add_option("config", config_path, "YAML configuration")->required();
  run->fallthrough();
  for (const auto& type : analysis_types()) {
    auto* sub = app.add_subcommand(type, "Run a configuration whose analysis.type is " + type);
    sub->add_option("config", config_path, "YAML configuration")->required();
    sub->fallthrough();
    sub->callback([&verb, type] { verb = type; });
  }

  auto* gal = app.add_subcommand("gallery", "Example maps and sequences");
  gal->require_subcommand(1);
  auto* gal_list = gal->add_subcommand("list", "List gallery entries");
  auto* gal_build = gal->add_subcommand("build", "Print an entry as a map literal");
  std::string name;
  std::vector<std::string> raw_params;
  std::optional<std::size_t> depth;
  std::optional<std::uint64_t> index;
  std::string report_path;
  gal_build->add_option("name", name, "Entry name")->required();
  gal_build->add_option("--depth", depth, "Construction depth (example2)");
  gal_build->add_option("--param", raw_params, "Parameter as key=value");
  gal_build->add_option("--index", index, "Print f_n of a sequence instead of its limit");
  gal_build->add_option("--report", report_path, "Write the example2 construction report here");
  gal->fallthrough();
  gal_build->fallthrough();

  auto* plot_cmd = app.add_subcommand("plot", "Render a map literal or a trajectory CSV as SVG");
  std::string input;
  std::string plot_gallery;
  std::uint64_t trial = 0;
  plot_cmd->add_option("input", input, "Map literal (.yaml/.json) or trajectory CSV");
  plot_cmd->add_option("--gallery", plot_gallery, "Plot a gallery entry's limit map instead");
  plot_cmd->add_option("--trial", trial, "Trajectory to plot from a CSV");
  plot_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run->parsed() || !verb.empty()) return run_config(config_path, verb, g);
    if (gal_list->parsed()) return gallery_list();
    if (gal_build->parsed()) return gallery_build(name, raw_params, depth, index, report_path, g.out);
    if (plot_cmd->parsed()) {
      if (input.empty() == plot_gallery.empty()) {
        std::cerr << "plot needs exactly one of an input file or --gallery\n";
        return kExitValidation;
      }
      return plot(input, plot_gallery, trial, g.out);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  } catch (const ConstructionError& e) {
    std::cerr << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
