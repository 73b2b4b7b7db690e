#include "pidyn/stochproc.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

namespace pidyn {

void ProcessConfig::validate() const {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be finite and non-negative");
  }
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw std::invalid_argument("x0 must lie in [0,1]");
}

Simulator::Simulator(ProcessConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  maps_ = cfg_.seq.window(cfg_.tail_index, cfg_.horizon);
}

void Simulator::run_into(std::uint64_t trial, std::vector<double>& states) const {
  const CounterRng rng(cfg_.master_seed, trial);
  const double delta = cfg_.delta;
  states.resize(cfg_.horizon + 1);
  states[0] = cfg_.x0;
  for (std::size_t n = 0; n < cfg_.horizon; ++n) {
    const double image = (*maps_[n])(states[n]);
    double next = image + rng.symmetric(n, delta);
    // rounding of image + xi may overshoot |xi| <= delta by an ulp
    while (std::abs(next - image) > delta) next = std::nextafter(next, image);
    states[n + 1] = next;
  }
}

Trajectory Simulator::run(std::uint64_t trial) const {
  Trajectory t;
  t.tail_index = cfg_.tail_index;
  t.delta = cfg_.delta;
  t.seed = cfg_.master_seed;
  t.trial = trial;
  run_into(trial, t.states);
  return t;
}

Trajectory simulate(const ProcessConfig& cfg, std::uint64_t trial) {
  return Simulator(cfg).run(trial);
}

std::vector<Trajectory> simulate_batch(const ProcessConfig& cfg, std::size_t trials,
                                       const BatchOptions& options) {
  if (trials < 1) throw std::invalid_argument("batch needs at least one trial");
  const double states = static_cast<double>(trials) * static_cast<double>(cfg.horizon + 1);
  if (states > static_cast<double>(options.max_states)) {
    throw ResourceError("batch of " + std::to_string(trials) + " trials x " +
                        std::to_string(cfg.horizon + 1) +
                        " states exceeds the memory cap; use fold_trials");
  }
  const Simulator sim(cfg);
  std::vector<Trajectory> out(trials);
  parallel_for(trials, options.workers, [&](std::size_t i, unsigned) {
    out[i] = sim.run(static_cast<std::uint64_t>(i));
  });
  return out;
}

void write_trajectories_csv(std::ostream& out, std::span<const Trajectory> trajectories) {
  out << "trial,step,x\n";
  char buf[64];
  for (const auto& t : trajectories) {
    for (std::size_t n = 0; n < t.states.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", t.states[n]);
      out << t.trial << ',' << n << ',' << buf << '\n';
    }
  }
}

namespace {

template <class T>
T parse_field(std::string_view text, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": cannot parse '" +
                                std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::vector<Trajectory> read_trajectories_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw std::invalid_argument("line 1: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "trial,step,x") {
    throw std::invalid_argument("line 1: expected header 'trial,step,x'");
  }
  std::vector<Trajectory> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": expected three comma-separated fields");
    }
    const std::string_view view(line);
    const auto trial = parse_field<std::uint64_t>(view.substr(0, c1), line_no);
    const auto step = parse_field<std::uint64_t>(view.substr(c1 + 1, c2 - c1 - 1), line_no);
    const auto x = parse_field<double>(view.substr(c2 + 1), line_no);
    if (step == 0) {
      out.push_back(Trajectory{});
      out.back().trial = trial;
    } else if (out.empty() || out.back().trial != trial ||
               out.back().states.size() != step) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": rows must list steps 0,1,2,... per trial");
    }
    out.back().states.push_back(x);
  }
  if (out.empty()) throw std::invalid_argument("no trajectory rows");
  return out;
}

}  // namespace pidyn
