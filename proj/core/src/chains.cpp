#include "pidyn/chains.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "pidyn/parallel.hpp"
#include "pidyn/rng.hpp"

namespace pidyn {

ChainCheck validate_chain(const PiecewiseLinearMap& f, const DeltaChain& chain) {
  if (chain.points.empty()) throw std::invalid_argument("chain has no points");
  ChainCheck check;
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) {
    check.max_link_error =
        std::max(check.max_link_error, std::abs(f(chain.points[i]) - chain.points[i + 1]));
  }
  check.slack = chain.delta_prime - check.max_link_error;
  check.valid = check.max_link_error < chain.delta_prime;
  return check;
}

namespace {

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

}  // namespace

ChainSearchResult find_delta_chain(const PiecewiseLinearMap& f, double delta_prime,
                                   double start, Ball target,
                                   const ChainSearchOptions& options) {
  if (!(delta_prime > 0.0)) throw std::invalid_argument("delta' must be positive");
  if (!(target.radius > 0.0)) throw std::invalid_argument("target radius must be positive");
  const double h = options.spacing > 0.0 ? options.spacing : delta_prime / 8.0;
  if (!(h < delta_prime / 2.0)) {
    throw std::invalid_argument("grid spacing must be below delta'/2 to certify links");
  }

  const auto m = static_cast<std::size_t>(std::ceil(1.0 / h));
  const double step = 1.0 / static_cast<double>(m);
  const double margin = delta_prime - h;
  auto node = [&](std::size_t j) { return static_cast<double>(j) / static_cast<double>(m); };

  ChainSearchResult result;
  result.spacing = h;

  // parent[j]: predecessor node, or m + 1 when the predecessor is the root
  const std::size_t root = m + 1;
  std::vector<std::size_t> parent(m + 1, kNoParent);
  std::deque<std::size_t> queue;

  auto trace = [&](std::size_t last) {
    std::vector<double> rev;
    for (std::size_t j = last; j != root; j = parent[j]) rev.push_back(node(j));
    rev.push_back(start);
    return std::vector<double>(rev.rbegin(), rev.rend());
  };

  // Expands point p (the root or node j); returns true when the chain is done.
  auto expand = [&](double p, std::size_t self) -> bool {
    const double y = f(p);
    if (target.contains(y)) {
      auto pts = self == root ? std::vector<double>{start} : trace(self);
      pts.push_back(y);
      result.chain = DeltaChain{std::move(pts), delta_prime};
      return true;
    }
    const double lo = std::max(0.0, y - margin);
    const double hi = std::min(1.0, y + margin);
    auto j = static_cast<std::size_t>(std::max(0.0, std::floor(lo / step)));
    for (; j <= m && node(j) <= hi; ++j) {
      if (!(std::abs(y - node(j)) < margin) || parent[j] != kNoParent) continue;
      parent[j] = self;
      ++result.nodes_reached;
      if (target.contains(node(j))) {
        result.chain = DeltaChain{trace(j), delta_prime};
        return true;
      }
      queue.push_back(j);
    }
    return false;
  };

  if (!expand(start, root)) {
    while (!queue.empty()) {
      const std::size_t j = queue.front();
      queue.pop_front();
      if (expand(node(j), j)) break;
    }
  }

  for (std::size_t j = 0; j <= m; ++j) {
    if (parent[j] == kNoParent) continue;
    if (j > 0 && parent[j - 1] != kNoParent) {
      result.reachable.back().hi = node(j);
    } else {
      result.reachable.push_back({node(j), node(j)});
    }
  }
  return result;
}

double corridor_probability(std::size_t steps, double half_width, double delta) {
  if (steps < 1) throw std::invalid_argument("corridor needs at least one step");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(half_width > 0.0)) throw std::invalid_argument("window half-width must be positive");
  if (half_width > delta) throw std::invalid_argument("window half-width exceeds delta");
  return std::pow(half_width / delta, static_cast<double>(steps));
}

CorridorCheck corridor_monte_carlo(std::size_t steps, double half_width, double delta,
                                   std::uint64_t seed, std::size_t batches,
                                   unsigned workers) {
  CorridorCheck check;
  check.analytic = corridor_probability(steps, half_width, delta);
  if (batches < 1) throw std::invalid_argument("need at least one batch");
  const double c = 0.5 * (delta - half_width);
  const Interval window{c - half_width, c + half_width};
  const std::uint64_t key = derive_seed(seed, "corridor");

  std::vector<unsigned char> inside(batches, 0);
  parallel_for(batches, workers, [&](std::size_t b, unsigned) {
    const CounterRng rng(key, b);
    bool ok = true;
    for (std::size_t n = 0; n < steps && ok; ++n) ok = window.contains(rng.symmetric(n, delta));
    inside[b] = ok ? 1 : 0;
  });
  check.estimate.trials = batches;
  for (auto v : inside) check.estimate.hits += v;

  const double p = check.analytic;
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(batches));
  check.agrees = std::abs(check.estimate.value() - p) <= 3.0 * se;
  return check;
}

}  // namespace pidyn
