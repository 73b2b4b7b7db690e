#pragma once

// delta-chains (noise-bounded pseudo-orbits) of a single map: certified
// construction by grid reachability, verification, and the probability that
// uniform noise stays inside a prescribed corridor.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pidyn/maps.hpp"
#include "pidyn/recurrence.hpp"

namespace pidyn {

/// Points z_0..z_n with |f(z_i) - z_{i+1}| < delta_prime for every link.
struct DeltaChain {
  std::vector<double> points;
  double delta_prime = 0.0;
};

struct ChainCheck {
  bool valid = false;
  double max_link_error = 0.0;
  /// delta_prime - max_link_error; positive iff valid.
  double slack = 0.0;
};

/// Throws std::invalid_argument on an empty chain. A single point is valid.
ChainCheck validate_chain(const PiecewiseLinearMap& f, const DeltaChain& chain);

struct ChainSearchOptions {
  /// Grid spacing h; 0 selects delta_prime / 8. Must satisfy h < delta_prime / 2.
  double spacing = 0.0;
};

struct ChainSearchResult {
  std::optional<DeltaChain> chain;
  /// Reached grid nodes merged into maximal runs [first, last].
  std::vector<Interval> reachable;
  double spacing = 0.0;
  std::size_t nodes_reached = 0;
};

/// Breadth-first search for a chain from start into the open ball target.
///
/// Grid nodes are j/m with m = ceil(1/h); a link a -> b exists iff
/// |f(a) - b| < delta_prime - h, so every returned link holds with margin h.
/// The root is start itself. Nodes are expanded in increasing order, which
/// makes the result deterministic. A chain is complete as soon as some
/// expanded point p has f(p) or a successor node inside the target (in the
/// former case the final point is f(p) exactly).
ChainSearchResult find_delta_chain(const PiecewiseLinearMap& f, double delta_prime,
                                   double start, Ball target,
                                   const ChainSearchOptions& options = {});

/// (w/delta)^N: probability that N independent U[-delta, delta] draws each
/// fall into a fixed window of half-width w.
double corridor_probability(std::size_t steps, double half_width, double delta);

struct CorridorCheck {
  double analytic = 0.0;
  Proportion estimate;
  /// |estimate - analytic| <= 3 * sqrt(p(1-p)/M) with p the analytic value.
  bool agrees = false;
};

/// Monte Carlo counterpart of corridor_probability over `batches` independent
/// groups of `steps` draws. The window is [c - w, c + w] with
/// c = (delta - w)/2, kept inside [-delta, delta].
CorridorCheck corridor_monte_carlo(std::size_t steps, double half_width, double delta,
                                   std::uint64_t seed, std::size_t batches,
                                   unsigned workers = 1);

}  // namespace pidyn
