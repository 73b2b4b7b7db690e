#pragma once

// Periodic structure of a limit map: periodic points and plateaus of
// periodic points, attractivity, the level-k hull decomposition of an
// infinite omega-limit set, shadowing of trajectories by periodic orbits, and
// a heuristic Li-Yorke pair detector.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pidyn/maps.hpp"

namespace pidyn {

enum class Attractivity { unclassified, attractive, repelling, neutral };

std::string to_string(Attractivity a);

struct PeriodicOrbit {
  std::size_t period = 1;
  /// Orbit in dynamical order, starting at its leftmost point.
  std::vector<double> points;
  Attractivity label = Attractivity::unclassified;
  /// Finite-difference derivative of f^period at points[0].
  double multiplier = 0.0;
  /// False for representatives taken from a plateau of periodic points.
  bool isolated = true;
  /// Set when the orbit test and the multiplier test disagree.
  bool inconclusive = false;
};

/// Maximal interval on which f^period(x) = x within tolerance.
struct Plateau {
  Interval span;
  std::size_t period = 1;
};

struct PeriodicSearchOptions {
  /// Root tolerance: grid values with |f^n(x) - x| <= tol count as zeros.
  double tol = 1e-10;
  /// Number of grid cells; 0 picks a size from the Lipschitz bound of f^n.
  std::size_t cells = 0;
  /// Restricts the scan to a sub-interval of [0,1].
  std::optional<Interval> domain;
};

struct PeriodicSearchResult {
  std::size_t period = 1;
  std::vector<PeriodicOrbit> orbits;
  std::vector<Plateau> plateaus;
  /// Refined roots of f^n(x) - x of exact period n, ascending.
  std::vector<double> roots;
  std::size_t cells = 0;
  /// Same-sign cells whose values are small enough to hide a pair of roots.
  std::size_t possible_misses = 0;
};

/// Scans g(x) = f^n(x) - x on a uniform grid, bisects every sign change,
/// reports runs of zeros spanning more than one cell as plateaus, and keeps
/// only points whose exact period is n: a root is dropped if
/// |f^d(x) - x| < 10 tol for a proper divisor d of n.
PeriodicSearchResult find_periodic_points(const PiecewiseLinearMap& f, std::size_t period,
                                          const PeriodicSearchOptions& options = {});

struct AttractivityProbe {
  double radius = 1e-3;
  std::size_t steps = 200;
  std::size_t samples = 16;
  double tol = 1e-6;
  double fd_step = 1e-7;
};

/// Multiplier of the orbit: central difference of f^period at points[0],
/// one-sided at 0 and 1.
double orbit_multiplier(const PiecewiseLinearMap& f, const PeriodicOrbit& orbit,
                        double fd_step = 1e-7);

/// Labels the orbit by the convergence definition: sample points within
/// probe.radius of points[0] are iterated under f^period; attractive if all
/// stay in the probe neighbourhood and end within probe.tol of points[0],
/// repelling if all leave it, neutral otherwise. |multiplier| within 1e-6 of 1 forces
/// neutral. Returns the labelled copy.
PeriodicOrbit classify_attractivity(const PiecewiseLinearMap& f, PeriodicOrbit orbit,
                                    const AttractivityProbe& probe = {});

/// Hulls U(0..2^k-1) in cyclic order: U(i) is the convex hull of tail points
/// whose step index is congruent to i + phase mod 2^k, and U(0) is the
/// leftmost hull.
struct IntervalDecomposition {
  std::size_t level = 0;
  std::vector<Interval> hulls;
  /// Smallest gap between spatially adjacent hulls (infinity for one hull).
  double margin = 0.0;
  /// Largest distance by which g of a sampled point of portion i lands
  /// outside U(i+1).
  double invariance_defect = 0.0;

  std::size_t successor(std::size_t i) const { return (i + 1) % hulls.size(); }
  /// Hull indices sorted left to right.
  std::vector<std::size_t> spatial_order() const;
};

class DecompositionError : public std::runtime_error {
 public:
  DecompositionError(const std::string& what, std::vector<Interval> hulls)
      : std::runtime_error(what), hulls_(std::move(hulls)) {}
  const std::vector<Interval>& hulls() const { return hulls_; }

 private:
  std::vector<Interval> hulls_;
};

struct DecompositionOptions {
  double start = 0.3819660112501051;
  /// Steps discarded before clustering; 0 means orbit_length / 10.
  std::size_t transient = 0;
  /// Optional seeded per-step perturbation of this size (0 = exact orbit).
  double dither = 0.0;
  std::uint64_t seed = 0;
};

/// Throws DecompositionError when hulls overlap or touch, or when g maps a
/// sampled point of portion i farther than tol from U(i+1). The check runs on
/// the sampled omega-limit points, not on whole hulls: a hull may contain the
/// turning point of g while the limit set itself avoids it.
IntervalDecomposition decompose_omega(const PiecewiseLinearMap& g, std::size_t level,
                                      std::size_t orbit_length, double tol,
                                      const DecompositionOptions& options = {});

struct ShadowResult {
  bool shadowed = false;
  std::size_t orbit_index = 0;
  std::size_t phase = 0;
  /// sup over the window of |X_n - f^n(p)| for the best candidate and phase.
  double sup_error = 0.0;
};

/// Best periodic itinerary over candidates and phases on steps
/// [window_begin, window_end). Shadowed iff its sup error is below epsilon.
ShadowResult shadow_test(std::span<const double> states,
                         std::span<const PeriodicOrbit> candidates, double epsilon,
                         std::size_t window_begin, std::size_t window_end);

/// Orbits of period 2^0..2^max_exponent plus plateau representatives
/// (midpoint and both endpoints of each plateau).
std::vector<PeriodicOrbit> shadow_candidates(const PiecewiseLinearMap& f,
                                             std::size_t max_exponent = 4,
                                             const PeriodicSearchOptions& options = {});

/// Orbit representatives of a search result: isolated orbits first, then the
/// plateau representatives.
std::vector<PeriodicOrbit> with_plateau_representatives(const PiecewiseLinearMap& f,
                                                        const PeriodicSearchResult& found);

struct LiYorkeOptions {
  std::size_t pairs = 1000;
  std::size_t horizon = 10000;
  /// First step of the tail window; 0 means horizon / 2.
  std::size_t tail_begin = 0;
  double liminf_threshold = 1e-3;
  double limsup_threshold = 1e-1;
  std::uint64_t seed = 0;
  /// Per-step round-off dither. Exact dyadic maps such as the slope-2 tent
  /// collapse every double-precision orbit to 0 after about 55 steps; a tiny
  /// seeded perturbation turns the computation into a pseudo-orbit instead.
  double dither = 1e-13;
  unsigned workers = 1;
};

struct LiYorkePair {
  double x = 0.0;
  double y = 0.0;
  double min_distance = 0.0;
  double max_distance = 0.0;
};

struct LiYorkeReport {
  std::size_t pairs = 0;
  std::size_t flagged = 0;
  /// Indices into samples of the flagged pairs, ascending.
  std::vector<std::size_t> flagged_indices;
  /// Every sampled pair, in sampling order.
  std::vector<LiYorkePair> samples;
};

/// For sampled pairs (x, y) computes the min and max of |F_n(x) - F_n(y)| over
/// the tail window, where F_n = f_n ∘ ... ∘ f_0, and flags pairs whose min is
/// below liminf_threshold while their max exceeds limsup_threshold.
LiYorkeReport liyorke_scan(const MapSequence& seq, const LiYorkeOptions& options = {});

}  // namespace pidyn
