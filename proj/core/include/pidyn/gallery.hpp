#pragma once

// Constructors for the worked example maps and sequences, plus a registry
// used by the command-line tool.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pidyn/maps.hpp"
#include "pidyn/periodic.hpp"

namespace pidyn {

/// Feigenbaum-type parameter, stored to seven digits.
inline constexpr double kFeigenbaumLambda = 0.8249080;

/// 0 on [0,1/2], 4x-2 on [1/2,3/4], 1 on [3/4,1].
PiecewiseLinearMap example1_limit();

/// The n-th map of the spiked sequence: a tent of height 1 on
/// [0, 1/(4*2^n)] followed by the limit map. Past the point where the spike
/// underflows double precision the limit itself is returned.
PiecewiseLinearMap example1_map(std::uint64_t n);

/// (example1_map(n))_n with limit example1_limit().
MapSequence example1_seq();

/// tau(x) = 1 - |2x - 1|.
PiecewiseLinearMap tent();

/// Constant tau^2(lambda) on [0, tau(lambda)] and tau elsewhere.
/// Throws std::invalid_argument unless 1/2 < lambda < 1.
PiecewiseLinearMap truncated_tent(double lambda = kFeigenbaumLambda);

/// Flat on [0,1/5] and [4/5,1], diagonal on [2/5,3/5], affine joins.
PiecewiseLinearMap remark3_map();

/// Line through (0, 1/4) and (1, 3/4); attracting fixed point 1/2.
PiecewiseLinearMap contraction();

/// min(max(f(x) + c, 0), 1), with extra breakpoints where the clamp bites.
PiecewiseLinearMap shift_clamped(const PiecewiseLinearMap& f, double c);

/// f_n = shift_clamped(limit, amplitude * rate^n). Requires 0 <= rate < 1.
MapSequence additive_decay(const PiecewiseLinearMap& limit, double amplitude, double rate,
                           std::string label = "additive_decay");

/// Data for one level k of the modified truncated-tent construction. Index i
/// runs over level-k hulls in left-to-right order.
struct Example2Level {
  std::size_t k = 0;
  /// Period-2^k points x_k^(i), one per hull, in the gap between its two
  /// level-(k+1) sub-hulls.
  std::vector<double> points;
  /// |g^(2^k)(x) - x| at each point.
  std::vector<double> residuals;
  /// Distance from x_k^(i) to the nearer sub-hull.
  std::vector<double> point_eps;
  /// min_i point_eps.
  double eps = 0.0;
  /// First index attaining eps; this hull receives the diminished copy.
  std::size_t selected = 0;
  /// Closures [x - eps, x + eps] of the modification intervals.
  std::vector<Interval> intervals;
  /// Level-k hulls in left-to-right order.
  std::vector<Interval> hulls;
};

struct Example2Report {
  std::size_t depth = 0;
  double lambda = kFeigenbaumLambda;
  std::vector<Example2Level> levels;
};

struct Example2Result {
  PiecewiseLinearMap map;
  Example2Report report;
};

class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Modifies the truncated tent g on the intervals around the period-2^k
/// points for k = 1..depth. For the selected hull of each level the map is a
/// copy of g scaled into the square of half-width (2/5)eps centred at
/// (x, g(x)), with flat shoulders out to (4/5)eps; for the other hulls it is
/// the slope-1 line through (x, g(x)) on the same range. Affine pieces join
/// back to g at x +- eps. Depth 0 returns g.
///
/// Throws ConstructionError when the hull decomposition of the required
/// depth fails, when a period-2^k point is missing from a gap, or when the
/// modification intervals overlap.
Example2Result example2_map(std::size_t depth, double tol = 1e-10,
                            double lambda = kFeigenbaumLambda,
                            std::size_t orbit_length = 200000);

using GalleryParams = std::map<std::string, double>;

struct GalleryParam {
  std::string name;
  double default_value = 0.0;
  std::string description;
};

struct GalleryEntry {
  std::string name;
  /// True for genuinely nonautonomous sequences; single maps are built as
  /// constant sequences.
  bool is_sequence = false;
  std::string provenance;
  std::vector<GalleryParam> params;
  std::function<MapSequence(const GalleryParams&)> construct;
};

const std::vector<GalleryEntry>& gallery();

/// Throws std::invalid_argument naming the known entries when absent.
const GalleryEntry& gallery_entry(std::string_view name);

/// Fills defaults and rejects parameters the entry does not declare.
MapSequence build_gallery(std::string_view name, const GalleryParams& params = {});

}  // namespace pidyn
