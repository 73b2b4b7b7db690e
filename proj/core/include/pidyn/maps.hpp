#pragma once

// Continuous piecewise-linear self-maps of [0,1] and nonautonomous sequences
// of them.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pidyn {

/// Projection of the real line onto [0,1]. Every map in this library is
/// extended to R by evaluating at the clamped argument, which sends R \ I
/// into the image of the boundary.
inline double clamp_unit(double x) { return std::min(std::max(x, 0.0), 1.0); }

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool operator==(const Interval&) const = default;
};

/// Continuous piecewise-linear map of [0,1] into itself, given by its
/// breakpoints and the ordinates at them. Immutable after construction.
class PiecewiseLinearMap {
 public:
  /// Throws std::invalid_argument unless breakpoints are strictly increasing
  /// from 0 to 1 and every value lies in [0,1].
  PiecewiseLinearMap(std::vector<double> breakpoints,
                     std::vector<double> values);

  static PiecewiseLinearMap constant(double c);
  static PiecewiseLinearMap identity();

  /// Value at clamp_unit(x).
  double operator()(double x) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::size_t segment_count() const { return slopes_.size(); }
  double slope(std::size_t segment) const { return slopes_.at(segment); }
  double max_abs_slope() const { return max_abs_slope_; }

  /// Index of the segment whose half-open span [b_i, b_{i+1}) holds
  /// clamp_unit(x); the last segment also owns x = 1.
  std::size_t segment_of(double x) const;

  /// Exact image of [a,b] ∩ [0,1] (the extremes are attained at the interval
  /// endpoints or at interior breakpoints).
  Interval image(Interval domain) const;

  bool operator==(const PiecewiseLinearMap& other) const {
    return breakpoints_ == other.breakpoints_ && values_ == other.values_;
  }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  double max_abs_slope_ = 0.0;
};

double eval(const PiecewiseLinearMap& map, double x);

/// n-fold composition applied to clamp_unit(x); n = 0 gives clamp_unit(x).
double iterate(const PiecewiseLinearMap& map, double x, std::uint64_t n);

/// Exact sup-norm distance over [0,1]. The difference of two PL maps is PL on
/// the union of their breakpoints, so the maximum is taken there.
double sup_distance(const PiecewiseLinearMap& a, const PiecewiseLinearMap& b);

enum class SequenceKind { constant, example1, additive_decay, custom };

std::string to_string(SequenceKind kind);

/// Indexed family f_0, f_1, ... together with its declared limit map.
///
/// The generator is total and deterministic. A tail shift by k re-indexes the
/// family so that generator(n) of the shifted sequence is generator(n + k) of
/// the original; the limit is shared.
class MapSequence {
 public:
  using Generator = std::function<PiecewiseLinearMap(std::uint64_t)>;
  using MapPtr = std::shared_ptr<const PiecewiseLinearMap>;

  MapSequence(SequenceKind kind, Generator generator, PiecewiseLinearMap limit,
              std::string label = {});

  /// The autonomous sequence (f, f, ...).
  static MapSequence constant(PiecewiseLinearMap f, std::string label = {});

  SequenceKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const PiecewiseLinearMap& limit() const { return *limit_; }
  std::uint64_t offset() const { return offset_; }

  /// generator(n), i.e. f_{offset + n} of the unshifted family.
  MapPtr at(std::uint64_t n) const;

  /// Maps at indices first, first+1, ..., first+count-1. For constant
  /// sequences every entry aliases the limit.
  std::vector<MapPtr> window(std::uint64_t first, std::size_t count) const;

  MapSequence tail_shift(std::uint64_t k) const;

 private:
  SequenceKind kind_;
  std::shared_ptr<const Generator> generator_;
  MapPtr limit_;
  std::uint64_t offset_ = 0;
  std::string label_;
};

/// f_{k+j-1} ∘ ... ∘ f_k applied to clamp_unit(x); j = 0 gives clamp_unit(x).
double compose_prefix(const MapSequence& seq, std::uint64_t k, std::uint64_t j,
                      double x);

MapSequence tail_shift(const MapSequence& seq, std::uint64_t k);

}  // namespace pidyn
