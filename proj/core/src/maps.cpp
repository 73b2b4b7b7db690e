#include "pidyn/maps.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace pidyn {

PiecewiseLinearMap::PiecewiseLinearMap(std::vector<double> breakpoints,
                                       std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() < 2) {
    throw std::invalid_argument("piecewise-linear map needs at least two breakpoints");
  }
  if (breakpoints_.size() != values_.size()) {
    throw std::invalid_argument("breakpoints and values differ in length");
  }
  if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0) {
    throw std::invalid_argument("breakpoints must start at 0 and end at 1");
  }
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] < breakpoints_[i + 1])) {
      throw std::invalid_argument("breakpoints must be strictly increasing (index " +
                                  std::to_string(i + 1) + ")");
    }
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      throw std::invalid_argument("value at index " + std::to_string(i) +
                                  " lies outside [0,1]");
    }
  }
  slopes_.reserve(breakpoints_.size() - 1);
  for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
    const double s = (values_[i + 1] - values_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
    slopes_.push_back(s);
    max_abs_slope_ = std::max(max_abs_slope_, std::abs(s));
  }
}

PiecewiseLinearMap PiecewiseLinearMap::constant(double c) {
  return PiecewiseLinearMap({0.0, 1.0}, {c, c});
}

PiecewiseLinearMap PiecewiseLinearMap::identity() {
  return PiecewiseLinearMap({0.0, 1.0}, {0.0, 1.0});
}

std::size_t PiecewiseLinearMap::segment_of(double x) const {
  const double t = clamp_unit(x);
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto idx = static_cast<std::size_t>(it - breakpoints_.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, slopes_.size() - 1);
}

double PiecewiseLinearMap::operator()(double x) const {
  const double t = clamp_unit(x);
  if (t >= 1.0) return values_.back();
  const std::size_t i = segment_of(t);
  if (t == breakpoints_[i]) return values_[i];
  const double y = values_[i] + (t - breakpoints_[i]) * slopes_[i];
  // keep the rounded result inside the segment's ordinate range
  const double lo = std::min(values_[i], values_[i + 1]);
  const double hi = std::max(values_[i], values_[i + 1]);
  return std::min(std::max(y, lo), hi);
}

Interval PiecewiseLinearMap::image(Interval domain) const {
  const double a = clamp_unit(std::min(domain.lo, domain.hi));
  const double b = clamp_unit(std::max(domain.lo, domain.hi));
  double lo = (*this)(a);
  double hi = lo;
  const double fb = (*this)(b);
  lo = std::min(lo, fb);
  hi = std::max(hi, fb);
  const auto first = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
  for (auto it = first; it != breakpoints_.end() && *it < b; ++it) {
    const double v = values_[static_cast<std::size_t>(it - breakpoints_.begin())];
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

double eval(const PiecewiseLinearMap& map, double x) { return map(x); }

double iterate(const PiecewiseLinearMap& map, double x, std::uint64_t n) {
  double y = clamp_unit(x);
  for (std::uint64_t i = 0; i < n; ++i) y = map(y);
  return y;
}

double sup_distance(const PiecewiseLinearMap& a, const PiecewiseLinearMap& b) {
  std::vector<double> knots;
  knots.reserve(a.breakpoints().size() + b.breakpoints().size());
  std::merge(a.breakpoints().begin(), a.breakpoints().end(),
             b.breakpoints().begin(), b.breakpoints().end(),
             std::back_inserter(knots));
  double best = 0.0;
  for (double x : knots) best = std::max(best, std::abs(a(x) - b(x)));
  return best;
}

std::string to_string(SequenceKind kind) {
  switch (kind) {
    case SequenceKind::constant: return "constant";
    case SequenceKind::example1: return "example1";
    case SequenceKind::additive_decay: return "additive-decay";
    case SequenceKind::custom: return "custom";
  }
  return "custom";
}

MapSequence::MapSequence(SequenceKind kind, Generator generator,
                         PiecewiseLinearMap limit, std::string label)
    : kind_(kind),
      generator_(generator ? std::make_shared<const Generator>(std::move(generator))
                           : nullptr),
      limit_(std::make_shared<const PiecewiseLinearMap>(std::move(limit))),
      label_(std::move(label)) {
  if (kind_ != SequenceKind::constant && !generator_) {
    throw std::invalid_argument("non-constant map sequence needs a generator");
  }
}

MapSequence MapSequence::constant(PiecewiseLinearMap f, std::string label) {
  return MapSequence(SequenceKind::constant, nullptr, std::move(f), std::move(label));
}

MapSequence::MapPtr MapSequence::at(std::uint64_t n) const {
  if (kind_ == SequenceKind::constant) return limit_;
  return std::make_shared<const PiecewiseLinearMap>((*generator_)(offset_ + n));
}

std::vector<MapSequence::MapPtr> MapSequence::window(std::uint64_t first,
                                                     std::size_t count) const {
  std::vector<MapPtr> maps;
  maps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) maps.push_back(at(first + i));
  return maps;
}

MapSequence MapSequence::tail_shift(std::uint64_t k) const {
  MapSequence shifted = *this;
  shifted.offset_ += k;
  return shifted;
}

double compose_prefix(const MapSequence& seq, std::uint64_t k, std::uint64_t j,
                      double x) {
  double y = clamp_unit(x);
  if (seq.kind() == SequenceKind::constant) return iterate(seq.limit(), y, j);
  for (std::uint64_t i = 0; i < j; ++i) y = (*seq.at(k + i))(y);
  return y;
}

MapSequence tail_shift(const MapSequence& seq, std::uint64_t k) {
  return seq.tail_shift(k);
}

}  // namespace pidyn
