#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "pidyn/maps.hpp"

namespace pidyn::testing {

// Random continuous PL self-map with 2..max_pieces segments.
inline PiecewiseLinearMap random_map(std::mt19937_64& rng, int max_pieces = 8) {
  std::uniform_int_distribution<int> pieces(1, max_pieces);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = pieces(rng);
  std::vector<double> xs{0.0, 1.0};
  while (static_cast<int>(xs.size()) < n + 1) {
    const double x = u(rng);
    if (x > 0.0 && x < 1.0 && std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> ys;
  for (std::size_t i = 0; i < xs.size(); ++i) ys.push_back(u(rng));
  return PiecewiseLinearMap(xs, ys);
}

// Linear interpolation written out independently of the library.
inline double naive_eval(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  x = std::min(std::max(x, 0.0), 1.0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (x <= xs[i + 1]) {
      const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
      return ys[i] + t * (ys[i + 1] - ys[i]);
    }
  }
  return ys.back();
}

}  // namespace pidyn::testing
