#pragma once

// Deterministic 800x800 SVG renderings of map graphs and trajectories.

#include <span>
#include <string>

#include "pidyn/maps.hpp"

namespace pidyn::cli {

inline constexpr int kCanvas = 800;

/// Graph of f as a polyline through its breakpoints over the unit square,
/// with the diagonal dashed and ticks every 0.1.
std::string map_svg(const PiecewiseLinearMap& f, const std::string& title);

/// Step-vs-value polyline with one vertex per state. The value axis spans
/// [0,1] widened to the range of the states.
std::string trajectory_svg(std::span<const double> states, const std::string& title);

}  // namespace pidyn::cli
