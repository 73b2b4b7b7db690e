#include "pidyn/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace pidyn::cli {

namespace {

constexpr double kMargin = 60.0;
constexpr double kPlot = kCanvas - 2.0 * kMargin;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * kPlot; }
  double py(double y) const { return kMargin + (y1 - y) / (y1 - y0) * kPlot; }
};

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string header(const std::string& title) {
  const auto size = std::to_string(kCanvas);
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + size + "\" height=\"" +
                  size + "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + size + "\" height=\"" + size + "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(kCanvas / 2.0) +
       "\" y=\"30.000\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">" +
       escape(title) + "</text>\n";
  return s;
}

std::string axes(const Frame& f, const std::vector<double>& xticks,
                 const std::vector<double>& yticks) {
  std::string s = "<rect x=\"" + fmt(kMargin) + "\" y=\"" + fmt(kMargin) + "\" width=\"" +
                  fmt(kPlot) + "\" height=\"" + fmt(kPlot) +
                  "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (double t : xticks) {
    const double x = f.px(t);
    const double y = kMargin + kPlot;
    s += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(x) + "\" y2=\"" +
         fmt(y + 6.0) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y + 22.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         tick_label(t) + "</text>\n";
  }
  for (double t : yticks) {
    const double y = f.py(t);
    s += "<line x1=\"" + fmt(kMargin - 6.0) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(kMargin) +
         "\" y2=\"" + fmt(y) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(kMargin - 10.0) + "\" y=\"" + fmt(y + 4.0) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" + tick_label(t) +
         "</text>\n";
  }
  return s;
}

std::string polyline(const std::vector<std::pair<double, double>>& pts, const char* colour) {
  std::string s = "<polyline fill=\"none\" stroke=\"";
  s += colour;
  s += "\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += fmt(pts[i].first) + "," + fmt(pts[i].second);
  }
  s += "\"/>\n";
  return s;
}

std::vector<double> unit_ticks() {
  std::vector<double> t;
  for (int i = 0; i <= 10; ++i) t.push_back(i / 10.0);
  return t;
}

}  // namespace

std::string map_svg(const PiecewiseLinearMap& f, const std::string& title) {
  const Frame frame{0.0, 1.0, 0.0, 1.0};
  std::string s = header(title);
  s += axes(frame, unit_ticks(), unit_ticks());
  s += "<line x1=\"" + fmt(frame.px(0)) + "\" y1=\"" + fmt(frame.py(0)) + "\" x2=\"" +
       fmt(frame.px(1)) + "\" y2=\"" + fmt(frame.py(1)) +
       "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < f.breakpoints().size(); ++i) {
    pts.emplace_back(frame.px(f.breakpoints()[i]), frame.py(f.values()[i]));
  }
  s += polyline(pts, "black");
  s += "</svg>\n";
  return s;
}

std::string trajectory_svg(std::span<const double> states, const std::string& title) {
  double lo = 0.0;
  double hi = 1.0;
  for (double x : states) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double steps = states.size() > 1 ? static_cast<double>(states.size() - 1) : 1.0;
  const Frame frame{0.0, steps, lo, hi};
  std::vector<double> xticks;
  for (int i = 0; i <= 10; ++i) xticks.push_back(std::round(steps * i / 10.0));
  xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
  std::string s = header(title);
  s += axes(frame, xticks, unit_ticks());
  std::vector<std::pair<double, double>> pts;
  for (std::size_t n = 0; n < states.size(); ++n) {
    pts.emplace_back(frame.px(static_cast<double>(n)), frame.py(states[n]));
  }
  s += polyline(pts, "steelblue");
  s += "</svg>\n";
  return s;
}

}  // namespace pidyn::cli
