#pragma once

// Reference computations that share no code with the library under test.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

struct BoxPoint {
  double x;
  double g_lo;
  double g_hi;
};

/// Extremes of sum(w x)/sum(w) over every vertex of the weight box, by
/// enumeration of all 2^l lower/upper assignments.
inline std::pair<double, double> vertex_extremes(const std::vector<BoxPoint>& pts) {
  const std::size_t l = pts.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t mask = 0; mask < (std::size_t{1} << l); ++mask) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      const double w = (mask >> i) & 1 ? pts[i].g_hi : pts[i].g_lo;
      num += w * pts[i].x;
      den += w;
    }
    if (den <= 0.0) continue;
    lo = std::min(lo, num / den);
    hi = std::max(hi, num / den);
  }
  return {lo, hi};
}

/// Left and right centroids by trying every switch point of a sorted list.
inline std::pair<double, double> switch_point_extremes(std::vector<BoxPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const BoxPoint& a, const BoxPoint& b) { return a.x < b.x; });
  const std::size_t l = pts.size();
  double left = std::numeric_limits<double>::infinity();
  double right = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m < l; ++m) {
    double nl = 0, dl = 0, nr = 0, dr = 0;
    for (std::size_t i = 0; i < l; ++i) {
      const double wl = i < m ? pts[i].g_hi : pts[i].g_lo;
      const double wr = i < m ? pts[i].g_lo : pts[i].g_hi;
      nl += wl * pts[i].x;
      dl += wl;
      nr += wr * pts[i].x;
      dr += wr;
    }
    if (dl > 0) left = std::min(left, nl / dl);
    if (dr > 0) right = std::max(right, nr / dr);
  }
  return {left, right};
}

/// Linear interpolation through (x, y) corners, holding the end values.
inline double ramp(const std::vector<std::pair<double, double>>& pts, double x) {
  if (x <= pts.front().first) return pts.front().second;
  if (x >= pts.back().first) return pts.back().second;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (x <= pts[i].first) {
      const auto [x0, y0] = pts[i - 1];
      const auto [x1, y1] = pts[i];
      return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
  }
  return pts.back().second;
}

}  // namespace oracle
