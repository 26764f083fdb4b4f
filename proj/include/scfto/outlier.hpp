#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace scfto {

struct OutlierParams {
  double t_nbr = 0.01;         // neighbor radius in trust units
  double core_fraction = 0.8;  // core values have more than this share of the max neighbor count
  double th_d = 0.05;          // convergence tolerance on successive thresholds
  std::uint64_t n_s = 60;      // consecutive in-tolerance updates required
};

/// Classification of one trust value inside the density scan.
struct DensityPoint {
  double value = 0.0;
  std::size_t neighbors = 0;
  bool core = false;
};

/// Sorted values with neighbor counts and core flags.
inline std::vector<DensityPoint> density_scan(std::span<const double> values,
                                              const OutlierParams& p) {
  std::vector<DensityPoint> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back({v, 0, false});
  std::sort(pts.begin(), pts.end(),
            [](const DensityPoint& a, const DensityPoint& b) { return a.value < b.value; });
  const std::size_t n = pts.size();
  std::size_t max_nbr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = i; j-- > 0 && std::abs(pts[i].value - pts[j].value) < p.t_nbr;) ++count;
    for (std::size_t j = i + 1; j < n && std::abs(pts[j].value - pts[i].value) < p.t_nbr; ++j)
      ++count;
    pts[i].neighbors = count;
    max_nbr = std::max(max_nbr, count);
  }
  const double cutoff = p.core_fraction * static_cast<double>(max_nbr);
  for (auto& pt : pts) pt.core = static_cast<double>(pt.neighbors) > cutoff;
  return pts;
}

/// Adaptive trust threshold: the minimum of the high-trust dense cluster.
///
/// The cluster is seeded with the largest core value (or the largest value
/// when nothing is core) and grown to a fixed point: any value within t_nbr
/// of a core member joins; only core members extend the reach further.
inline std::optional<double> detect_threshold(std::span<const double> values,
                                              const OutlierParams& p) {
  if (values.empty()) return std::nullopt;
  const std::vector<DensityPoint> pts = density_scan(values, p);
  const std::size_t n = pts.size();

  std::size_t seed = n - 1;
  for (std::size_t i = n; i-- > 0;) {
    if (pts[i].core) {
      seed = i;
      break;
    }
  }

  std::vector<bool> member(n, false);
  std::vector<std::size_t> frontier{seed};
  member[seed] = true;
  std::size_t lowest = seed;
  while (!frontier.empty()) {
    const std::size_t i = frontier.back();
    frontier.pop_back();
    if (!pts[i].core && i != seed) continue;
    auto visit = [&](std::size_t j) {
      if (member[j]) return;
      member[j] = true;
      lowest = std::min(lowest, j);
      if (pts[j].core) frontier.push_back(j);
    };
    for (std::size_t j = i; j-- > 0 && std::abs(pts[i].value - pts[j].value) < p.t_nbr;) visit(j);
    for (std::size_t j = i + 1; j < n && std::abs(pts[j].value - pts[i].value) < p.t_nbr; ++j)
      visit(j);
  }
  return pts[lowest].value;
}

/// Latches once the threshold has stayed within th_d of its previous value
/// for n_s consecutive updates.
struct ConvergenceTracker {
  std::optional<double> last_t_th;
  std::uint64_t stable_rounds = 0;
  bool converged = false;

  void update(double t_th, const OutlierParams& p) {
    if (last_t_th && std::abs(t_th - *last_t_th) < p.th_d)
      ++stable_rounds;
    else
      stable_rounds = 0;
    if (stable_rounds >= p.n_s) converged = true;
    last_t_th = t_th;
  }
};

}  // namespace scfto
