#pragma once

// Interval type-2 fuzzy trust evaluation: (DFD, DFR) -> trust in [0, 1].
//
// Pipeline: antecedent grade intervals, product firing intervals, alpha-cut
// consequent intervals, normalized and sorted endpoint lists, EIASC type
// reduction, and midpoint defuzzification.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scfto::fuzzy {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Raised when type reduction is asked to average an all-zero weight list.
class NoEvidenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Breakpoint {
  double x = 0.0;
  double grade = 0.0;
};

/// Membership function defined by linear interpolation between breakpoints.
/// Outside the breakpoint span the nearest end grade is held, so a set whose
/// last breakpoint is (1, 1) acts as a right shoulder.
class PiecewiseLinearMF {
 public:
  PiecewiseLinearMF() = default;

  explicit PiecewiseLinearMF(std::vector<Breakpoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw std::invalid_argument("membership function needs breakpoints");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!(points_[i].grade >= 0.0 && points_[i].grade <= 1.0))
        throw std::invalid_argument("membership grade outside [0, 1]");
      if (i > 0 && !(points_[i].x > points_[i - 1].x))
        throw std::invalid_argument("breakpoints must be strictly increasing in x");
    }
  }

  /// Trapezoid with feet a, d and plateau [b, c]. Coincident feet collapse
  /// into the plateau, producing a shoulder.
  static PiecewiseLinearMF trapezoid(double a, double b, double c, double d) {
    std::vector<Breakpoint> pts;
    if (a < b) pts.push_back({a, 0.0});
    pts.push_back({b, 1.0});
    if (c > b) pts.push_back({c, 1.0});
    if (d > c) pts.push_back({d, 0.0});
    return PiecewiseLinearMF(std::move(pts));
  }

  static PiecewiseLinearMF triangle(double a, double b, double c) {
    return trapezoid(a, b, b, c);
  }

  double operator()(double x) const {
    if (x <= points_.front().x) return points_.front().grade;
    if (x >= points_.back().x) return points_.back().grade;
    auto hi = std::upper_bound(points_.begin(), points_.end(), x,
                               [](double v, const Breakpoint& p) { return v < p.x; });
    auto lo = hi - 1;
    const double t = (x - lo->x) / (hi->x - lo->x);
    return lo->grade + t * (hi->grade - lo->grade);
  }

  const std::vector<Breakpoint>& points() const { return points_; }

 private:
  std::vector<Breakpoint> points_{{0.0, 0.0}};
};

/// Interval type-2 set: upper and lower membership functions bounding the
/// footprint of uncertainty.
struct IT2Set {
  std::string name;
  PiecewiseLinearMF umf;
  PiecewiseLinearMF lmf;

  /// Throws unless lmf <= umf everywhere on a 1e-3 grid of [0, 1].
  void validate() const {
    for (int i = 0; i <= 1000; ++i) {
      const double x = i / 1000.0;
      if (lmf(x) > umf(x) + 1e-12)
        throw std::invalid_argument("set '" + name + "': LMF exceeds UMF");
    }
  }
};

inline Interval membership_interval(const IT2Set& set, double x) {
  return {set.lmf(x), set.umf(x)};
}

enum class Level : int { Low = 0, Medium = 1, High = 2 };

/// The seven trust labels, ordered from least to most trusting.
enum class TrustLabel : int {
  CompleteDistrust = 0,
  IntenseDistrust = 1,
  Distrust = 2,
  MediumDistrust = 3,
  MediumTrust = 4,
  Trust = 5,
  CompleteTrust = 6,
};

inline constexpr std::array<const char*, 7> kTrustLabelNames = {
    "complete_distrust", "intense_distrust", "distrust",    "medium_distrust",
    "medium_trust",      "trust",            "complete_trust"};

/// Type-1 triangular trust set with support [a, b] and peak c.
struct T1TrustSet {
  TrustLabel label = TrustLabel::CompleteDistrust;
  double a = 0.0;
  double c = 0.0;
  double b = 0.0;

  bool symmetric() const { return std::abs((c - a) - (b - c)) < 1e-12; }

  double membership(double x) const {
    if (x < a || x > b) return 0.0;
    if (x == c) return 1.0;
    if (x < c) return (x - a) / (c - a);
    return (b - x) / (b - c);
  }

  /// Alpha-cut at level g: the sub-interval where membership >= g.
  Interval cut(double g) const { return {a + g * (c - a), b - g * (b - c)}; }
};

struct TrustRule {
  int number = 0;
  Level dfd = Level::Low;
  Level dfr = Level::Low;
  TrustLabel consequent = TrustLabel::CompleteDistrust;
};

/// Inference rules 2..10. Rule 1 (DFR below the bypass level) is a hard zero
/// checked before inference.
inline constexpr std::array<TrustRule, 9> kTrustRules = {{
    {2, Level::Low, Level::High, TrustLabel::CompleteTrust},
    {3, Level::Medium, Level::High, TrustLabel::Trust},
    {4, Level::High, Level::High, TrustLabel::MediumTrust},
    {5, Level::Low, Level::Medium, TrustLabel::MediumTrust},
    {6, Level::Medium, Level::Medium, TrustLabel::MediumDistrust},
    {7, Level::High, Level::Medium, TrustLabel::Distrust},
    {8, Level::Low, Level::Low, TrustLabel::Distrust},
    {9, Level::Medium, Level::Low, TrustLabel::IntenseDistrust},
    {10, Level::High, Level::Low, TrustLabel::CompleteDistrust},
}};

struct FlcConfig {
  std::array<IT2Set, 3> dfd;
  std::array<IT2Set, 3> dfr;
  std::array<T1TrustSet, 7> trust;
  double bypass_dfr = 0.2;

  void validate() const {
    for (const auto& s : dfd) s.validate();
    for (const auto& s : dfr) s.validate();
    for (std::size_t k = 0; k < trust.size(); ++k) {
      const auto& t = trust[k];
      if (!(t.a <= t.c && t.c <= t.b) || t.a < 0.0 || t.b > 1.0)
        throw std::invalid_argument(std::string("trust set ") + kTrustLabelNames[k] +
                                    " needs 0 <= a <= c <= b <= 1");
    }
  }
};

/// Low/Medium/High over [0, 1]. The lower functions share the upper
/// functions' plateaus; with these corners the controller output is monotone
/// in both inputs.
inline std::array<IT2Set, 3> default_antecedent_sets(const std::string& prefix) {
  using MF = PiecewiseLinearMF;
  return {{
      {prefix + ".low", MF::trapezoid(0.0, 0.0, 0.2, 0.5), MF::trapezoid(0.0, 0.0, 0.2, 0.4)},
      {prefix + ".medium", MF::triangle(0.2, 0.5, 0.8), MF::triangle(0.3, 0.5, 0.7)},
      {prefix + ".high", MF::trapezoid(0.5, 0.8, 1.0, 1.0), MF::trapezoid(0.6, 0.8, 1.0, 1.0)},
  }};
}

/// Seven triangles peaking at k/6 with half-width 1/6, clipped to [0, 1].
inline std::array<T1TrustSet, 7> default_trust_sets() {
  std::array<T1TrustSet, 7> sets;
  for (int k = 0; k < 7; ++k) {
    const double c = k / 6.0;
    sets[k] = {static_cast<TrustLabel>(k), std::max(0.0, c - 1.0 / 6.0), c,
               std::min(1.0, c + 1.0 / 6.0)};
  }
  return sets;
}

inline FlcConfig default_flc() {
  return {default_antecedent_sets("dfd"), default_antecedent_sets("dfr"), default_trust_sets(),
          0.2};
}

/// Product t-norm of the two antecedent grade intervals.
inline Interval fire_rule(Interval g1, Interval g2) { return {g1.lo * g2.lo, g1.hi * g2.hi}; }

struct ConsequentEntry {
  Interval trust;   // [T_L, T_R] of the cut
  Interval grades;  // [lower, upper] firing weight carried by the cut
};

/// Output trust interval(s) of one rule. A symmetric consequent that is not
/// fully fired yields two cuts, at the lower and upper firing grades, sharing
/// half the firing interval each. Zero-firing rules still produce entries.
inline std::vector<ConsequentEntry> consequent_intervals(Interval firing, const T1TrustSet& set) {
  if (!set.symmetric()) return {{set.cut(firing.lo), firing}};
  if (firing.lo >= 1.0 - 1e-12) return {{set.cut(1.0), firing}};
  const Interval half{firing.lo / 2.0, firing.hi / 2.0};
  return {{set.cut(firing.lo), half}, {set.cut(firing.hi), half}};
}

struct WeightedEndpoint {
  double value = 0.0;
  Interval grades;
};

/// Left and right endpoint lists, each sorted ascending by value with the
/// lower and upper grades normalized to unit sums.
struct WeightedEndpointList {
  std::vector<WeightedEndpoint> left;
  std::vector<WeightedEndpoint> right;

  std::size_t size() const { return left.size(); }
};

namespace detail {

inline void normalize(std::vector<WeightedEndpoint>& list) {
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& e : list) {
    lo += e.grades.lo;
    hi += e.grades.hi;
  }
  for (auto& e : list) {
    if (lo > 0.0) e.grades.lo /= lo;
    if (hi > 0.0) e.grades.hi /= hi;
  }
}

inline void sort_by_value(std::vector<WeightedEndpoint>& list) {
  std::stable_sort(list.begin(), list.end(),
                   [](const WeightedEndpoint& x, const WeightedEndpoint& y) { return x.value < y.value; });
}

}  // namespace detail

inline WeightedEndpointList make_endpoint_list(const std::vector<ConsequentEntry>& entries) {
  WeightedEndpointList out;
  out.left.reserve(entries.size());
  out.right.reserve(entries.size());
  for (const auto& e : entries) {
    out.left.push_back({e.trust.lo, e.grades});
    out.right.push_back({e.trust.hi, e.grades});
  }
  for (auto* side : {&out.left, &out.right}) {
    detail::sort_by_value(*side);
    detail::normalize(*side);
  }
  return out;
}

namespace detail {

/// Separately normalized grades can cross (a normalized lower grade above
/// the upper one). Type reduction reads each pair as the interval it spans.
inline Interval weight_bounds(const Interval& g) {
  return g.lo <= g.hi ? g : Interval{g.hi, g.lo};
}

}  // namespace detail

/// Left end of the type-reduced set: the minimum over switch points
/// m = 1..l-1 of the weighted average with upper grades on the m smallest
/// endpoints and lower grades on the rest. EIASC walks m upward from 1 and
/// stops once the average no longer exceeds the next endpoint.
inline double eiasc_left(const std::vector<WeightedEndpoint>& pts) {
  const std::size_t l = pts.size();
  if (l == 0) throw NoEvidenceError("empty endpoint list");
  double a = 0.0;
  double b = 0.0;
  for (const auto& p : pts) {
    a += p.value * detail::weight_bounds(p.grades).lo;
    b += detail::weight_bounds(p.grades).lo;
  }
  if (l == 1) {
    if (detail::weight_bounds(pts[0].grades).hi <= 0.0)
      throw NoEvidenceError("all firing grades are zero");
    return pts[0].value;
  }
  std::size_t m = 0;
  double y = 0.0;
  while (true) {
    const Interval w = detail::weight_bounds(pts[m].grades);
    const double dw = w.hi - w.lo;
    a += pts[m].value * dw;
    b += dw;
    ++m;
    const bool defined = b > 0.0;
    if (defined) y = a / b;
    if (m == l - 1) {
      if (!defined) throw NoEvidenceError("all firing grades are zero");
      return y;
    }
    if (defined && y <= pts[m].value) return y;
  }
}

/// Right end: the maximum over n = 1..l-1 with lower grades on the n smallest
/// endpoints and upper grades on the rest. EIASC walks n downward from l-1.
inline double eiasc_right(const std::vector<WeightedEndpoint>& pts) {
  const std::size_t l = pts.size();
  if (l == 0) throw NoEvidenceError("empty endpoint list");
  double a = 0.0;
  double b = 0.0;
  for (const auto& p : pts) {
    a += p.value * detail::weight_bounds(p.grades).lo;
    b += detail::weight_bounds(p.grades).lo;
  }
  if (l == 1) {
    if (detail::weight_bounds(pts[0].grades).hi <= 0.0)
      throw NoEvidenceError("all firing grades are zero");
    return pts[0].value;
  }
  std::size_t n = l;
  double y = 0.0;
  while (true) {
    --n;
    const Interval w = detail::weight_bounds(pts[n].grades);
    const double dw = w.hi - w.lo;
    a += pts[n].value * dw;
    b += dw;
    const bool defined = b > 0.0;
    if (defined) y = a / b;
    if (n == 1) {
      if (!defined) throw NoEvidenceError("all firing grades are zero");
      return y;
    }
    if (defined && y >= pts[n - 1].value) return y;
  }
}

/// Center-of-sets type reduction of a normalized, sorted endpoint list.
inline Interval type_reduce(const WeightedEndpointList& list) {
  bool any = false;
  for (const auto& e : list.left) any = any || e.grades.hi > 0.0 || e.grades.lo > 0.0;
  if (!any) throw NoEvidenceError("all firing grades are zero");
  return {eiasc_left(list.left), eiasc_right(list.right)};
}

/// Classifies a crisp trust value by maximum membership among the seven
/// trust sets. Ties go to the less trusting label.
inline TrustLabel classify_trust(double value, const std::array<T1TrustSet, 7>& sets) {
  std::size_t best = 0;
  double best_grade = -1.0;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const double g = sets[k].membership(value);
    if (g > best_grade) {
      best_grade = g;
      best = k;
    }
  }
  return sets[best].label;
}

/// Full record of one inference, kept for diagnostics and tests.
struct Inference {
  std::array<Interval, 9> firing{};
  WeightedEndpointList endpoints;
  Interval reduced;
  double trust = 0.0;
  bool bypassed = false;
};

/// The trust controller: a fixed rule base over configurable sets.
class TrustFlc {
 public:
  explicit TrustFlc(FlcConfig config = default_flc()) : config_(std::move(config)) {
    config_.validate();
  }

  const FlcConfig& config() const { return config_; }

  Inference infer(double dfd, double dfr) const {
    if (!(dfd >= 0.0 && dfd <= 1.0) || !(dfr >= 0.0 && dfr <= 1.0))
      throw std::invalid_argument("DFD and DFR must lie in [0, 1]");
    Inference out;
    if (dfr < config_.bypass_dfr) {
      out.bypassed = true;
      return out;
    }
    std::vector<ConsequentEntry> entries;
    entries.reserve(16);
    for (std::size_t k = 0; k < kTrustRules.size(); ++k) {
      const TrustRule& rule = kTrustRules[k];
      const Interval g1 = membership_interval(config_.dfd[static_cast<int>(rule.dfd)], dfd);
      const Interval g2 = membership_interval(config_.dfr[static_cast<int>(rule.dfr)], dfr);
      out.firing[k] = fire_rule(g1, g2);
      auto cuts =
          consequent_intervals(out.firing[k], config_.trust[static_cast<int>(rule.consequent)]);
      entries.insert(entries.end(), cuts.begin(), cuts.end());
    }
    out.endpoints = make_endpoint_list(entries);
    out.reduced = type_reduce(out.endpoints);
    out.trust = 0.5 * (out.reduced.lo + out.reduced.hi);
    return out;
  }

  double evaluate(double dfd, double dfr) const { return infer(dfd, dfr).trust; }

 private:
  FlcConfig config_;
};

}  // namespace scfto::fuzzy
