#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qhgeo/point.hpp"

namespace qhgeo {

/// The half-space {x_n > 0}.
struct HalfSpace {};

/// Open norm-ball B(center, radius).
struct Ball {
  Point center;
  double radius = 1.0;
};

/// Open axis-aligned box (lo, hi).
struct Box {
  Point lo;
  Point hi;
};

/// Interior of a simple polygon in the plane (either orientation).
struct Polygon {
  std::vector<Point> vertices;
};

using Shape = std::variant<HalfSpace, Ball, Box, Polygon>;

enum class Validation { unchecked, pass, fail };

/// Finite stand-in for the removed point set, with its separation parameter b.
class PunctureSet {
 public:
  PunctureSet() = default;
  explicit PunctureSet(std::vector<Point> points, double b = 0.5,
                       Validation validated = Validation::unchecked);

  const std::vector<Point>& points() const noexcept { return points_; }
  double b() const noexcept { return b_; }
  Validation validated() const noexcept { return validated_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  PunctureSet with_validation(Validation v) const;

 private:
  std::vector<Point> points_;
  double b_ = 0.5;
  Validation validated_ = Validation::unchecked;
};

/// A proper subdomain of R^n: a base shape, a norm and an optional puncture set.
/// Immutable after construction.
class DomainSpec {
 public:
  static DomainSpec half_space(std::size_t dim, double p = 2.0);
  static DomainSpec ball(const Point& center, double radius, double p = 2.0);
  static DomainSpec box(const Point& lo, const Point& hi, double p = 2.0);
  static DomainSpec polygon(std::vector<Point> vertices, double p = 2.0);

  std::size_t dim() const noexcept { return dim_; }
  const Norm& norm() const noexcept { return norm_; }
  const Shape& shape() const noexcept { return shape_; }
  const PunctureSet& punctures() const noexcept { return punctures_; }
  bool has_punctures() const noexcept { return !punctures_.empty(); }
  bool bounded() const noexcept { return !std::holds_alternative<HalfSpace>(shape_); }
  bool convex_base() const noexcept;

  /// The same shape without punctures (the domain D of G = D \ P).
  DomainSpec base() const;

  bool contains(const Point& x) const;

  /// d(x): distance to the complement, including punctures. Throws MembershipError outside.
  double boundary_distance(const Point& x) const;
  /// Distance to the base shape's boundary only (d_D); throws outside the base.
  double base_distance(const Point& x) const;

  /// Distance to the base boundary, positive inside and negative outside. No checks.
  double signed_base_distance(const Point& x) const noexcept;
  /// Distance to the nearest puncture, +inf when there are none.
  double puncture_distance(const Point& x) const noexcept;
  /// min(signed_base_distance, puncture_distance); <= 0 outside the domain. No checks.
  double raw_distance(const Point& x) const noexcept;

  /// Upper bound of the base distance over the axis box [lo, hi] (exact for
  /// half-space, ball and box; Lipschitz bound for polygons).
  double max_base_distance_over_box(const Point& lo, const Point& hi) const noexcept;

  /// Axis box containing the base shape; std::nullopt for the half-space.
  std::optional<std::pair<Point, Point>> bounding_box() const;

  /// Sampling window: the bounding box, or [-4,4]^{n-1} x (0,4] for the half-space.
  std::pair<Point, Point> sampling_window() const;

  /// Minimum distance from the closed segment [a, b] to the base boundary,
  /// assuming both endpoints are inside the base (0 if the segment leaves it).
  double segment_base_clearance(const Point& a, const Point& b) const;

  /// Minimum distance from the closed segment [a, b] to the puncture set (+inf if none).
  double segment_puncture_clearance(const Point& a, const Point& b) const;

 private:
  friend DomainSpec with_punctures(const DomainSpec& base, PunctureSet punctures);

  DomainSpec(Shape shape, std::size_t dim, Norm norm);

  Shape shape_;
  std::size_t dim_ = 2;
  Norm norm_;
  PunctureSet punctures_;
};

/// G = D \ P. Rejects punctures that are not strictly inside the base shape or
/// that repeat. Replaces any punctures the base already carried.
DomainSpec with_punctures(const DomainSpec& base, PunctureSet punctures);

/// `count` seeded points with boundary_distance >= min_clearance, by rejection
/// sampling in the sampling window. Throws SamplerExhausted after
/// 1000 * count + 10000 attempts.
std::vector<Point> sample_interior(const DomainSpec& d, std::size_t count, std::uint64_t seed,
                                   double min_clearance);

/// Distance in `norm` from x to the closed segment [a, b]; `t_out` receives the minimizing parameter.
double point_segment_distance(const Norm& norm, const Point& x, const Point& a, const Point& b,
                              double* t_out = nullptr);

/// Golden-section minimizer of a unimodal function on [lo, hi].
template <class F>
double golden_minimize(F&& f, double lo, double hi, int iterations, double* fmin = nullptr) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iterations && b - a > 0.0; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double best = fc <= fd ? c : d;
  double fbest = std::min(fc, fd);
  const double fa = f(lo), fb = f(hi);
  if (fa < fbest) {
    best = lo;
    fbest = fa;
  }
  if (fb < fbest) {
    best = hi;
    fbest = fb;
  }
  if (fmin) *fmin = fbest;
  return best;
}

}  // namespace qhgeo
