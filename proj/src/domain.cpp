#include "qhgeo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhgeo/errors.hpp"
#include "qhgeo/rng.hpp"
#include "planar.hpp"

namespace qhgeo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double polygon_edge_distance(const Norm& norm, const std::vector<Point>& poly, const Point& x) {
  double best = kInfinity;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    best = std::min(best, point_segment_distance(norm, x, poly[i], poly[(i + 1) % n]));
  }
  return best;
}

void validate_polygon(const std::vector<Point>& v) {
  const std::size_t n = v.size();
  if (n < 3) throw InvalidArgument("polygon needs at least 3 vertices");
  for (const auto& p : v) {
    if (p.dim() != 2) throw InvalidArgument("polygons are planar (dimension 2)");
    if (!p.is_finite()) throw InvalidArgument("polygon vertex is not finite");
  }
  double area2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % n];
    if (a == b) throw InvalidArgument("polygon has repeated consecutive vertices");
    area2 += a[0] * b[1] - a[1] * b[0];
  }
  if (area2 == 0.0) throw InvalidArgument("polygon has zero area");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (planar::segments_intersect2(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
        throw InvalidArgument("polygon is not simple: edges " + std::to_string(i) + " and " +
                              std::to_string(j) + " intersect");
      }
    }
  }
}

}  // namespace

double point_segment_distance(const Norm& norm, const Point& x, const Point& a, const Point& b,
                              double* t_out) {
  const Point ab = b - a;
  double t = 0.0;
  if (norm.is_euclidean()) {
    const double len2 = dot(ab, ab);
    if (len2 > 0.0) t = std::clamp(dot(x - a, ab) / len2, 0.0, 1.0);
  } else if (!(ab == Point(ab.dim()))) {
    t = golden_minimize([&](double s) { return norm(x - lerp(a, b, s)); }, 0.0, 1.0, 80);
  }
  if (t_out) *t_out = t;
  return norm(x - lerp(a, b, t));
}

PunctureSet::PunctureSet(std::vector<Point> points, double b, Validation validated)
    : points_(std::move(points)), b_(b), validated_(validated) {
  if (!(b_ > 0.0)) throw InvalidArgument("separation parameter b must be positive");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!points_[i].is_finite()) throw InvalidArgument("puncture is not finite");
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[i] == points_[j]) throw InvalidArgument("punctures must be pairwise distinct");
    }
  }
}

PunctureSet PunctureSet::with_validation(Validation v) const {
  PunctureSet copy = *this;
  copy.validated_ = v;
  return copy;
}

DomainSpec::DomainSpec(Shape shape, std::size_t dim, Norm norm)
    : shape_(std::move(shape)), dim_(dim), norm_(norm) {
  if (dim_ < 2 || dim_ > kMaxDim) throw InvalidArgument("domain dimension must be 2 or 3");
}

DomainSpec DomainSpec::half_space(std::size_t dim, double p) { return DomainSpec(HalfSpace{}, dim, Norm(p)); }

DomainSpec DomainSpec::ball(const Point& center, double radius, double p) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be positive");
  if (!center.is_finite()) throw InvalidArgument("ball center is not finite");
  return DomainSpec(Ball{center, radius}, center.dim(), Norm(p));
}

DomainSpec DomainSpec::box(const Point& lo, const Point& hi, double p) {
  if (lo.dim() != hi.dim()) throw InvalidArgument("box corners have different dimensions");
  for (std::size_t i = 0; i < lo.dim(); ++i) {
    if (!(lo[i] < hi[i])) throw InvalidArgument("box requires lo < hi in every coordinate");
  }
  return DomainSpec(Box{lo, hi}, lo.dim(), Norm(p));
}

DomainSpec DomainSpec::polygon(std::vector<Point> vertices, double p) {
  validate_polygon(vertices);
  return DomainSpec(Polygon{std::move(vertices)}, 2, Norm(p));
}

bool DomainSpec::convex_base() const noexcept {
  if (const auto* poly = std::get_if<Polygon>(&shape_)) {
    const auto& v = poly->vertices;
    const std::size_t n = v.size();
    int sign = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double c = planar::cross2(v[i], v[(i + 1) % n], v[(i + 2) % n]);
      if (c == 0.0) continue;
      const int s = c > 0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
  }
  return true;
}

DomainSpec DomainSpec::base() const {
  DomainSpec copy = *this;
  copy.punctures_ = PunctureSet{};
  return copy;
}

double DomainSpec::signed_base_distance(const Point& x) const noexcept {
  return std::visit(
      Overloaded{
          [&](const HalfSpace&) { return x[dim_ - 1]; },
          [&](const Ball& b) { return b.radius - norm_.distance(x, b.center); },
          [&](const Box& b) {
            double m = kInfinity;
            for (std::size_t i = 0; i < dim_; ++i) m = std::min({m, x[i] - b.lo[i], b.hi[i] - x[i]});
            if (m >= 0.0) return m;
            // Outside: distance to the box, negated.
            Point gap(dim_);
            for (std::size_t i = 0; i < dim_; ++i) {
              gap[i] = std::max({b.lo[i] - x[i], 0.0, x[i] - b.hi[i]});
            }
            return -norm_(gap);
          },
          [&](const Polygon& p) {
            const double d = polygon_edge_distance(norm_, p.vertices, x);
            return planar::point_in_polygon(p.vertices, x) ? d : -d;
          },
      },
      shape_);
}

double DomainSpec::puncture_distance(const Point& x) const noexcept {
  double best = kInfinity;
  for (const auto& p : punctures_.points()) best = std::min(best, norm_.distance(x, p));
  return best;
}

double DomainSpec::raw_distance(const Point& x) const noexcept {
  return std::min(signed_base_distance(x), puncture_distance(x));
}

bool DomainSpec::contains(const Point& x) const {
  if (x.dim() != dim_ || !x.is_finite()) return false;
  return raw_distance(x) > 0.0;
}

double DomainSpec::boundary_distance(const Point& x) const {
  if (x.dim() != dim_) throw MembershipError("point dimension does not match the domain");
  const double d = raw_distance(x);
  if (!(d > 0.0)) throw MembershipError("point " + x.to_string() + " is not in the domain");
  return d;
}

double DomainSpec::base_distance(const Point& x) const {
  if (x.dim() != dim_) throw MembershipError("point dimension does not match the domain");
  const double d = signed_base_distance(x);
  if (!(d > 0.0)) throw MembershipError("point " + x.to_string() + " is not in the base domain");
  return d;
}

double DomainSpec::max_base_distance_over_box(const Point& lo, const Point& hi) const noexcept {
  return std::visit(
      Overloaded{
          [&](const HalfSpace&) { return hi[dim_ - 1]; },
          [&](const Ball& b) {
            Point gap(dim_);
            for (std::size_t i = 0; i < dim_; ++i) {
              gap[i] = std::max({lo[i] - b.center[i], 0.0, b.center[i] - hi[i]});
            }
            return b.radius - norm_(gap);
          },
          [&](const Box& b) {
            double m = kInfinity;
            for (std::size_t i = 0; i < dim_; ++i) {
              const double mid = std::clamp(0.5 * (b.lo[i] + b.hi[i]), lo[i], hi[i]);
              m = std::min(m, std::min(mid - b.lo[i], b.hi[i] - mid));
            }
            return m;
          },
          [&](const Polygon&) {
            const Point c = (lo + hi) * 0.5;
            return signed_base_distance(c) + norm_((hi - lo) * 0.5);
          },
      },
      shape_);
}

std::optional<std::pair<Point, Point>> DomainSpec::bounding_box() const {
  return std::visit(
      Overloaded{
          [&](const HalfSpace&) -> std::optional<std::pair<Point, Point>> { return std::nullopt; },
          [&](const Ball& b) -> std::optional<std::pair<Point, Point>> {
            // Every p-ball lies inside the sup-norm ball of the same radius.
            Point lo = b.center, hi = b.center;
            for (std::size_t i = 0; i < dim_; ++i) {
              lo[i] -= b.radius;
              hi[i] += b.radius;
            }
            return std::make_pair(lo, hi);
          },
          [&](const Box& b) -> std::optional<std::pair<Point, Point>> { return std::make_pair(b.lo, b.hi); },
          [&](const Polygon& p) -> std::optional<std::pair<Point, Point>> {
            Point lo = p.vertices.front(), hi = p.vertices.front();
            for (const auto& v : p.vertices) {
              for (std::size_t i = 0; i < 2; ++i) {
                lo[i] = std::min(lo[i], v[i]);
                hi[i] = std::max(hi[i], v[i]);
              }
            }
            return std::make_pair(lo, hi);
          },
      },
      shape_);
}

std::pair<Point, Point> DomainSpec::sampling_window() const {
  if (auto bb = bounding_box()) return *bb;
  Point lo(dim_), hi(dim_);
  for (std::size_t i = 0; i + 1 < dim_; ++i) {
    lo[i] = -4.0;
    hi[i] = 4.0;
  }
  lo[dim_ - 1] = 0.0;
  hi[dim_ - 1] = 4.0;
  return {lo, hi};
}

double DomainSpec::segment_base_clearance(const Point& a, const Point& b) const {
  const double da = signed_base_distance(a);
  const double db = signed_base_distance(b);
  if (da <= 0.0 || db <= 0.0) return 0.0;
  const auto* poly = std::get_if<Polygon>(&shape_);
  if (poly == nullptr) return std::min(da, db);  // concave distance on convex shapes
  const auto& v = poly->vertices;
  const std::size_t n = v.size();
  double best = std::min(da, db);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& e0 = v[i];
    const Point& e1 = v[(i + 1) % n];
    if (planar::segments_intersect2(a, b, e0, e1)) return 0.0;
    // Disjoint segments: the minimum is attained at an endpoint of one of them, in any norm.
    best = std::min({best, point_segment_distance(norm_, e0, a, b), point_segment_distance(norm_, e1, a, b)});
  }
  return best;
}

double DomainSpec::segment_puncture_clearance(const Point& a, const Point& b) const {
  double best = kInfinity;
  for (const auto& p : punctures_.points()) best = std::min(best, point_segment_distance(norm_, p, a, b));
  return best;
}

DomainSpec with_punctures(const DomainSpec& base, PunctureSet punctures) {
  DomainSpec out = base.base();
  for (const auto& p : punctures.points()) {
    if (p.dim() != base.dim()) throw InvalidArgument("puncture dimension does not match the domain");
    if (!(out.signed_base_distance(p) > 0.0)) {
      throw InvalidArgument("puncture " + p.to_string() + " is not strictly inside the base domain");
    }
  }
  out.punctures_ = std::move(punctures);
  return out;
}

std::vector<Point> sample_interior(const DomainSpec& d, std::size_t count, std::uint64_t seed,
                                   double min_clearance) {
  if (count == 0) throw InvalidArgument("sample count must be positive");
  if (min_clearance < 0.0) throw InvalidArgument("min_clearance must be nonnegative");
  const auto [lo, hi] = d.sampling_window();
  Rng rng(seed);
  std::vector<Point> out;
  out.reserve(count);
  const std::size_t max_attempts = 1000 * count + 10000;
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    const Point x = rng.in_box(lo, hi);
    const double dist = d.raw_distance(x);
    if (dist > 0.0 && dist >= min_clearance) out.push_back(x);
  }
  if (out.size() < count) {
    throw SamplerExhausted("placed " + std::to_string(out.size()) + " of " + std::to_string(count) +
                           " points with clearance " + std::to_string(min_clearance) + " after " +
                           std::to_string(max_attempts) + " attempts");
  }
  return out;
}

}  // namespace qhgeo
