#pragma once

#include <optional>

#include "qhgeo/arc.hpp"
#include "qhgeo/domain.hpp"

namespace qhgeo {

/// Certified interval [lower, upper] for a distance, with the arc realizing `upper`.
struct MetricBracket {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<Arc> witness;
  /// Set when the solver stopped on its budget before reaching the requested width.
  bool budget_exhausted = false;

  double midpoint() const noexcept { return 0.5 * (lower + upper); }
  double ratio() const noexcept { return lower > 0.0 ? upper / lower : (upper > 0.0 ? kInfinity : 1.0); }
};

/// j(x, y) = log(1 + |x - y| / min(d(x), d(y))).
double j_metric(const DomainSpec& d, const Point& x, const Point& y);

/// |log(d(y) / d(x))|.
double log_ratio_lower(const DomainSpec& d, const Point& x, const Point& y);

/// log(1 + r / (d - r)) with r = |x - y| and d the larger endpoint depth, when r < d.
std::optional<double> segment_upper(const DomainSpec& d, const Point& x, const Point& y);

/// Quasihyperbolic length of the segment [a, b]: the integral of 1/d. Returns
/// +inf when the segment comes within 1e-13 of its length of the boundary or a
/// puncture. Endpoints are not checked.
double qh_segment_length(const DomainSpec& d, const Point& a, const Point& b, double rel_tol = 1e-9);

/// Quasihyperbolic length of a polyline; +inf if it touches the complement.
/// Throws MembershipError if a vertex lies outside the domain.
double qh_arc_length(const DomainSpec& d, const Arc& a, double rel_tol = 1e-9);

/// Smallest distance to the complement along the arc (0 if it leaves the domain).
double arc_clearance(const DomainSpec& d, const Arc& a);

/// Inner length distance: the infimum of Euclidean-type lengths of arcs in d.
/// lower is a certified bound (|x - y|, or the exact visibility-graph length in
/// polygons); upper is the length of the returned witness, which lies in d.
MetricBracket inner_distance(const DomainSpec& d, const Point& x, const Point& y, double rel_tol = 1e-6);

}  // namespace qhgeo
