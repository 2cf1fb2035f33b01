#include "planar.hpp"

#include <algorithm>
#include <cmath>

namespace qhgeo::planar {

double cross2(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

static bool on_segment2(const Point& a, const Point& b, const Point& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) && std::min(a[1], b[1]) <= p[1] &&
         p[1] <= std::max(a[1], b[1]);
}

bool segments_intersect2(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = cross2(q1, q2, p1);
  const double d2 = cross2(q1, q2, p2);
  const double d3 = cross2(p1, p2, q1);
  const double d4 = cross2(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment2(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment2(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment2(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment2(p1, p2, q2)) return true;
  return false;
}

bool point_in_polygon(const std::vector<Point>& poly, const Point& x) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = poly[i];
    const Point& b = poly[j];
    if ((a[1] > x[1]) != (b[1] > x[1])) {
      const double xc = (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0];
      if (x[0] < xc) inside = !inside;
    }
  }
  return inside;
}

namespace {

// Parameter t in [0, 1] of the intersection of [a, b] with the line through
// [c, e], when the two segments meet at a single point.
void collect_contacts(const Point& a, const Point& b, const Point& c, const Point& e, std::vector<double>& ts) {
  const Point r = b - a;
  const Point s = e - c;
  const double denom = r[0] * s[1] - r[1] * s[0];
  const Point ca = c - a;
  const double rr = r[0] * r[0] + r[1] * r[1];
  if (denom == 0.0) {
    // Parallel: record the projections of the edge endpoints that lie on [a, b].
    if (cross2(a, b, c) != 0.0 || rr == 0.0) return;
    for (const Point* q : {&c, &e}) {
      const Point qa = *q - a;
      const double t = (qa[0] * r[0] + qa[1] * r[1]) / rr;
      if (t >= 0.0 && t <= 1.0) ts.push_back(t);
    }
    return;
  }
  const double t = (ca[0] * s[1] - ca[1] * s[0]) / denom;
  const double u = (ca[0] * r[1] - ca[1] * r[0]) / denom;
  if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) ts.push_back(t);
}

double edge_distance2(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(x - a, ab) / len2, 0.0, 1.0) : 0.0;
  return euclidean_norm(x - lerp(a, b, t));
}

}  // namespace

bool segment_in_closed_polygon(const std::vector<Point>& poly, const Point& a, const Point& b) {
  const std::size_t n = poly.size();
  std::vector<double> ts{0.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) collect_contacts(a, b, poly[i], poly[(i + 1) % n], ts);
  std::sort(ts.begin(), ts.end());
  double scale = 0.0;
  for (const auto& v : poly) scale = std::max({scale, std::abs(v[0]), std::abs(v[1])});
  const double eps = 1e-12 * std::max(scale, 1.0);
  // Between consecutive boundary contacts the segment cannot cross the
  // boundary, so one interior probe per piece decides it.
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    if (ts[k + 1] - ts[k] <= 0.0) continue;
    const Point mid = lerp(a, b, 0.5 * (ts[k] + ts[k + 1]));
    if (point_in_polygon(poly, mid)) continue;
    double dist = kInfinity;
    for (std::size_t i = 0; i < n; ++i) dist = std::min(dist, edge_distance2(mid, poly[i], poly[(i + 1) % n]));
    if (dist > eps) return false;
  }
  return true;
}

}  // namespace qhgeo::planar
