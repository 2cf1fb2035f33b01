#include "qhgeo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "planar.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/quadrature.hpp"

namespace qhgeo {

double j_metric(const DomainSpec& d, const Point& x, const Point& y) {
  const double dx = d.boundary_distance(x);
  const double dy = d.boundary_distance(y);
  return std::log1p(d.norm().distance(x, y) / std::min(dx, dy));
}

double log_ratio_lower(const DomainSpec& d, const Point& x, const Point& y) {
  const double dx = d.boundary_distance(x);
  const double dy = d.boundary_distance(y);
  return std::abs(std::log(dy / dx));
}

std::optional<double> segment_upper(const DomainSpec& d, const Point& x, const Point& y) {
  const double deep = std::max(d.boundary_distance(x), d.boundary_distance(y));
  const double r = d.norm().distance(x, y);
  if (!(r < deep)) return std::nullopt;
  return std::log1p(r / (deep - r));
}

namespace {

// Parameters in (0, 1) where 1/d along [a, b] peaks or kinks sharply.
std::vector<double> segment_breakpoints(const DomainSpec& d, const Point& a, const Point& b) {
  std::vector<double> ts{0.0, 1.0};
  auto add_closest = [&](const Point& q) {
    double t = 0.0;
    point_segment_distance(d.norm(), q, a, b, &t);
    if (t > 0.0 && t < 1.0) ts.push_back(t);
  };
  for (const auto& q : d.punctures().points()) add_closest(q);
  if (const auto* poly = std::get_if<Polygon>(&d.shape())) {
    for (const auto& v : poly->vertices) add_closest(v);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

double qh_segment_length(const DomainSpec& d, const Point& a, const Point& b, double rel_tol) {
  const double len = d.norm().distance(a, b);
  if (len == 0.0) return 0.0;
  const double clearance = std::min(d.segment_base_clearance(a, b), d.segment_puncture_clearance(a, b));
  if (!(clearance >= 1e-13 * len)) return kInfinity;
  const auto ts = segment_breakpoints(d, a, b);
  auto integrand = [&](double t) { return len / d.raw_distance(lerp(a, b, t)); };
  // Coarse estimate to turn the relative tolerance into an absolute one.
  double estimate = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double w = ts[i + 1] - ts[i];
    estimate += w / 6.0 * (integrand(ts[i]) + 4.0 * integrand(0.5 * (ts[i] + ts[i + 1])) + integrand(ts[i + 1]));
  }
  const double tol = std::max(rel_tol, 1e-15) * estimate;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double w = ts[i + 1] - ts[i];
    if (w <= 0.0) continue;
    total += adaptive_simpson(integrand, ts[i], ts[i + 1], tol * w).value;
  }
  return total;
}

double qh_arc_length(const DomainSpec& d, const Arc& a, double rel_tol) {
  const auto& v = a.vertices();
  for (const auto& p : v) d.boundary_distance(p);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    total += qh_segment_length(d, v[i], v[i + 1], rel_tol);
    if (std::isinf(total)) return kInfinity;
  }
  return total;
}

double arc_clearance(const DomainSpec& d, const Arc& a) {
  const auto& v = a.vertices();
  double best = std::max(0.0, d.raw_distance(v.front()));
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    best = std::min({best, d.segment_base_clearance(v[i], v[i + 1]), d.segment_puncture_clearance(v[i], v[i + 1])});
  }
  return std::max(best, 0.0);
}

namespace {

// Routes the straight segment [x, y] around any puncture it passes through by
// inserting one vertex per puncture, offset perpendicular by a small eps.
Arc detour_punctures(const DomainSpec& d, const Point& x, const Point& y, double rel_tol) {
  const Norm& norm = d.norm();
  const double len = norm.distance(x, y);
  struct Hit {
    double t;
    Point p;
  };
  std::vector<Hit> hits;
  for (const auto& p : d.punctures().points()) {
    double t = 0.0;
    const double dist = point_segment_distance(norm, p, x, y, &t);
    if (dist < 1e-12 * std::max(len, 1.0)) hits.push_back({t, p});
  }
  if (hits.empty()) return Arc::segment(x, y, norm);
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.t < b.t; });
  // Unit direction perpendicular to the segment (Euclidean sense is enough for a side choice).
  const Point dir = (y - x) / euclidean_norm(y - x);
  Point perp(d.dim());
  {
    std::size_t axis = 0;
    for (std::size_t i = 1; i < d.dim(); ++i) {
      if (std::abs(dir[i]) < std::abs(dir[axis])) axis = i;
    }
    perp = unit_vector(d.dim(), axis) - dir * dir[axis];
    perp = perp / euclidean_norm(perp);
  }
  std::vector<Point> verts{x};
  for (const auto& h : hits) {
    double room = std::min({norm.distance(h.p, x), norm.distance(h.p, y), d.signed_base_distance(h.p)});
    for (const auto& q : d.punctures().points()) {
      if (!(q == h.p)) room = std::min(room, norm.distance(q, h.p));
    }
    const double eps = 0.5 * std::min(rel_tol, 1e-3) * room;
    verts.push_back(h.p + perp * (eps / norm(perp)));
  }
  verts.push_back(y);
  return Arc(std::move(verts), norm);
}

// Moves a bend vertex of a visibility path off the boundary so that both
// neighbouring pieces keep positive clearance.
Point push_inside(const DomainSpec& d, const Point& prev, const Point& v, const Point& next, double eps) {
  for (double s = eps; s > eps * 1e-6; s *= 0.5) {
    for (int k = 0; k < 16; ++k) {
      const double ang = 2.0 * M_PI * k / 16.0;
      Point c = v + Point{std::cos(ang), std::sin(ang)} * s;
      if (d.raw_distance(c) > 0.25 * s && d.segment_base_clearance(prev, c) > 0.0 &&
          d.segment_base_clearance(c, next) > 0.0) {
        return c;
      }
    }
  }
  throw InvalidArgument("cannot move path vertex into the polygon");
}

MetricBracket polygon_inner_distance(const DomainSpec& d, const Point& x, const Point& y, double rel_tol) {
  const auto& poly = std::get<Polygon>(d.shape()).vertices;
  const Norm& norm = d.norm();
  std::vector<Point> nodes{x, y};
  nodes.insert(nodes.end(), poly.begin(), poly.end());
  const std::size_t n = nodes.size();
  std::vector<double> dist(n, kInfinity);
  std::vector<std::size_t> prev(n, n);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[0] = 0.0;
  pq.push({0.0, 0});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    if (u == 1) break;
    for (std::size_t v = 1; v < n; ++v) {
      if (v == u) continue;
      const double w = norm.distance(nodes[u], nodes[v]);
      if (du + w >= dist[v]) continue;
      if (!planar::segment_in_closed_polygon(poly, nodes[u], nodes[v])) continue;
      dist[v] = du + w;
      prev[v] = u;
      pq.push({dist[v], v});
    }
  }
  if (!std::isfinite(dist[1])) throw DisconnectedError("no polygon path between the points");
  std::vector<Point> path;
  for (std::size_t v = 1; v != n; v = prev[v]) {
    path.push_back(nodes[v]);
    if (v == 0) break;
  }
  std::reverse(path.begin(), path.end());
  // Straight pieces may graze reflex vertices; those become bends too.
  std::vector<Point> bent{path.front()};
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double scale = 1e-12 * std::max(1.0, norm.distance(path[i], path[i + 1]));
    std::vector<std::pair<double, Point>> touch;
    for (const auto& q : poly) {
      if (q == path[i] || q == path[i + 1]) continue;
      double t = 0.0;
      if (point_segment_distance(norm, q, path[i], path[i + 1], &t) <= scale) touch.push_back({t, q});
    }
    std::sort(touch.begin(), touch.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [t, q] : touch) bent.push_back(q);
    bent.push_back(path[i + 1]);
  }
  path = std::move(bent);
  MetricBracket out;
  out.lower = dist[1];
  if (path.size() == 2) {
    Arc arc = detour_punctures(d, x, y, rel_tol);
    out.upper = arc.length();
    out.witness = std::move(arc);
    return out;
  }
  // Bend vertices are reflex corners on the boundary; shift them inward by a
  // tolerance-sized amount so the witness lies in the open domain.
  const double eps = 0.25 * rel_tol * dist[1] / static_cast<double>(path.size());
  for (std::size_t i = 1; i + 1 < path.size(); ++i) path[i] = push_inside(d, path[i - 1], path[i], path[i + 1], eps);
  Arc arc(path, norm);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (d.segment_puncture_clearance(path[i], path[i + 1]) == 0.0) {
      Arc piece = detour_punctures(d, path[i], path[i + 1], rel_tol);
      std::vector<Point> merged(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(i));
      merged.insert(merged.end(), piece.vertices().begin(), piece.vertices().end());
      merged.insert(merged.end(), path.begin() + static_cast<std::ptrdiff_t>(i + 2), path.end());
      arc = Arc(std::move(merged), norm);
      break;
    }
  }
  out.upper = std::max(arc.length(), out.lower);
  out.witness = std::move(arc);
  return out;
}

}  // namespace

MetricBracket inner_distance(const DomainSpec& d, const Point& x, const Point& y, double rel_tol) {
  d.boundary_distance(x);
  d.boundary_distance(y);
  MetricBracket out;
  if (x == y) {
    out.witness = Arc::single(x, d.norm());
    return out;
  }
  if (!d.convex_base()) return polygon_inner_distance(d, x, y, rel_tol);
  // Convex base: the segment is admissible unless it meets a puncture, and
  // removing points does not change the infimum.
  out.lower = d.norm().distance(x, y);
  Arc arc = detour_punctures(d, x, y, rel_tol);
  out.upper = std::max(arc.length(), out.lower);
  out.witness = std::move(arc);
  return out;
}

}  // namespace qhgeo
