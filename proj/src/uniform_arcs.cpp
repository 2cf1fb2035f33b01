#include "qhgeo/uniform_arcs.hpp"

#include <cmath>
#include <optional>

#include "qhgeo/classify.hpp"
#include "qhgeo/constants.hpp"
#include "qhgeo/errors.hpp"

namespace qhgeo {

namespace {

constexpr std::size_t kReportSamples = 512;

double ball_depth(const Norm& norm, const Point& center, double r, const Point& z) {
  return r - norm.distance(z, center);
}

void require_inside(const Norm& norm, const Point& center, double r, const Point& z, const char* what) {
  if (!(ball_depth(norm, center, r, z) > 0.0)) {
    throw InvalidArgument(std::string(what) + " " + z.to_string() + " is on or outside the sphere");
  }
}

UniformArcReport finish(Arc arc, const DistanceFn& dist, double bound, double rho = 0.0) {
  UniformArcReport rep{arc};
  rep.claimed_bound = bound;
  rep.detour_radius = rho;
  if (arc.is_point()) {
    rep.cone_constant = 0.0;
    rep.quasiconvexity_ratio = 1.0;
    return rep;
  }
  rep.cone_constant = cone_constant(dist, arc, kReportSamples).cone_constant;
  rep.quasiconvexity_ratio = arc.length() / arc.norm().distance(arc.start(), arc.end());
  return rep;
}

// Root of |lerp(a, b, t) - p| = rho on [lo, hi], where the sign of
// (distance - rho) differs at the two ends.
double sphere_crossing(const Norm& norm, const Point& p, double rho, const Point& a, const Point& b, double lo,
                       double hi) {
  const bool lo_outside = norm.distance(lerp(a, b, lo), p) >= rho;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((norm.distance(lerp(a, b, mid), p) >= rho) == lo_outside) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Vertices of the shorter route on S(p, rho) from a to b inside the 2-plane
// through p, a, b. For antipodal a, b the plane uses the coordinate axis least
// aligned with a - p.
std::vector<Point> great_circle(const Norm& norm, const Point& p, double rho, const Point& a, const Point& b) {
  const Point u = a - p, v = b - p;
  const Point e1 = u / euclidean_norm(u);
  Point w = v - e1 * dot(v, e1);
  const double scale = euclidean_norm(v);
  if (euclidean_norm(w) <= 1e-12 * scale) {
    if (dot(v, e1) > 0.0) return {a, b};
    std::size_t axis = 0;
    for (std::size_t i = 1; i < e1.dim(); ++i) {
      if (std::abs(e1[i]) < std::abs(e1[axis])) axis = i;
    }
    const Point ax = unit_vector(e1.dim(), axis);
    w = ax - e1 * dot(ax, e1);
  }
  const Point e2 = w / euclidean_norm(w);
  const double theta = std::atan2(dot(v, e2), dot(v, e1));
  const int steps = std::max(2, static_cast<int>(std::ceil(std::abs(theta) / (M_PI / 64.0))));
  std::vector<Point> out{a};
  for (int k = 1; k < steps; ++k) {
    const double t = theta * k / steps;
    const Point dir = e1 * std::cos(t) + e2 * std::sin(t);
    out.push_back(p + dir * (rho / norm(dir)));
  }
  out.push_back(b);
  return out;
}

}  // namespace

UniformArcReport ball_arc(const Point& center, double r, const Point& z1, const Point& z2, Norm norm) {
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  require_inside(norm, center, r, z1, "endpoint");
  require_inside(norm, center, r, z2, "endpoint");
  const DistanceFn dist = [&](const Point& z) { return ball_depth(norm, center, r, z); };
  const double bound = ledger::ball_uniform().to_double();
  if (z1 == z2) return finish(Arc::single(z1, norm), dist, bound);

  const double half = 0.5 * norm.distance(z1, z2);
  const Point m = lerp(z1, z2, 0.5);
  const double dm = dist(m);
  // In a convex domain the chord's cone constant is attained at its midpoint.
  if (half <= 2.0 * dm) return finish(Arc::segment(z1, z2, norm), dist, bound);

  // Moving from m toward the centre raises the depth one for one.
  const Point to_center = center - m;
  const double h = std::min(half, half - dm);
  const Point q = m + to_center * (h / norm(to_center));
  return finish(Arc({z1, q, z2}, norm), dist, bound);
}

UniformArcReport punctured_ball_arc(const Point& center, double r, const Point& puncture, const Point& z1,
                                    const Point& z2, Norm norm) {
  if (!(r > 0.0)) throw InvalidArgument("ball radius must be positive");
  require_inside(norm, center, r, puncture, "puncture");
  if (z1 == puncture || z2 == puncture) throw InvalidArgument("endpoint equals the puncture");
  const UniformArcReport base = ball_arc(center, r, z1, z2, norm);
  const DistanceFn dist = [&](const Point& z) {
    return std::min(ball_depth(norm, center, r, z), norm.distance(z, puncture));
  };
  const double bound =
      (puncture == center ? ledger::punctured_ball_uniform() : ledger::c2()).to_double();
  if (z1 == z2) return finish(base.arc, dist, bound);

  const double rho = 0.5 * std::min({norm.distance(z1, puncture), norm.distance(z2, puncture),
                                     ball_depth(norm, center, r, puncture)});
  const auto& v = base.arc.vertices();
  const std::size_t nseg = v.size() - 1;

  // First entry into and last exit from the open ball B(puncture, rho).
  std::optional<std::pair<std::size_t, double>> entry, exit;
  for (std::size_t i = 0; i < nseg && !entry; ++i) {
    double t = 0.0;
    if (point_segment_distance(norm, puncture, v[i], v[i + 1], &t) < rho) {
      entry = {i, sphere_crossing(norm, puncture, rho, v[i], v[i + 1], 0.0, t)};
    }
  }
  if (!entry) return finish(base.arc, dist, bound, rho);
  for (std::size_t k = nseg; k-- > 0 && !exit;) {
    double t = 0.0;
    if (point_segment_distance(norm, puncture, v[k], v[k + 1], &t) < rho) {
      exit = {k, sphere_crossing(norm, puncture, rho, v[k], v[k + 1], t, 1.0)};
    }
  }
  const Point a = lerp(v[entry->first], v[entry->first + 1], entry->second);
  const Point b = lerp(v[exit->first], v[exit->first + 1], exit->second);

  std::vector<Point> out(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(entry->first) + 1);
  for (const auto& p : great_circle(norm, puncture, rho, a, b)) out.push_back(p);
  out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(exit->first) + 1, v.end());
  return finish(Arc(std::move(out), norm), dist, bound, rho);
}

UniformArcReport ball_arc_avoiding(const Point& center, double r, const std::vector<Point>& punctures,
                                   const Point& z1, const Point& z2, Norm norm) {
  const Point* inside = nullptr;
  for (const auto& p : punctures) {
    if (ball_depth(norm, center, r, p) <= 0.0) continue;
    if (inside) throw PreconditionError("more than one puncture in the ball " + center.to_string());
    inside = &p;
  }
  if (inside) return punctured_ball_arc(center, r, *inside, z1, z2, norm);
  return ball_arc(center, r, z1, z2, norm);
}

UniformArcReport two_ball_union_arc(const Ball& b1, const Ball& b2, const PunctureSet& punctures, const Point& z1,
                                    const Point& z2, Norm norm) {
  const double gap = norm.distance(b1.center, b2.center);
  if (!(gap < b1.radius + b2.radius)) throw InvalidArgument("the balls are disjoint");
  const auto& pts = punctures.points();
  for (const auto& p : pts) {
    if (p == z1 || p == z2) throw InvalidArgument("endpoint equals a puncture");
  }
  auto in1 = [&](const Point& z) { return ball_depth(norm, b1.center, b1.radius, z) > 0.0; };
  auto in2 = [&](const Point& z) { return ball_depth(norm, b2.center, b2.radius, z) > 0.0; };
  if (!(in1(z1) || in2(z1)) || !(in1(z2) || in2(z2))) {
    throw InvalidArgument("endpoint outside both balls");
  }
  const DistanceFn dist = [&](const Point& z) {
    double d = std::max(ball_depth(norm, b1.center, b1.radius, z), ball_depth(norm, b2.center, b2.radius, z));
    for (const auto& p : pts) d = std::min(d, norm.distance(z, p));
    return d;
  };
  const double bound = ledger::two_ball().to_double();

  UniformArcReport leg_result{Arc::single(z1, norm)};
  if (in1(z1) && in1(z2)) {
    leg_result = ball_arc_avoiding(b1.center, b1.radius, pts, z1, z2, norm);
  } else if (in2(z1) && in2(z2)) {
    leg_result = ball_arc_avoiding(b2.center, b2.radius, pts, z1, z2, norm);
  } else {
    // Deepest lens point: on the centre line where the two depths agree.
    Point q = b1.center;
    if (gap > 0.0) {
      const double t = std::clamp(0.5 * (b1.radius - b2.radius + gap), 0.0, gap);
      q = b1.center + (b2.center - b1.center) * (t / gap);
    }
    const double depth = std::min(ball_depth(norm, b1.center, b1.radius, q), ball_depth(norm, b2.center, b2.radius, q));
    const double clear = 0.25 * depth;
    for (const auto& p : pts) {
      if (norm.distance(p, q) >= clear) continue;
      // Step sideways off the centre line, away from the puncture.
      Point axis = gap > 0.0 ? (b2.center - b1.center) / euclidean_norm(b2.center - b1.center) : unit_vector(q.dim(), 0);
      std::size_t k = 0;
      for (std::size_t i = 1; i < axis.dim(); ++i) {
        if (std::abs(axis[i]) < std::abs(axis[k])) k = i;
      }
      Point n = unit_vector(q.dim(), k);
      n = n - axis * dot(n, axis);
      n = n / euclidean_norm(n);
      if (dot(p - q, n) > 0.0) n = -n;
      q = q + n * (clear / norm(n));
      break;
    }
    const Ball& first = in1(z1) ? b1 : b2;
    const Ball& second = in1(z1) ? b2 : b1;
    const auto leg1 = ball_arc_avoiding(first.center, first.radius, pts, z1, q, norm);
    const auto leg2 = ball_arc_avoiding(second.center, second.radius, pts, q, z2, norm);
    leg_result.arc = leg1.arc.concat(leg2.arc);
    const double r1 = leg1.detour_radius > 0.0 ? leg1.detour_radius : kInfinity;
    const double r2 = leg2.detour_radius > 0.0 ? leg2.detour_radius : kInfinity;
    leg_result.detour_radius = std::min(r1, r2) < kInfinity ? std::min(r1, r2) : 0.0;
  }
  return finish(leg_result.arc, dist, bound, leg_result.detour_radius);
}

}  // namespace qhgeo
