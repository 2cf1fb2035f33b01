#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "qhgeo/geodesics.hpp"
#include "planar.hpp"

namespace qhgeo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// arccosh(1 + u), accurate for small u.
double acosh1p(double u) { return std::log1p(u + std::sqrt(u * (u + 2.0))); }

// Quasihyperbolic distance of the Euclidean half-space {a.z < beta} (|a|_2 = 1).
double half_space_k(const Point& a, double beta, const Point& x, const Point& y) {
  const double hx = beta - dot(a, x);
  const double hy = beta - dot(a, y);
  if (!(hx > 0.0) || !(hy > 0.0)) return 0.0;
  const Point v = x - y;
  return acosh1p(dot(v, v) / (2.0 * hx * hy));
}

// Quasihyperbolic distance of R^n minus the point q (Euclidean).
double punctured_space_k(const Point& q, const Point& x, const Point& y) {
  const Point u = x - q;
  const Point v = y - q;
  const double ru = euclidean_norm(u);
  const double rv = euclidean_norm(v);
  if (ru == 0.0 || rv == 0.0) return 0.0;
  const double c = std::clamp(dot(u, v) / (ru * rv), -1.0, 1.0);
  const double theta = std::acos(c);
  const double l = std::log(ru / rv);
  return std::sqrt(theta * theta + l * l);
}

// Outward unit normals of supporting hyperplanes of a p-ball at sample boundary points.
std::vector<Point> ball_normals(const Norm& norm, std::size_t n, const Point& center, const Point& x, const Point& y) {
  std::vector<Point> dirs;
  const double p = norm.p();
  if (std::isinf(p)) {
    for (std::size_t i = 0; i < n; ++i) {
      dirs.push_back(unit_vector(n, i));
      dirs.push_back(-unit_vector(n, i));
    }
    return dirs;
  }
  if (p == 1.0) {
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t m = 0; m < corners; ++m) {
      Point a(n);
      for (std::size_t i = 0; i < n; ++i) a[i] = (m >> i) & 1 ? 1.0 : -1.0;
      dirs.push_back(a / std::sqrt(static_cast<double>(n)));
    }
    return dirs;
  }
  std::vector<Point> probes{x - center, y - center, (x + y) * 0.5 - center};
  const int ring = n == 2 ? 24 : 8;
  for (int i = 0; i < ring; ++i) {
    const double a = 2.0 * M_PI * i / ring;
    if (n == 2) {
      probes.push_back(Point{std::cos(a), std::sin(a)});
    } else {
      for (int j = 1; j < 4; ++j) {
        const double b = M_PI * j / 4.0;
        probes.push_back(Point{std::cos(a) * std::sin(b), std::sin(a) * std::sin(b), std::cos(b)});
      }
    }
  }
  if (n == 3) {
    probes.push_back(Point{0.0, 0.0, 1.0});
    probes.push_back(Point{0.0, 0.0, -1.0});
  }
  for (const auto& v : probes) {
    if (euclidean_norm(v) == 0.0) continue;
    // Gradient of |.|_p at v is the supporting normal.
    Point a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = std::copysign(std::pow(std::abs(v[i]), p - 1.0), v[i]);
    const double len = euclidean_norm(a);
    if (len > 0.0) dirs.push_back(a / len);
  }
  return dirs;
}

}  // namespace

double analytic_lower_bound(const DomainSpec& d, const Point& x, const Point& y) {
  if (x == y) return 0.0;
  const std::size_t n = d.dim();
  const Norm& norm = d.norm();
  const double c = norm.lower_euclidean_ratio(n);
  const double C = norm.upper_euclidean_ratio(n);
  double best = std::max(j_metric(d, x, y), log_ratio_lower(d, x, y));

  // A half-space H = {a.z < beta} containing the base: d_p(z) <= h(z) / |a|_q,
  // and |dz|_p >= c |dz|_2, so k >= c |a|_q k_H.
  auto use_half_space = [&](const Point& a, double beta) {
    best = std::max(best, c * norm.dual(a) * half_space_k(a, beta, x, y));
  };
  // A boundary point q: d_p(z) <= |z - q|_p <= C |z - q|_2.
  auto use_point = [&](const Point& q) { best = std::max(best, (c / C) * punctured_space_k(q, x, y)); };

  std::visit(Overloaded{
                 [&](const HalfSpace&) { use_half_space(-unit_vector(n, n - 1), 0.0); },
                 [&](const Ball& b) {
                   for (const auto& a : ball_normals(norm, n, b.center, x, y)) {
                     // Support value of the p-ball in direction a is r |a|_q.
                     use_half_space(a, dot(a, b.center) + b.radius * norm.dual(a));
                   }
                 },
                 [&](const Box& b) {
                   for (std::size_t i = 0; i < n; ++i) {
                     use_half_space(unit_vector(n, i), b.hi[i]);
                     use_half_space(-unit_vector(n, i), -b.lo[i]);
                   }
                   const std::size_t corners = std::size_t{1} << n;
                   for (std::size_t m = 0; m < corners; ++m) {
                     Point q(n);
                     for (std::size_t i = 0; i < n; ++i) q[i] = (m >> i) & 1 ? b.hi[i] : b.lo[i];
                     use_point(q);
                   }
                 },
                 [&](const Polygon& p) {
                   const auto& v = p.vertices;
                   const std::size_t m = v.size();
                   for (std::size_t i = 0; i < m; ++i) {
                     use_point(v[i]);
                     const Point& e0 = v[i];
                     const Point& e1 = v[(i + 1) % m];
                     Point a{e1[1] - e0[1], e0[0] - e1[0]};
                     a = a / euclidean_norm(a);
                     // Orient a so the polygon lies on the side a.z <= beta, if it does at all.
                     double lo = kInfinity, hi = -kInfinity;
                     for (const auto& w : v) {
                       const double s = dot(a, w - e0);
                       lo = std::min(lo, s);
                       hi = std::max(hi, s);
                     }
                     const double beta = dot(a, e0);
                     if (hi <= 0.0) use_half_space(a, beta);
                     if (lo >= 0.0) use_half_space(-a, -beta);
                   }
                 },
             },
             d.shape());
  for (const auto& q : d.punctures().points()) use_point(q);
  return best;
}

double cell_lower_bound(const DomainSpec& d, const Point& x, const Point& y, double cell, int ring,
                        std::size_t cell_cap) {
  if (x == y || !d.bounded() || !(cell > 0.0) || ring < 1) return 0.0;
  const std::size_t n = d.dim();
  const Norm& norm = d.norm();
  auto [lo, hi] = *d.bounding_box();
  std::array<std::int64_t, 3> count{1, 1, 1};
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count[i] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil((hi[i] - lo[i]) / cell)));
    total *= static_cast<std::size_t>(count[i]);
    if (total > cell_cap) return 0.0;
  }
  auto cell_of = [&](const Point& p) {
    std::array<std::int64_t, 3> k{0, 0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      k[i] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((p[i] - lo[i]) / cell)), 0, count[i] - 1);
    }
    return k;
  };
  auto flat = [&](const std::array<std::int64_t, 3>& k) {
    return static_cast<std::size_t>((k[2] * count[1] + k[1]) * count[0] + k[0]);
  };

  // Largest possible d over the closed neighborhood box of each cell.
  std::vector<double> cap(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::array<std::int64_t, 3> k{static_cast<std::int64_t>(idx % static_cast<std::size_t>(count[0])),
                                  static_cast<std::int64_t>((idx / static_cast<std::size_t>(count[0])) %
                                                            static_cast<std::size_t>(count[1])),
                                  static_cast<std::int64_t>(idx / static_cast<std::size_t>(count[0] * count[1]))};
    Point blo(n), bhi(n);
    for (std::size_t i = 0; i < n; ++i) {
      blo[i] = lo[i] + static_cast<double>(std::max<std::int64_t>(k[i] - ring, 0)) * cell;
      bhi[i] = lo[i] + static_cast<double>(std::min<std::int64_t>(k[i] + ring + 1, count[i])) * cell;
    }
    double m = d.max_base_distance_over_box(blo, bhi);
    for (const auto& q : d.punctures().points()) {
      Point far(n);
      for (std::size_t i = 0; i < n; ++i) far[i] = std::max(std::abs(q[i] - blo[i]), std::abs(q[i] - bhi[i]));
      m = std::min(m, norm(far));
    }
    cap[idx] = m;
  }

  // Offsets at Chebyshev distance exactly ring + 1, with the gap between the cells.
  struct Hop {
    std::array<std::int64_t, 3> o;
    double gap;
  };
  std::vector<Hop> hops;
  const int r = ring + 1;
  for (int a = -r; a <= r; ++a) {
    for (int b = -r; b <= r; ++b) {
      for (int c = (n == 3 ? -r : 0); c <= (n == 3 ? r : 0); ++c) {
        if (std::max({std::abs(a), std::abs(b), std::abs(c)}) != r) continue;
        Point g(n);
        const int o[3] = {a, b, c};
        for (std::size_t i = 0; i < n; ++i) g[i] = std::max(std::abs(o[i]) - 1, 0) * cell;
        hops.push_back({{a, b, c}, norm(g)});
      }
    }
  }

  const auto kx = cell_of(x);
  const auto ky = cell_of(y);
  auto is_target = [&](const std::array<std::int64_t, 3>& k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(k[i] - ky[i]) > ring + 1) return false;
    }
    return true;
  };
  if (is_target(kx)) return 0.0;
  std::vector<double> dist(total, kInfinity);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[flat(kx)] = 0.0;
  pq.push({0.0, flat(kx)});
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    const std::array<std::int64_t, 3> k{static_cast<std::int64_t>(u % static_cast<std::size_t>(count[0])),
                                        static_cast<std::int64_t>((u / static_cast<std::size_t>(count[0])) %
                                                                  static_cast<std::size_t>(count[1])),
                                        static_cast<std::int64_t>(u / static_cast<std::size_t>(count[0] * count[1]))};
    if (is_target(k)) return du;
    if (!(cap[u] > 0.0)) continue;
    for (const auto& h : hops) {
      std::array<std::int64_t, 3> k2{k[0] + h.o[0], k[1] + h.o[1], k[2] + h.o[2]};
      bool in = true;
      for (std::size_t i = 0; i < n; ++i) in = in && k2[i] >= 0 && k2[i] < count[i];
      if (!in) continue;
      const std::size_t v = flat(k2);
      const double nd = du + h.gap / cap[u];
      if (nd < dist[v]) {
        dist[v] = nd;
        pq.push({nd, v});
      }
    }
  }
  // Unreachable target would mean no curve exists; stay conservative.
  return 0.0;
}

}  // namespace qhgeo
