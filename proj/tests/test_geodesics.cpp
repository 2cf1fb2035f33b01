#include <cmath>
#include <queue>

#include "doctest.h"
#include "qhgeo/geodesics.hpp"
#include "support.hpp"

using namespace qhgeo;
using qhgeo::testing::domain_families;
using qhgeo::testing::sample_pairs;

namespace {

const DomainSpec kHalf = DomainSpec::half_space(2);
const DomainSpec kDisk = DomainSpec::ball(Point{0.0, 0.0}, 1.0);

// Shortest path for the metric |dz|/|z| of the punctured plane, computed on a
// log-polar grid (u = log r, theta), where the metric is Euclidean, with a
// 16-direction stencil.
double log_polar_grid_oracle(const Point& x, const Point& y, int cells_per_unit) {
  const double h = 1.0 / cells_per_unit;
  const double ux = std::log(euclidean_norm(x)), uy = std::log(euclidean_norm(y));
  const double tx = std::atan2(x[1], x[0]), ty = std::atan2(y[1], y[0]);
  const int nu = static_cast<int>(4.0 / h) + 1, nt = static_cast<int>(2.0 * M_PI / h) + 1;
  auto idx = [&](double u, double t) {
    return std::make_pair(static_cast<int>(std::lround((u + 2.0) / h)), static_cast<int>(std::lround((t + M_PI) / h)));
  };
  auto [sx, sy] = idx(ux, tx);
  auto [ex, ey] = idx(uy, ty);
  std::vector<double> dist(static_cast<std::size_t>(nu * nt), kInfinity);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(sx * nt + sy)] = 0.0;
  pq.push({0.0, sx * nt + sy});
  const int offs[16][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1},
                           {2, 1}, {1, 2}, {-2, 1}, {-1, 2}, {2, -1}, {1, -2}, {-2, -1}, {-1, -2}};
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    if (u == ex * nt + ey) break;
    const int a = u / nt, b = u % nt;
    for (const auto& o : offs) {
      const int a2 = a + o[0], b2 = b + o[1];
      if (a2 < 0 || a2 >= nu || b2 < 0 || b2 >= nt) continue;
      const double nd = du + h * std::hypot(o[0], o[1]);
      auto& slot = dist[static_cast<std::size_t>(a2 * nt + b2)];
      if (nd < slot) {
        slot = nd;
        pq.push({nd, a2 * nt + b2});
      }
    }
  }
  // Grid snapping of the endpoints is corrected by the exact offsets.
  return dist[static_cast<std::size_t>(ex * nt + ey)];
}

KOptions quick() {
  KOptions o;
  o.max_rounds = 3;
  return o;
}

}  // namespace

TEST_CASE("k bracket on a vertical half-plane segment") {
  const auto b = k_distance(kHalf, Point{0, 1}, Point{0, std::exp(1.0)}, 0.01);
  CHECK(b.lower <= 1.0 + 1e-12);
  CHECK(b.upper >= 1.0 - 1e-9);
  CHECK(b.upper <= b.lower * 1.01);
  CHECK_FALSE(b.budget_exhausted);
  CHECK(qh_arc_length(kHalf, *b.witness, 1e-12) == doctest::Approx(b.upper).epsilon(1e-9));
}

TEST_CASE("k of a point with itself") {
  const auto b = k_distance(kDisk, Point{0.3, 0.1}, Point{0.3, 0.1});
  CHECK(b.lower == 0.0);
  CHECK(b.upper == 0.0);
  CHECK(b.witness->is_point());
}

TEST_CASE("k in the punctured plane") {
  const auto g = with_punctures(DomainSpec::ball(Point{0, 0}, 1e6), PunctureSet({Point{0, 0}}));
  const Point x{1, 0}, y{0, 1};
  const auto b = k_distance(g, x, y, 0.01);
  const double oracle = log_polar_grid_oracle(x, y, 256);
  CHECK(oracle == doctest::Approx(M_PI / 2).epsilon(0.01));
  CHECK(b.midpoint() == doctest::Approx(oracle).epsilon(0.02));
  CHECK(b.lower <= M_PI / 2 + 1e-9);
  CHECK(b.upper >= M_PI / 2 - 1e-9);
}

TEST_CASE("k in the half-plane matches the hyperbolic closed form") {
  // Away from vertical lines the quasihyperbolic metric of the half-plane is the
  // hyperbolic one: arccosh(1 + |x-y|^2 / (2 x_2 y_2)).
  for (const auto& [x, y] : sample_pairs(kHalf, 10, 3, 0.05)) {
    const Point v = x - y;
    const double exact = std::acosh(1.0 + dot(v, v) / (2.0 * x[1] * y[1]));
    const auto b = k_distance(kHalf, x, y, 0.01, quick());
    CHECK(b.lower <= exact * (1 + 1e-9));
    CHECK(b.upper >= exact * (1 - 1e-9));
    CHECK(b.upper <= exact * 1.01);
  }
}

TEST_CASE("neargeodesic basics") {
  const auto r = neargeodesic(kHalf, Point{0, 1}, Point{0, std::exp(1.0)}, 1.1);
  CHECK(r.c_certificate <= 1.001);
  for (const auto& v : r.arc.vertices()) CHECK(v[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r.subarc_checks > 0);
  CHECK(r.subarc_worst_ratio <= 1.1);

  const auto same = neargeodesic(kDisk, Point{0.1, 0.2}, Point{0.1, 0.2});
  CHECK(same.arc.is_point());
  CHECK(same.c_certificate == 1.0);
}

TEST_CASE("neargeodesic in the disk") {
  // The diameter pair: by radial projection the straight segment is already
  // optimal, so the best arc cannot beat it.
  const Point a{-0.5, 0}, b{0.5, 0};
  const double straight = qh_arc_length(kDisk, Arc::segment(a, b));
  try {
    const auto r = neargeodesic(kDisk, a, b, 1.2, quick());
    CHECK(r.c_certificate <= 1.2);
    CHECK(r.qh_length <= straight + 1e-9);
  } catch (const BudgetExhausted& e) {
    CHECK(e.best().qh_length <= straight + 1e-9);
    CHECK(e.best().c_certificate > 1.2);
  }
  // An off-center chord: d grows toward the center, so bending inward pays.
  const Point c{-0.5, 0.5}, e{0.5, 0.5};
  const double chord = qh_arc_length(kDisk, Arc::segment(c, e));
  const auto k = k_distance(kDisk, c, e, 0.01, quick());
  CHECK(k.upper < chord * 0.999);
  double max_dip = 0.0;
  for (const auto& v : k.witness->vertices()) max_dip = std::max(max_dip, 0.5 - v[1]);
  CHECK(max_dip > 0.01);
}

TEST_CASE("search graph contract") {
  SearchGraphOptions serial;
  serial.exec = Exec::serial;
  const auto g = build_search_graph(kDisk, 0.05, 0.0);
  CHECK(g.node_count() > 100);
  for (const auto& e : g.edges()) {
    CHECK(std::isfinite(e.weight));
    CHECK(e.weight > 0.0);
  }
  const auto gs = build_search_graph(kDisk, 0.05, 0.0, serial);
  REQUIRE(gs.edge_count() == g.edge_count());
  bool identical = true;
  for (std::size_t i = 0; i < g.edge_count(); ++i) identical = identical && g.edges()[i].weight == gs.edges()[i].weight;
  CHECK(identical);

  const auto punct = with_punctures(kDisk, PunctureSet({Point{0, 0}}));
  const auto gp = build_search_graph(punct, 0.05, 0.0);
  for (const auto& v : gp.nodes()) CHECK_FALSE(v == Point{0, 0});
}

TEST_CASE("search graph refinement is monotone") {
  const Point x{-0.7, 0.3}, y{0.6, -0.5};
  double prev_len = kInfinity;
  std::size_t prev_nodes = 0;
  for (double res : {0.2, 0.1, 0.05, 0.025}) {
    const auto g = build_search_graph(kDisk, res, 0.05);
    CHECK(g.node_count() > prev_nodes);
    const auto path = g.shortest_arc(kDisk, x, y);
    REQUIRE(path.has_value());
    CHECK(path->second <= prev_len);
    prev_len = path->second;
    prev_nodes = g.node_count();
  }
}

TEST_CASE("property: inequality chain and segment-bound dominance") {
  int pairs = 0;
  for (const auto& [name, dom] : domain_families()) {
    CAPTURE(name);
    for (const auto& [x, y] : sample_pairs(dom, 4, 51, 0.01)) {
      const auto b = k_distance(dom, x, y, 0.02, quick());
      const double j = j_metric(dom, x, y);
      CHECK(b.upper >= b.lower - 1e-9);
      CHECK(b.lower >= j - 1e-9);
      CHECK(j >= log_ratio_lower(dom, x, y) - 1e-9);
      if (auto s = segment_upper(dom, x, y)) CHECK(b.upper <= *s + 1e-9);
      CHECK(qh_arc_length(dom, *b.witness, 1e-12) == doctest::Approx(b.upper).epsilon(1e-8));
      ++pairs;
    }
  }
  CHECK(pairs == 24);
}

TEST_CASE("property: symmetry of brackets") {
  for (const auto& [name, dom] : domain_families()) {
    CAPTURE(name);
    for (const auto& [x, y] : sample_pairs(dom, 4, 61, 0.02)) {
      const auto a = k_distance(dom, x, y, 0.02, quick());
      const auto b = k_distance(dom, y, x, 0.02, quick());
      CHECK(a.lower <= b.upper + 1e-9);
      CHECK(b.lower <= a.upper + 1e-9);
      CHECK(std::abs(a.midpoint() - b.midpoint()) <= 0.01 * std::max(a.midpoint(), b.midpoint()));
    }
  }
}

TEST_CASE("property: domain monotonicity under punctures") {
  const auto g = with_punctures(kDisk, PunctureSet({Point{0.0, 0.0}, Point{0.5, 0.2}}));
  for (const auto& [x, y] : sample_pairs(g, 8, 71, 0.02)) {
    const auto kd = k_distance(kDisk, x, y, 0.02, quick());
    const auto kg = k_distance(g, x, y, 0.02, quick());
    CHECK(kg.lower >= kd.lower);
    CHECK(kg.upper >= kd.lower);
    // Pointwise d_G <= d_D, so every arc in G is no longer in D.
    CHECK(qh_arc_length(kDisk, *kg.witness) <= kg.upper * (1 + 1e-8));
  }
}

TEST_CASE("property: subarc consistency of neargeodesics") {
  const auto g = with_punctures(kDisk, PunctureSet({Point{0.0, 0.0}}));
  for (const auto& [x, y] : sample_pairs(g, 3, 81, 0.05)) {
    GeodesicResult r{Arc::single(x)};
    try {
      r = neargeodesic(g, x, y, 1.1, quick());
    } catch (const BudgetExhausted& e) {
      r = e.best();
    }
    const double c = std::max(1.1, r.c_certificate);
    const double len = r.arc.length();
    for (int i = 0; i < 4; ++i) {
      const Arc sub = r.arc.subarc(len * i / 4, len * (i + 1) / 4);
      const auto k = k_distance(g, sub.start(), sub.end(), 0.02, quick());
      CHECK(qh_arc_length(g, sub) <= c * k.upper * 1.02);
    }
  }
}
