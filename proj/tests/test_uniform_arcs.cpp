#include <cmath>

#include "doctest.h"
#include "qhgeo/constants.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/uniform_arcs.hpp"
#include "support.hpp"

using namespace qhgeo;
using qhgeo::testing::dense_cone;
using qhgeo::testing::kPs;

namespace {

Point random_in_ball(Rng& rng, const Point& c, double r, const Norm& norm, double margin = 0.02) {
  for (;;) {
    Point z(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) z[i] = c[i] + rng.uniform(-r, r);
    if (r - norm.distance(z, c) > margin * r) return z;
  }
}

}  // namespace

TEST_CASE("ball_arc examples") {
  const Point o{0, 0};
  auto r = ball_arc(o, 1.0, Point{-0.5, 0}, Point{0.5, 0});
  CHECK(r.arc.size() == 2);
  CHECK(r.cone_constant == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.quasiconvexity_ratio == 1.0);
  CHECK(r.claimed_bound == 2.0);
  // max over t of (0.5 - |t|) / (1 - |t|) on the chord.
  CHECK(dense_cone(r.arc, [](const Point& z) { return 1.0 - euclidean_norm(z); }) == doctest::Approx(0.5));

  auto same = ball_arc(o, 1.0, Point{0.2, 0.1}, Point{0.2, 0.1});
  CHECK(same.arc.is_point());
  CHECK(same.cone_constant == 0.0);
  CHECK(same.quasiconvexity_ratio == 1.0);

  auto wide = ball_arc(o, 1.0, Point{-0.9, 0}, Point{0.9, 0});
  CHECK(wide.within_bound());
  CHECK(dense_cone(wide.arc, [](const Point& z) { return 1.0 - euclidean_norm(z); }) <= 2.0);

  // A chord near the sphere gets bent inward.
  auto bent = ball_arc(o, 1.0, Point{-0.6, 0.75}, Point{0.6, 0.75});
  CHECK(bent.arc.size() == 3);
  CHECK(bent.within_bound());
  CHECK(bent.arc.vertices()[1][1] < 0.75);

  CHECK_THROWS_AS(ball_arc(o, 1.0, Point{1.0, 0}, Point{0, 0}), InvalidArgument);
  CHECK_THROWS_AS(ball_arc(o, 1.0, Point{0, 0}, Point{0, 2}), InvalidArgument);
}

TEST_CASE("punctured_ball_arc examples") {
  const Point o{0, 0};
  auto r = punctured_ball_arc(o, 1.0, o, Point{-0.5, 0}, Point{0.5, 0});
  CHECK(r.detour_radius == doctest::Approx(0.25));
  CHECK(r.claimed_bound == 10.0);
  CHECK(r.quasiconvexity_ratio == doctest::Approx(0.5 + M_PI * 0.25).epsilon(1e-3));
  CHECK(r.within_bound());
  double lowest = 0.0;
  const double oracle = dense_cone(
      r.arc, [](const Point& z) { return std::min(1.0 - euclidean_norm(z), euclidean_norm(z)); }, &lowest);
  CHECK(oracle <= 10.0);
  CHECK(lowest >= 0.9 * 0.25);
  CHECK(r.arc.start() == Point{-0.5, 0});
  CHECK(r.arc.end() == Point{0.5, 0});

  // Chord far from the puncture: nothing to avoid.
  const Point p{0.0, -0.8};
  auto far = punctured_ball_arc(o, 1.0, p, Point{-0.5, 0.3}, Point{0.5, 0.3});
  auto plain = ball_arc(o, 1.0, Point{-0.5, 0.3}, Point{0.5, 0.3});
  CHECK(far.arc.vertices() == plain.arc.vertices());

  auto off = punctured_ball_arc(o, 1.0, Point{0.3, 0}, Point{0, -0.5}, Point{0, 0.5});
  CHECK(off.claimed_bound == 18.0);
  CHECK(off.within_bound());

  CHECK_THROWS_AS(punctured_ball_arc(o, 1.0, o, o, Point{0.5, 0}), InvalidArgument);
  CHECK_THROWS_AS(punctured_ball_arc(o, 1.0, Point{1.5, 0}, Point{0.1, 0}, Point{0.5, 0}), InvalidArgument);
}

TEST_CASE("two_ball_union_arc examples") {
  const Ball b1{Point{0, 0}, 1.0}, b2{Point{1.5, 0}, 1.0};
  auto r = two_ball_union_arc(b1, b2, PunctureSet{}, Point{-0.5, 0}, Point{2, 0});
  bool through_lens_center = false;
  for (const auto& v : r.arc.vertices()) through_lens_center = through_lens_center || v == Point{0.75, 0};
  CHECK(through_lens_center);
  CHECK(r.claimed_bound == 213840.0);
  CHECK(std::max(r.cone_constant, r.quasiconvexity_ratio) < 10.0);

  // Both endpoints in the lens: a single ball arc.
  auto lens = two_ball_union_arc(b1, b2, PunctureSet{}, Point{0.7, 0.1}, Point{0.8, -0.1});
  CHECK(lens.arc.vertices() == ball_arc(b1.center, 1.0, Point{0.7, 0.1}, Point{0.8, -0.1}).arc.vertices());

  const PunctureSet mid(std::vector<Point>{Point{0.75, 0}});
  auto detour = two_ball_union_arc(b1, b2, mid, Point{-0.5, 0}, Point{2, 0});
  double lowest = 0.0;
  dense_cone(detour.arc, [](const Point& z) { return euclidean_norm(z - Point{0.75, 0}); }, &lowest);
  CHECK(lowest > 0.0);
  CHECK(detour.within_bound());

  CHECK_THROWS_AS(two_ball_union_arc(b1, Ball{Point{3, 0}, 1.0}, PunctureSet{}, Point{0, 0}, Point{3, 0}),
                  InvalidArgument);
  CHECK_THROWS_AS(two_ball_union_arc(b1, b2, mid, Point{0.75, 0}, Point{2, 0}), InvalidArgument);
}

TEST_CASE("property: uniform arc reports honour their bounds") {
  Rng rng(2024);
  int instances = 0;
  for (int it = 0; it < 1000; ++it) {
    const std::size_t dim = it % 3 == 0 ? 3 : 2;
    const Norm norm(kPs[rng.index(5)]);
    Point center(dim);
    for (std::size_t i = 0; i < dim; ++i) center[i] = rng.uniform(-2.0, 2.0);
    const double r = rng.uniform(0.5, 2.0);
    const Point z1 = random_in_ball(rng, center, r, norm), z2 = random_in_ball(rng, center, r, norm);
    auto depth = [&](const Point& z) { return r - norm.distance(z, center); };
    CAPTURE(it);

    const auto a = ball_arc(center, r, z1, z2, norm);
    CHECK(a.arc.start() == z1);
    CHECK(a.arc.end() == z2);
    CHECK(a.within_bound());
    CHECK(dense_cone(a.arc, depth) <= 2.0 + 1e-9);

    const bool centered = it % 2 == 0;
    const Point p = centered ? center : random_in_ball(rng, center, r, norm);
    auto pdist = [&](const Point& z) { return std::min(depth(z), norm.distance(z, p)); };
    const auto b = punctured_ball_arc(center, r, p, z1, z2, norm);
    CHECK(b.arc.start() == z1);
    CHECK(b.arc.end() == z2);
    CHECK(b.within_bound());
    CHECK(b.claimed_bound == (centered ? 10.0 : 18.0));
    double lowest = 0.0;
    CHECK(dense_cone(b.arc, pdist, &lowest) <= b.claimed_bound);
    CHECK(lowest > 0.0);
    double to_p = kInfinity;
    dense_cone(b.arc, [&](const Point& z) { return norm.distance(z, p); }, &to_p);
    CHECK(to_p >= 0.9 * b.detour_radius);

    // Two overlapping balls and at most one puncture.
    const double r2 = rng.uniform(0.5, 2.0);
    Point dir = rng.direction(dim);
    dir = dir / norm(dir);
    const Point c2 = center + dir * (rng.uniform(0.1, 0.95) * (r + r2));
    const Ball B1{center, r}, B2{c2, r2};
    const Point w1 = random_in_ball(rng, center, r, norm);
    const Point w2 = random_in_ball(rng, c2, r2, norm);
    std::vector<Point> pts;
    if (it % 3 != 0) pts.push_back(random_in_ball(rng, it % 2 ? center : c2, it % 2 ? r : r2, norm));
    const PunctureSet ps(pts);
    auto udist = [&](const Point& z) {
      double d = std::max(depth(z), r2 - norm.distance(z, c2));
      for (const auto& q : pts) d = std::min(d, norm.distance(z, q));
      return d;
    };
    const auto u = two_ball_union_arc(B1, B2, ps, w1, w2, norm);
    CHECK(u.arc.start() == w1);
    CHECK(u.arc.end() == w2);
    CHECK(u.within_bound());
    CHECK(dense_cone(u.arc, udist, &lowest) <= u.claimed_bound);
    CHECK(lowest > 0.0);
    ++instances;
  }
  CHECK(instances == 1000);
}

TEST_CASE("ledger: union formula meets the two-ball bound") {
  CHECK(ledger::union_c0() == Rational(427625, 114));
  CHECK(ledger::union_formula(ledger::c2(), ledger::union_c0()) == ledger::two_ball());
  CHECK(ledger::two_ball() == Rational(213840));
  // With c0 = 1 (one ball inside the other) the formula is far below the bound.
  CHECK(ledger::union_formula(ledger::c2(), 1) == Rational(169, 2));
}
