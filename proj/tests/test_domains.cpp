#include <cmath>

#include "doctest.h"
#include "qhgeo/arc.hpp"
#include "qhgeo/domain.hpp"
#include "qhgeo/errors.hpp"
#include "support.hpp"

using namespace qhgeo;
using qhgeo::testing::domain_families;
using qhgeo::testing::kPs;

TEST_CASE("boundary distance on the basic shapes") {
  CHECK(DomainSpec::half_space(2).boundary_distance(Point{0.0, 2.0}) == 2.0);
  CHECK(DomainSpec::ball(Point{0.0, 0.0}, 1.0).boundary_distance(Point{0.0, 0.0}) == 1.0);
  const auto g = with_punctures(DomainSpec::ball(Point{0.0, 0.0}, 1.0), PunctureSet({Point{0.5, 0.0}}));
  CHECK(g.boundary_distance(Point{0.25, 0.0}) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("points outside are rejected") {
  const auto d = DomainSpec::ball(Point{0.0, 0.0}, 1.0);
  CHECK_THROWS_AS(d.boundary_distance(Point{2.0, 0.0}), MembershipError);
  CHECK_THROWS_AS(d.boundary_distance(Point{1.0, 0.0}), MembershipError);
  CHECK_FALSE(d.contains(Point{0.0, 0.0, 0.0}));
  const auto g = with_punctures(d, PunctureSet({Point{0.0, 0.0}}));
  CHECK_FALSE(g.contains(Point{0.0, 0.0}));
  CHECK_THROWS_AS(g.boundary_distance(Point{0.0, 0.0}), MembershipError);
}

TEST_CASE("with_punctures") {
  const auto d = DomainSpec::ball(Point{0.0, 0.0}, 1.0);
  const auto g = with_punctures(d, PunctureSet({Point{0.0, 0.0}}));
  CHECK(g.boundary_distance(Point{0.9, 0.0}) == doctest::Approx(0.1).epsilon(1e-14));
  const auto same = with_punctures(d, PunctureSet(std::vector<Point>{}));
  for (const auto& x : sample_interior(d, 50, 3, 0.0)) CHECK(same.boundary_distance(x) == d.boundary_distance(x));
  CHECK_THROWS_AS(with_punctures(d, PunctureSet({Point{2.0, 0.0}})), InvalidArgument);
  CHECK_THROWS_AS(with_punctures(d, PunctureSet({Point{1.0, 0.0}})), InvalidArgument);
  CHECK_THROWS_AS(PunctureSet({Point{0.1, 0.0}, Point{0.1, 0.0}}), InvalidArgument);
}

TEST_CASE("closed forms in every norm") {
  for (double p : kPs) {
    CAPTURE(p);
    const Norm norm(p);
    const auto ball = DomainSpec::ball(Point{0.5, -0.25}, 2.0, p);
    const auto box = DomainSpec::box(Point{-1.0, -2.0, 0.0}, Point{3.0, 1.0, 0.5}, p);
    const auto half = DomainSpec::half_space(3, p);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      const Point x = rng.in_box(Point{-1.0, -2.25}, Point{2.0, 1.75});
      if (ball.contains(x)) {
        CHECK(ball.boundary_distance(x) == doctest::Approx(2.0 - norm.distance(x, Point{0.5, -0.25})).epsilon(1e-12));
      }
      const Point y = rng.in_box(Point{-1.0, -2.0, 0.0}, Point{3.0, 1.0, 0.5});
      const double face = std::min({y[0] + 1.0, 3.0 - y[0], y[1] + 2.0, 1.0 - y[1], y[2], 0.5 - y[2]});
      if (face > 0.0) CHECK(box.boundary_distance(y) == doctest::Approx(face).epsilon(1e-12));
      const Point z = rng.in_box(Point{-5.0, -5.0, 0.0}, Point{5.0, 5.0, 3.0});
      if (z[2] > 0.0) CHECK(half.boundary_distance(z) == z[2]);
    }
  }
}

TEST_CASE("polygon distance matches a brute-force edge scan") {
  const auto poly = DomainSpec::polygon({Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2}, Point{0, 2}});
  CHECK_FALSE(poly.convex_base());
  CHECK(poly.contains(Point{0.5, 1.5}));
  CHECK_FALSE(poly.contains(Point{1.5, 1.5}));
  // Brute force: dense samples along every edge.
  const std::vector<Point> v{Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2}, Point{0, 2}};
  for (const auto& x : sample_interior(poly, 100, 5, 0.0)) {
    double best = kInfinity;
    for (std::size_t i = 0; i < v.size(); ++i) {
      for (int k = 0; k <= 20000; ++k) best = std::min(best, euclidean_norm(x - lerp(v[i], v[(i + 1) % v.size()], k / 20000.0)));
    }
    CHECK(poly.boundary_distance(x) == doctest::Approx(best).epsilon(1e-7));
  }
  CHECK_THROWS_AS(DomainSpec::polygon({Point{0, 0}, Point{1, 1}, Point{1, 0}, Point{0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(DomainSpec::polygon({Point{0, 0}, Point{1, 0}}), InvalidArgument);
}

TEST_CASE("segment clearances") {
  const auto poly = DomainSpec::polygon({Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2}, Point{0, 2}});
  // Passing the reflex corner at distance sqrt(2)/20.
  CHECK(poly.segment_base_clearance(Point{0.5, 1.5}, Point{1.5, 0.5}) == 0.0);
  CHECK(poly.segment_base_clearance(Point{0.5, 1.4}, Point{1.4, 0.5}) == doctest::Approx(0.1 / std::sqrt(2.0)));
  const auto g = with_punctures(DomainSpec::ball(Point{0.0, 0.0}, 1.0), PunctureSet({Point{0.0, 0.1}}));
  CHECK(g.segment_puncture_clearance(Point{-0.5, 0.0}, Point{0.5, 0.0}) == doctest::Approx(0.1));
  CHECK(g.segment_base_clearance(Point{-0.5, 0.0}, Point{0.5, 0.0}) == doctest::Approx(0.5));
}

TEST_CASE("sampler contract, determinism and exhaustion") {
  const auto d = DomainSpec::ball(Point{0.0, 0.0}, 1.0);
  const auto a = sample_interior(d, 10, 7, 0.05);
  CHECK(a.size() == 10);
  for (const auto& x : a) CHECK(d.boundary_distance(x) >= 0.05);
  CHECK(a == sample_interior(d, 10, 7, 0.05));
  CHECK(a != sample_interior(d, 10, 8, 0.05));
  // Points with d >= 0.999 fill a disk of radius 0.001: a fraction pi 1e-6 / 4 of
  // the sampling square. Over 1000*10 + 10000 draws the expected number of hits
  // is far below the 10 required.
  const double expected_hits = (M_PI * 1e-6 / 4.0) * (1000.0 * 10 + 10000);
  REQUIRE(expected_hits < 0.1);
  CHECK_THROWS_AS(sample_interior(d, 10, 7, 0.999), SamplerExhausted);
}

TEST_CASE("property: puncture monotonicity and 1-Lipschitz distance") {
  for (double p : kPs) {
    for (const auto& [name, dom] : domain_families(p)) {
      CAPTURE(name);
      CAPTURE(p);
      const auto base = dom.base();
      const auto pts = sample_interior(dom, 2000, 17, 0.0);
      for (const auto& x : pts) CHECK(dom.boundary_distance(x) <= base.boundary_distance(x));
      const auto other = sample_interior(dom, 2000, 18, 0.0);
      int violations = 0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double diff = std::abs(dom.boundary_distance(pts[i]) - dom.boundary_distance(other[i]));
        if (diff > dom.norm().distance(pts[i], other[i]) + 1e-9) ++violations;
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("arc parameterization") {
  const Arc a({Point{0, 0}, Point{3, 0}, Point{3, 4}});
  CHECK(a.length() == 7.0);
  CHECK(a.point_at(5.0) == Point{3, 2});
  const Arc sub = a.subarc(1.0, 5.5);
  CHECK(sub.length() == doctest::Approx(4.5));
  CHECK(sub.start() == Point{1, 0});
  CHECK(a.reversed().start() == Point{3, 4});
  CHECK(a.concat(Arc::segment(Point{3, 4}, Point{0, 4})).length() == 10.0);
  CHECK_THROWS_AS(a.concat(Arc::segment(Point{0, 4}, Point{0, 5})), InvalidArgument);
  // Nested sampling for k and 2k.
  const auto s8 = a.sample_params(8);
  const auto s16 = a.sample_params(16);
  for (double s : s8) CHECK(std::find(s16.begin(), s16.end(), s) != s16.end());
  CHECK(Arc({Point{1, 1}, Point{1, 1}}).is_point());
}
