#include <cmath>

#include "doctest.h"
#include "qhgeo/errors.hpp"
#include "qhgeo/metrics.hpp"
#include "support.hpp"

using namespace qhgeo;
using qhgeo::testing::domain_families;
using qhgeo::testing::kPs;
using qhgeo::testing::sample_pairs;

namespace {

const DomainSpec kHalf = DomainSpec::half_space(2);
const DomainSpec kDisk = DomainSpec::ball(Point{0.0, 0.0}, 1.0);
const DomainSpec kLShape =
    DomainSpec::polygon({Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2}, Point{0, 2}});

}  // namespace

TEST_CASE("j metric") {
  CHECK(j_metric(kHalf, Point{0, 1}, Point{0, 2}) == doctest::Approx(std::log(2.0)));
  CHECK(j_metric(kHalf, Point{3, 1}, Point{3, 1}) == 0.0);
  CHECK(j_metric(kDisk, Point{0, 0}, Point{0.5, 0}) == doctest::Approx(std::log(2.0)));
  CHECK_THROWS_AS(j_metric(kDisk, Point{0, 0}, Point{1.5, 0}), MembershipError);
}

TEST_CASE("log ratio and segment upper bound") {
  CHECK(log_ratio_lower(kHalf, Point{0, 1}, Point{0, 2}) == doctest::Approx(std::log(2.0)));
  CHECK(log_ratio_lower(kHalf, Point{0, 1}, Point{5, 1}) == 0.0);
  CHECK(log_ratio_lower(kDisk, Point{0, 0}, Point{0.9, 0}) == doctest::Approx(std::log(10.0)));
  CHECK(*segment_upper(kHalf, Point{0, 2}, Point{0, 1}) == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(segment_upper(kHalf, Point{0, 1}, Point{5, 1}).has_value());
  CHECK(*segment_upper(kDisk, Point{0, 0}, Point{0.5, 0}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("quasihyperbolic length against closed forms") {
  CHECK(qh_arc_length(kHalf, Arc::segment(Point{0, 1}, Point{0, std::exp(1.0)})) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(qh_arc_length(kHalf, Arc::segment(Point{0, 1}, Point{1, 1})) == doctest::Approx(1.0).epsilon(1e-12));
  const auto g = with_punctures(kDisk, PunctureSet({Point{0, 0}}));
  CHECK(std::isinf(qh_arc_length(g, Arc::segment(Point{-0.5, 0}, Point{0.5, 0}))));
  CHECK_THROWS_AS(qh_arc_length(kDisk, Arc::segment(Point{0, 0}, Point{2, 0})), MembershipError);
  // Radial segment of the disk: integral of 1/(1 - t) from 0 to r.
  for (double r : {0.1, 0.5, 0.9, 0.999}) {
    CHECK(qh_arc_length(kDisk, Arc::segment(Point{0, 0}, Point{r, 0})) ==
          doctest::Approx(-std::log1p(-r)).epsilon(1e-9));
  }
  // Around a puncture at distance a from a straight line: integral of 1/sqrt(a^2 + t^2).
  const auto far = with_punctures(DomainSpec::ball(Point{0, 0}, 100.0), PunctureSet({Point{0, 0}}));
  const double a = 0.01;
  const double expected = 2.0 * std::asinh(1.0 / a);
  CHECK(qh_arc_length(far, Arc::segment(Point{-1, a}, Point{1, a})) == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("elementary inequality grid") {
  for (int i = 0; i <= 99; ++i) {
    const double r = i / 100.0;
    const double mid = std::log(1.0 / (1.0 - r));
    CHECK(r / (1.0 - r / 2.0) <= mid + 1e-15);
    CHECK(mid <= r / (1.0 - r) + 1e-15);
  }
}

TEST_CASE("property: j is a metric on samples") {
  for (const auto& [name, dom] : domain_families()) {
    CAPTURE(name);
    const auto a = sample_interior(dom, 1000, 21, 1e-4);
    const auto b = sample_interior(dom, 1000, 22, 1e-4);
    const auto c = sample_interior(dom, 1000, 23, 1e-4);
    int bad = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double ab = j_metric(dom, a[i], b[i]);
      CHECK(ab == j_metric(dom, b[i], a[i]));
      if (ab > j_metric(dom, a[i], c[i]) + j_metric(dom, c[i], b[i]) + 1e-9) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("property: straight segment length at most 2j for close pairs") {
  Rng rng(31);
  for (double p : kPs) {
    for (const auto& [name, dom] : domain_families(p)) {
      CAPTURE(name);
      CAPTURE(p);
      int checked = 0;
      for (const auto& x : sample_interior(dom, 200, 32, 1e-3)) {
        const double dx = dom.boundary_distance(x);
        const Point y = x + rng.direction(dom.dim()) * (rng.uniform() * 0.5 * dx / 1.8);
        if (!dom.contains(y)) continue;
        if (dom.norm().distance(x, y) > 0.5 * std::min(dx, dom.boundary_distance(y))) continue;
        ++checked;
        CHECK(qh_arc_length(dom, Arc::segment(x, y, dom.norm())) <= 2.0 * j_metric(dom, x, y) + 1e-9);
      }
      CHECK(checked > 50);
    }
  }
}

TEST_CASE("inner distance") {
  for (const auto& [x, y] : sample_pairs(kDisk, 20, 41)) {
    const auto b = inner_distance(kDisk, x, y, 1e-6);
    CHECK(b.lower == doctest::Approx(euclidean_norm(x - y)));
    CHECK(b.upper <= b.lower * (1 + 1e-6));
  }
  const auto g = with_punctures(kDisk, PunctureSet({Point{0, 0}}));
  const auto b = inner_distance(g, Point{-0.5, 0}, Point{0.5, 0}, 1e-6);
  CHECK(b.lower == 1.0);
  CHECK(b.upper == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b.upper > 1.0);
  CHECK(arc_clearance(g, *b.witness) > 0.0);

  const Point x{0.5, 1.5}, y{1.5, 0.5};
  const auto l = inner_distance(kLShape, x, y, 1e-6);
  // Oracle: brute force over bend points near the reflex corner.
  double best = kInfinity;
  for (int i = 0; i <= 400; ++i) {
    for (int j = 0; j <= 400; ++j) {
      const Point bend{0.9 + 0.1 * i / 400.0, 0.9 + 0.1 * j / 400.0};
      if (!kLShape.contains(bend)) continue;
      if (kLShape.segment_base_clearance(x, bend) <= 0.0 || kLShape.segment_base_clearance(bend, y) <= 0.0) continue;
      best = std::min(best, euclidean_norm(x - bend) + euclidean_norm(bend - y));
    }
  }
  CHECK(best == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
  CHECK(l.lower == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(l.upper <= best + 1e-9);
  CHECK(l.upper >= l.lower);
  CHECK(arc_clearance(kLShape, *l.witness) > 0.0);
  CHECK(l.witness->start() == x);
  CHECK(l.witness->end() == y);
}
