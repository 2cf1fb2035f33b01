#include <cmath>

#include "doctest.h"
#include "qhgeo/classify.hpp"
#include "qhgeo/constants.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/uniform_arcs.hpp"
#include "support.hpp"

using namespace qhgeo;
using qhgeo::testing::sample_pairs;

namespace {

const DomainSpec kHalf = DomainSpec::half_space(2);
const DomainSpec kDisk = DomainSpec::ball(Point{0, 0}, 1.0);
const DomainSpec kPuncturedDisk = with_punctures(kDisk, PunctureSet(std::vector<Point>{Point{0, 0}}));

// Random polyline with `n` interior vertices, kept inside the unit disk.
Arc random_arc(Rng& rng, int n) {
  std::vector<Point> v;
  for (int i = 0; i < n + 2; ++i) {
    const double r = 0.95 * std::sqrt(rng.uniform()), t = rng.uniform(0, 2 * M_PI);
    v.push_back(Point{r * std::cos(t), r * std::sin(t)});
  }
  return Arc(v);
}

DomainSpec scaled_disk(double s, bool punctured) {
  auto d = DomainSpec::ball(Point{0, 0}, s);
  if (punctured) d = with_punctures(d, PunctureSet(std::vector<Point>{Point{0.3 * s, 0.1 * s}}));
  return d;
}

}  // namespace

TEST_CASE("cone_constant examples") {
  const auto r = cone_constant(kDisk, Arc::segment(Point{-0.5, 0}, Point{0.5, 0}));
  CHECK(r.cone_constant == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.argmax_point == Point{0, 0});
  CHECK(cone_constant(kDisk, Arc::single(Point{0.1, 0.2})).cone_constant == 0.0);

  // One-dimensional maximization of min(t - 1, 3 - t) / t over a fine grid.
  double oracle = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double t = 1.0 + 2.0 * i / 200000.0;
    oracle = std::max(oracle, std::min(t - 1.0, 3.0 - t) / t);
  }
  const auto v = cone_constant(kHalf, Arc::segment(Point{0, 1}, Point{0, 3}));
  CHECK(v.cone_constant == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(v.cone_constant == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(cone_constant(kDisk, Arc::segment(Point{0, 0}, Point{2, 0})), MembershipError);
}

TEST_CASE("property: cone constant is monotone under nested refinement") {
  Rng rng(5);
  for (int it = 0; it < 100; ++it) {
    const Arc a = random_arc(rng, static_cast<int>(rng.index(5)));
    double prev = 0.0;
    for (std::size_t k : {1u, 2u, 4u, 8u, 16u, 32u}) {
      const double c = cone_constant(kPuncturedDisk.base(), a, k).cone_constant;
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("diam_cone_constant") {
  const Arc seg = Arc::segment(Point{-0.5, 0.1}, Point{0.4, -0.3});
  CHECK(diam_cone_constant(kDisk, seg) == doctest::Approx(cone_constant(kDisk, seg).cone_constant).epsilon(1e-12));
  CHECK(diam_cone_constant(kDisk, Arc::single(Point{0, 0})) == 0.0);

  // Half circle of radius 1 in {y > -2}, i.e. the half-plane shifted down.
  const auto shifted = DomainSpec::polygon({Point{-50, -2}, Point{50, -2}, Point{50, 50}, Point{-50, 50}});
  std::vector<Point> v;
  for (int i = 0; i <= 64; ++i) v.push_back(Point{std::cos(M_PI * i / 64), std::sin(M_PI * i / 64)});
  const Arc half(v);
  const double dc = diam_cone_constant(shifted, half);
  const double lc = cone_constant(shifted, half).cone_constant;
  CHECK(dc <= lc);
  // Direct: at the top, the subarc diameters are chords of a quarter circle.
  CHECK(dc >= std::sqrt(2.0) / 3.0 - 1e-9);
}

TEST_CASE("uniform and inner-uniform constants") {
  const Arc chord = Arc::segment(Point{-0.5, 0}, Point{0.5, 0});
  const auto u = uniform_constant(kDisk, chord);
  CHECK(u.length_ratio == 1.0);
  CHECK(u.value == doctest::Approx(std::max(u.cone_constant, 1.0)));

  const auto detour = punctured_ball_arc(Point{0, 0}, 1.0, Point{0, 0}, Point{-0.5, 0}, Point{0.5, 0});
  CHECK(uniform_constant(kPuncturedDisk, detour.arc).length_ratio == doctest::Approx(1.285).epsilon(2e-3));

  const Arc bent({Point{-0.5, 0.2}, Point{0.1, 0.4}, Point{0.6, -0.1}});
  const auto plain = uniform_constant(kDisk, bent);
  const auto inner = inner_uniform_constant(kDisk, bent, 1e-9);
  CHECK(inner.value == doctest::Approx(plain.value).epsilon(1e-8));

  const auto degenerate = uniform_constant(kDisk, Arc({Point{0, 0}, Point{0.2, 0}, Point{0, 0}}));
  CHECK(degenerate.degenerate);
  CHECK(degenerate.value == degenerate.cone_constant);
}

TEST_CASE("john_estimate on balls and the half-plane") {
  JohnOptions cheap;
  cheap.use_neargeodesic = false;
  const auto ball = john_estimate(kDisk, 100, 1, cheap);
  CHECK(ball.pairs.size() == 100);
  CHECK(ball.estimate <= 2.0 + 0.05);

  const auto full = john_estimate(kDisk, 10, 2);
  CHECK(full.estimate <= 2.0 + 0.05);
  CHECK(full.candidate_family.size() == 4);

  const auto punct = john_estimate(kPuncturedDisk, 100, 3, cheap);
  CHECK(punct.estimate <= 10.0 + 0.1);

  const auto half = john_estimate(kHalf, 50, 4, cheap);
  CHECK(std::isfinite(half.estimate));
  CHECK(half.estimate <= 2.0 + 0.05);
}

TEST_CASE("separation_check examples") {
  const PunctureSet good(std::vector<Point>{Point{0, 1}, Point{0, std::exp(0.6)}});
  const auto g = separation_check(kHalf, good);
  CHECK(g.status == SeparationStatus::pass);
  REQUIRE(g.worst_pair.has_value());
  CHECK(g.pairs[*g.worst_pair].lower == doctest::Approx(0.6).epsilon(1e-6));

  const PunctureSet bad(std::vector<Point>{Point{0, 1}, Point{0, std::exp(0.4)}});
  CHECK(separation_check(kHalf, bad).status == SeparationStatus::fail);

  CHECK(separation_check(kHalf, PunctureSet(std::vector<Point>{Point{0, 1}})).status == SeparationStatus::pass);

  // Order of the punctures does not matter.
  const std::vector<Point> pts{Point{0.1, 0.2}, Point{-0.4, 0.3}, Point{0.5, -0.5}};
  const std::vector<Point> rev(pts.rbegin(), pts.rend());
  const auto a = separation_check(kDisk, PunctureSet(pts));
  const auto b = separation_check(kDisk, PunctureSet(rev));
  CHECK(a.status == b.status);
  CHECK(a.worst_lower == b.worst_lower);
  CHECK(validate_punctures(kDisk, PunctureSet(pts)).validated() == Validation::pass);
}

TEST_CASE("ball_puncture_count") {
  const PunctureSet raw(std::vector<Point>{Point{0, 0}, Point{0.6, 0}});
  CHECK_THROWS_AS(ball_puncture_count(with_punctures(kDisk, raw), Point{0.1, 0}), PreconditionError);
  const auto g = with_punctures(kDisk, validate_punctures(kDisk, raw));
  REQUIRE(g.punctures().validated() == Validation::pass);
  CHECK(ball_puncture_count(g, Point{0.05, 0}) == 1);
  CHECK(ball_puncture_count(with_punctures(kDisk, PunctureSet().with_validation(Validation::pass)), Point{0, 0}) == 0);
  for (const auto& w : sample_interior(g, 500, 9, 1e-4)) CHECK(ball_puncture_count(g, w) <= 1);
}

TEST_CASE("cone_floor_check") {
  const Arc chord = Arc::segment(Point{-0.5, 0}, Point{0.5, 0});
  const auto r = cone_floor_check(kDisk, chord, 0.5);
  CHECK(r.pass);
  CHECK(r.worst_margin >= -1e-12);

  Rng rng(11);
  for (int it = 0; it < 50; ++it) {
    const Point a{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)}, b{rng.uniform(-0.7, 0.7), rng.uniform(-0.7, 0.7)};
    const auto arc = ball_arc(Point{0, 0}, 1.0, a, b);
    CHECK(cone_floor_check(kDisk, arc.arc, std::max(1.0, arc.cone_constant)).pass);
  }

  // Cone constant about 3: a detour hugging the boundary.
  const Arc hug({Point{-0.5, 0}, Point{-0.9, 0.3}, Point{0.0, 0.97}, Point{0.9, 0.3}, Point{0.5, 0}});
  REQUIRE(cone_constant(kDisk, hug).cone_constant > 1.0);
  CHECK_THROWS_AS(cone_floor_check(kDisk, hug, 1.0), PreconditionError);
}

TEST_CASE("psi functions") {
  CHECK(psi_is_gauge(PsiFunction::log1p()));
  CHECK(psi_admissible(PsiFunction::log1p()));
  CHECK_FALSE(psi_admissible(PsiFunction::log1p(0.5)));
  CHECK(psi_admissible(PsiFunction::linear(1.0)));
  CHECK_FALSE(psi_is_gauge(PsiFunction([](double t) { return 1.0 + t; }, "shifted")));

  const auto grid = psi_test_grid();
  CHECK(psi_class_check(PsiFunction::linear(), 8.0, 8.0, 8.0, grid));
  std::vector<double> mid;
  for (double t : grid) {
    if (t >= 0.1 && t <= 100) mid.push_back(t);
  }
  CHECK(psi_class_check(PsiFunction::log1p(), 8.0, 1.01, 8.0, mid));
  CHECK_FALSE(psi_class_check(PsiFunction::expm1(), 2.0, 1.0, 1e6, grid));
  CHECK_THROWS_AS(psi_class_check(PsiFunction([](double t) { return t < 1 ? 0.0 : t; }, "flat"), 2.0, 1.0, 2.0, grid),
                  InvalidArgument);
}

TEST_CASE("psi_john_margin") {
  const Point center{0, 1};
  const auto half = psi_john_margin(kHalf, center, PsiFunction::log1p(56.0), 500, 21);
  CHECK(half.samples == 500);
  CHECK(half.worst_excess <= 0.0);

  const auto low = psi_john_margin(kDisk, Point{0, 0}, PsiFunction::log1p(0.5), 20, 22);
  CHECK(low.worst_excess > 0.0);

  const auto only = psi_john_margin(kDisk, Point{0, 0}, PsiFunction::log1p(), std::vector<Point>{Point{0, 0}});
  CHECK(only.worst_excess == 0.0);
  CHECK(only.certified());
}

TEST_CASE("uniform_subdomain_bound_check") {
  const auto r1 = uniform_subdomain_bound_check(kHalf, DomainSpec::ball(Point{0, 2}, 1.0), 2.0, 200, 31);
  CHECK(r1.checked == 200);
  CHECK(r1.violations == 0);
  const auto r2 = uniform_subdomain_bound_check(kPuncturedDisk, DomainSpec::ball(Point{0.5, 0}, 0.2), 2.0, 200, 32);
  CHECK(r2.violations == 0);
  CHECK(k_upper_estimate(kDisk, Point{0.1, 0}, Point{0.1, 0}) == 0.0);
  CHECK_THROWS_AS(uniform_subdomain_bound_check(kPuncturedDisk, DomainSpec::ball(Point{0.1, 0}, 0.2), 2.0, 5, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(uniform_subdomain_bound_check(kDisk, DomainSpec::ball(Point{0.9, 0}, 0.2), 2.0, 5, 1),
                  InvalidArgument);
}

TEST_CASE("cor4_2_check") {
  const auto g = with_punctures(DomainSpec::ball(Point{0, 0}, 1.0),
                                PunctureSet(std::vector<Point>{Point{0, 0}, Point{0.5, 0.3}}));
  const auto pairs = cor4_2_pairs(g, 50, 41);
  REQUIRE(pairs.size() == 50);
  const auto r = cor4_2_check(g, pairs);
  CHECK(r.checked == 50);
  CHECK(r.violations == 0);
  CHECK(r.worst_ratio < 0.01);

  const Point x = pairs.front().first;
  CHECK(cor4_2_check(g, {{x, x}}).checked == 1);
  CHECK(cor4_2_check(g, {{Point{0.3, 0.3}, Point{0.31, 0.3}}}).excluded == 1);
}

TEST_CASE("property: scale equivariance") {
  for (bool punctured : {false, true}) {
    const auto d1 = scaled_disk(1.0, punctured);
    for (double s : {0.25, 4.0, 3.0}) {
      const auto ds = scaled_disk(s, punctured);
      for (const auto& [x, y] : sample_pairs(d1, 10, 51, 0.01)) {
        const Point xs = x * s, ys = y * s;
        CHECK(j_metric(ds, xs, ys) == doctest::Approx(j_metric(d1, x, y)).epsilon(1e-9));
        const Arc a({x, lerp(x, y, 0.5) * 0.8, y});
        const Arc as({xs, lerp(x, y, 0.5) * 0.8 * s, ys});
        CHECK(cone_constant(ds, as).cone_constant == doctest::Approx(cone_constant(d1, a).cone_constant).epsilon(1e-9));
        CHECK(uniform_constant(ds, as).value == doctest::Approx(uniform_constant(d1, a).value).epsilon(1e-9));
      }
      // Power-of-two scalings keep the search lattice exact, so brackets agree to rounding.
      if (s != 3.0) {
        const Point x{-0.4, 0.2}, y{0.5, -0.3};
        const auto b1 = k_distance(d1, x, y, 0.02, KOptions{.max_rounds = 2});
        const auto bs = k_distance(ds, x * s, y * s, 0.02, KOptions{.max_rounds = 2});
        CHECK(bs.lower == doctest::Approx(b1.lower).epsilon(1e-9));
        CHECK(bs.upper == doctest::Approx(b1.upper).epsilon(1e-9));
      }
    }
  }
}
