#include "qhgeo/acceptance.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numeric>
#include <queue>
#include <sstream>

#include "qhgeo/classify.hpp"
#include "qhgeo/constants.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/geodesics.hpp"
#include "qhgeo/io.hpp"
#include "qhgeo/metrics.hpp"
#include "qhgeo/parallel.hpp"
#include "qhgeo/repair.hpp"
#include "qhgeo/rng.hpp"
#include "qhgeo/uniform_arcs.hpp"

namespace qhgeo {

namespace {

constexpr double kPs[] = {1.0, 1.5, 2.0, 3.0, kInfinity};

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

// Walks each segment in 200 steps; independent of the library cone evaluator.
template <class Dist>
double dense_cone(const Arc& a, Dist&& dist, double* min_dist = nullptr) {
  const auto& v = a.vertices();
  const double len = a.length();
  double best = 0.0, lowest = kInfinity, s0 = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double seg = a.norm().distance(v[i], v[i + 1]);
    for (int k = 0; k <= 200; ++k) {
      const double t = k / 200.0;
      const Point z = v[i] + (v[i + 1] - v[i]) * t;
      const double s = s0 + seg * t;
      const double dz = dist(z);
      lowest = std::min(lowest, dz);
      best = std::max(best, std::min(s, len - s) / dz);
    }
    s0 += seg;
  }
  if (v.size() == 1) lowest = dist(v[0]);
  if (min_dist) *min_dist = lowest;
  return best;
}

Point random_in_ball(Rng& rng, const Point& c, double r, const Norm& norm, double margin = 0.02) {
  for (;;) {
    Point z(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) z[i] = c[i] + rng.uniform(-r, r);
    if (r - norm.distance(z, c) > margin * r) return z;
  }
}

// Depth in G = base \ pts, computed from the geometry directly.
auto punctured_depth(const DomainSpec& base, const std::vector<Point>& pts) {
  return [&base, pts](const Point& z) {
    double d = base.signed_base_distance(z);
    for (const auto& q : pts) d = std::min(d, base.norm().distance(z, q));
    return d;
  };
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

CriterionResult make(int id, std::string title, double limit = 0.0) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.time_limit = limit;
  return r;
}

// 1. Half-space vertical pairs against log(d2/d1).
CriterionResult half_space_oracle(std::uint64_t seed) {
  auto r = make(1, "half-space closed form", 60.0);
  Rng rng = Rng::child(seed, 1);
  std::size_t misses = 0, wide = 0;
  double worst_width = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t dim = i % 4 == 3 ? 3 : 2;
    const auto h = DomainSpec::half_space(dim);
    Point x(dim);
    for (std::size_t k = 0; k + 1 < dim; ++k) x[k] = rng.uniform(-5.0, 5.0);
    Point y = x;
    double exact = 0.0;
    do {
      x[dim - 1] = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
      y[dim - 1] = std::exp(rng.uniform(std::log(1e-2), std::log(1e2)));
      exact = std::fabs(std::log(y[dim - 1] / x[dim - 1]));
    } while (exact < 1e-2);
    const auto b = k_distance(h, x, y, 0.01);
    const double tol = 1e-12 * std::max(1.0, exact);
    if (b.lower > exact + tol || b.upper < exact - tol) ++misses;
    const double width = (b.upper - b.lower) / exact;
    worst_width = std::max(worst_width, width);
    if (width > 0.01) ++wide;
  }
  r.pass = misses == 0 && wide == 0;
  r.summary = strf("100 pairs, %zu outside bracket, %zu wider than 1%%, worst width %.3g", misses, wide, worst_width);
  r.metrics = {{"misses", double(misses)}, {"wide", double(wide)}, {"worst_width", worst_width}};
  return r;
}

// 2. Ball(0, 1e6) \ {0} at unit scale against the log-polar lattice.
CriterionResult punctured_space_oracle(std::uint64_t seed) {
  auto r = make(2, "punctured-space lattice oracle", 600.0);
  const auto g = with_punctures(DomainSpec::ball(Point{0, 0}, 1e6), PunctureSet({Point{0, 0}}));
  // A quarter of the toolkit's starting graph resolution.
  const double h = KOptions{}.initial_resolution / 4.0;
  Rng rng = Rng::child(seed, 2);
  std::vector<std::pair<Point, Point>> pairs = {{Point{1, 0}, Point{0, 1}}};
  while (pairs.size() < 20) {
    auto polar = [&] {
      const double rad = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
      const double t = rng.uniform(0.0, 2.0 * M_PI);
      return Point{rad * std::cos(t), rad * std::sin(t)};
    };
    const Point a = polar(), b = polar();
    pairs.push_back({a, b});
  }
  std::size_t bad = 0, exhausted = 0;
  double worst = 0.0, example = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [x, y] = pairs[i];
    const auto b = k_distance(g, x, y, 0.01);
    const double oracle = log_polar_lattice_distance(x[0], x[1], y[0], y[1], h);
    const double rel = std::fabs(b.midpoint() - oracle) / oracle;
    worst = std::max(worst, rel);
    if (rel > 0.02) ++bad;
    exhausted += b.budget_exhausted;
    if (i == 0) example = b.midpoint();
  }
  const bool example_ok = std::fabs(example - M_PI / 2) <= 0.02 * M_PI / 2;
  r.pass = bad == 0 && example_ok;
  r.summary = strf("20 pairs, %zu off by more than 2%%, worst %.3g, %zu brackets at budget; (1,0)-(0,1) gives %.6f",
                   bad, worst, exhausted, example);
  r.metrics = {{"bad", double(bad)}, {"worst_rel", worst}, {"exhausted", double(exhausted)}, {"example", example}};
  return r;
}

// 3. k_upper >= k_lower >= j >= |log ratio| and the segment bound.
CriterionResult inequality_chain(std::uint64_t seed) {
  auto r = make(3, "inequality chain");
  struct Family {
    const char* name;
    DomainSpec d;
  };
  const std::vector<Family> fams = {
      {"half-plane", DomainSpec::half_space(2)},
      {"disk", DomainSpec::ball(Point{0, 0}, 1.0)},
      {"box", DomainSpec::box(Point{-1, -0.5}, Point{1, 0.5})},
      {"punctured-disk", with_punctures(DomainSpec::ball(Point{0, 0}, 1.0), PunctureSet({Point{0, 0}, Point{0.6, 0}}))},
      {"ball3", DomainSpec::ball(Point{0, 0, 0}, 1.0)},
  };
  // Valid brackets are all that is checked, so a short local search suffices.
  const KOptions fast{.max_rounds = 1, .use_graph = false, .use_cell_bound = false, .descent_rounds = 2};
  constexpr std::size_t kPerFamily = 2000;
  std::size_t violations = 0, errors = 0, segment_checked = 0, segment_violations = 0;
  for (std::size_t f = 0; f < fams.size(); ++f) {
    const DomainSpec& d = fams[f].d;
    const auto xs = sample_interior(d, kPerFamily, Rng::child(seed, 30 + f).next(), 1e-3);
    const auto ys = sample_interior(d, kPerFamily, Rng::child(seed, 40 + f).next(), 1e-3);
    // 0 ok, bit 1 chain violation, bit 2 segment violation, bit 4 segment applicable, bit 8 error.
    const auto flags = parallel_map<int>(kPerFamily, [&](std::size_t i) {
      try {
        const auto b = k_distance(d, xs[i], ys[i], 0.01, fast);
        const double j = j_metric(d, xs[i], ys[i]);
        const double lr = log_ratio_lower(d, xs[i], ys[i]);
        int fl = 0;
        if (b.upper < b.lower - 1e-9 || b.lower < j - 1e-9 || j < lr - 1e-9) fl |= 1;
        if (const auto su = segment_upper(d, xs[i], ys[i])) {
          fl |= 4;
          if (*su < b.upper - 1e-9) fl |= 2;
        }
        return fl;
      } catch (const Error&) {
        return 8;
      }
    });
    for (int fl : flags) {
      violations += fl & 1;
      segment_violations += (fl >> 1) & 1;
      segment_checked += (fl >> 2) & 1;
      errors += (fl >> 3) & 1;
    }
  }
  const std::size_t total = kPerFamily * fams.size();
  r.pass = violations == 0 && segment_violations == 0 && errors == 0;
  r.summary = strf("%zu pairs in 5 families, %zu chain violations, %zu errors; segment bound on %zu pairs, %zu violations",
                   total, violations, errors, segment_checked, segment_violations);
  r.metrics = {{"pairs", double(total)},
               {"violations", double(violations)},
               {"errors", double(errors)},
               {"segment_checked", double(segment_checked)},
               {"segment_violations", double(segment_violations)}};
  return r;
}

// 4. Short segments: l_k(segment) <= 2 j when |x - y| <= min(d) / 2.
CriterionResult short_segment(std::uint64_t seed) {
  auto r = make(4, "short-segment bound");
  const std::vector<DomainSpec> fams = {
      DomainSpec::half_space(2),
      DomainSpec::ball(Point{0, 0}, 1.0, 3.0),
      DomainSpec::box(Point{-1, -0.5}, Point{1, 0.5}, 1.0),
      DomainSpec::polygon({Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2}, Point{0, 2}}),
      with_punctures(DomainSpec::ball(Point{0, 0}, 1.0), PunctureSet({Point{0, 0}, Point{0.6, 0}})),
      DomainSpec::ball(Point{0, 0, 0}, 1.0, kInfinity),
  };
  constexpr std::size_t kTotal = 10000;
  Rng rng = Rng::child(seed, 4);
  std::vector<std::pair<std::size_t, std::pair<Point, Point>>> pairs;
  while (pairs.size() < kTotal) {
    const std::size_t f = pairs.size() % fams.size();
    const DomainSpec& d = fams[f];
    const Point x = sample_interior(d, 1, rng.next(), 1e-4).front();
    Point v = rng.direction(d.dim());
    v = v / d.norm()(v);
    const Point y = x + v * (rng.uniform(0.0, 0.5) * d.boundary_distance(x));
    if (!d.contains(y)) continue;
    if (d.norm().distance(x, y) > 0.5 * std::min(d.boundary_distance(x), d.boundary_distance(y))) continue;
    pairs.push_back({f, {x, y}});
  }
  const auto excess = parallel_map<double>(kTotal, [&](std::size_t i) {
    const auto& [f, xy] = pairs[i];
    return qh_segment_length(fams[f], xy.first, xy.second) - 2.0 * j_metric(fams[f], xy.first, xy.second);
  });
  std::size_t violations = 0;
  double worst = -kInfinity;
  for (double e : excess) {
    if (e > 1e-9) ++violations;
    worst = std::max(worst, e);
  }
  r.pass = violations == 0;
  r.summary = strf("%zu pairs, %zu violations, max l_k - 2j = %.3g", kTotal, violations, worst);
  r.metrics = {{"violations", double(violations)}, {"worst_excess", worst}};
  return r;
}

// 5. At most one puncture in B(w, d_D(w)/6).
CriterionResult one_puncture_per_ball(std::uint64_t seed) {
  auto r = make(5, "one puncture per ball");
  Rng rng = Rng::child(seed, 5);
  std::size_t probes = 0, over = 0, mismatches = 0, scenarios = 0, attempts = 0;
  int max_count = 0;
  while (probes < 1000 && attempts < 1000) {
    ++attempts;
    const int kind = static_cast<int>(attempts % 3);
    const DomainSpec base = kind == 0   ? DomainSpec::ball(Point{0, 0}, 4.0)
                            : kind == 1 ? DomainSpec::box(Point{-4, -2}, Point{4, 2})
                                        : DomainSpec::half_space(2);
    const std::size_t count = 1 + rng.index(5);
    const auto pts = sample_interior(base, count, rng.next(), 0.3);
    const auto p = validate_punctures(base, PunctureSet(pts));
    if (p.validated() != Validation::pass) continue;
    ++scenarios;
    const DomainSpec g = with_punctures(base, p);
    std::vector<Point> ws = sample_interior(g, 25, rng.next(), 1e-3);
    while (ws.size() < 50) {
      const Point& q = pts[rng.index(pts.size())];
      const Point w = q + rng.direction(2) * (rng.uniform(0.01, 0.5) * base.base_distance(q));
      if (g.raw_distance(w) > 0.0) ws.push_back(w);
    }
    for (const Point& w : ws) {
      const int n = ball_puncture_count(g, w);
      int direct = 0;
      for (const Point& q : pts) direct += base.norm().distance(w, q) < base.base_distance(w) / 6.0;
      if (n != direct) ++mismatches;
      if (n > 1) ++over;
      max_count = std::max(max_count, n);
      ++probes;
    }
  }
  r.pass = probes >= 1000 && over == 0 && mismatches == 0;
  r.summary = strf("%zu probes in %zu validated scenarios, %zu balls with 2+ punctures, %zu count mismatches", probes,
                   scenarios, over, mismatches);
  r.metrics = {{"probes", double(probes)}, {"over", double(over)}, {"mismatches", double(mismatches)},
               {"max_count", double(max_count)}};
  return r;
}

// 6. Uniform-arc constructors against their bounds.
CriterionResult uniform_arc_bounds(std::uint64_t seed) {
  auto r = make(6, "uniform-arc bounds", 300.0);
  Rng rng = Rng::child(seed, 6);
  struct Tally {
    double bound;
    double worst = 0.0;
    std::size_t violations = 0;
    void add(double measured, bool reported_ok) {
      worst = std::max(worst, measured);
      if (measured > bound + 1e-9 || !reported_ok) ++violations;
    }
  };
  Tally ball{2.0}, centered{10.0}, offcenter{18.0}, unions{ledger::two_ball().to_double()};
  auto measure = [](const UniformArcReport& a, auto&& depth) {
    double lowest = 0.0;
    const double cone = dense_cone(a.arc, depth, &lowest);
    const double chord = a.arc.norm().distance(a.arc.start(), a.arc.end());
    const double ratio = chord > 0.0 ? a.arc.length() / chord : 1.0;
    return lowest > 0.0 ? std::max(cone, ratio) : kInfinity;
  };
  for (int it = 0; it < 1000; ++it) {
    const std::size_t dim = it % 3 == 0 ? 3 : 2;
    const Norm norm(kPs[rng.index(5)]);
    Point center(dim);
    for (std::size_t i = 0; i < dim; ++i) center[i] = rng.uniform(-2.0, 2.0);
    const double rad = rng.uniform(0.5, 2.0);
    const Point z1 = random_in_ball(rng, center, rad, norm), z2 = random_in_ball(rng, center, rad, norm);
    auto depth = [&](const Point& z) { return rad - norm.distance(z, center); };

    const auto a = ball_arc(center, rad, z1, z2, norm);
    ball.add(measure(a, depth), a.within_bound() && a.arc.start() == z1 && a.arc.end() == z2);

    for (const bool at_center : {true, false}) {
      const Point p = at_center ? center : random_in_ball(rng, center, rad, norm);
      auto pdist = [&](const Point& z) { return std::min(depth(z), norm.distance(z, p)); };
      const auto b = punctured_ball_arc(center, rad, p, z1, z2, norm);
      (at_center ? centered : offcenter)
          .add(measure(b, pdist), b.within_bound() && b.arc.start() == z1 && b.arc.end() == z2);
    }

    const double r2 = rng.uniform(0.5, 2.0);
    Point dir = rng.direction(dim);
    dir = dir / norm(dir);
    const Point c2 = center + dir * (rng.uniform(0.1, 0.95) * (rad + r2));
    const Point w1 = random_in_ball(rng, center, rad, norm), w2 = random_in_ball(rng, c2, r2, norm);
    std::vector<Point> pts;
    if (it % 3 != 0) pts.push_back(random_in_ball(rng, it % 2 ? center : c2, it % 2 ? rad : r2, norm));
    auto udist = [&](const Point& z) {
      double d = std::max(depth(z), r2 - norm.distance(z, c2));
      for (const auto& q : pts) d = std::min(d, norm.distance(z, q));
      return d;
    };
    const auto u = two_ball_union_arc(Ball{center, rad}, Ball{c2, r2}, PunctureSet(pts), w1, w2, norm);
    unions.add(measure(u, udist), u.within_bound() && u.arc.start() == w1 && u.arc.end() == w2);
  }
  const std::size_t v = ball.violations + centered.violations + offcenter.violations + unions.violations;
  r.pass = v == 0;
  r.summary = strf("1000 instances each, %zu violations; measured max(cone, ratio): ball %.4g, centred %.4g, "
                   "off-centre %.4g, two-ball %.4g",
                   v, ball.worst, centered.worst, offcenter.worst, unions.worst);
  r.metrics = {{"violations", double(v)},
               {"ball_worst", ball.worst},
               {"centered_worst", centered.worst},
               {"offcenter_worst", offcenter.worst},
               {"two_ball_worst", unions.worst}};
  return r;
}

// 7. Repair soundness over seeded scenarios.
CriterionResult repair_soundness(std::uint64_t seed) {
  auto r = make(7, "repair soundness", 900.0);
  Rng rng = Rng::child(seed, 7);
  const double length_bound = ledger::two_ball().to_double();
  std::size_t scenarios = 0, failures = 0, dirty = 0;
  double worst_ratio = 0.0, worst_cone_frac = 0.0;
  while (scenarios < 200) {
    const bool box = scenarios % 3 == 2;
    const DomainSpec base = box ? DomainSpec::box(Point{-4, -2}, Point{4, 2}) : DomainSpec::ball(Point{0, 0}, 4.0);
    const std::size_t count = 1 + rng.index(3);
    const auto pts = sample_interior(base, count, rng.next(), 0.5);
    const auto p = validate_punctures(base, PunctureSet(pts));
    if (p.validated() != Validation::pass) continue;
    const DomainSpec g = with_punctures(base, p);

    const Point& q = pts[rng.index(pts.size())];
    Point z1, z2;
    if (scenarios % 4 != 3) {
      const Point u = rng.direction(2);
      const double t = rng.uniform(0.01, 0.9) * base.base_distance(q);
      z1 = q + u * t;
      z2 = q - u * (t * rng.uniform(0.5, 1.0));
    } else {
      const auto zz = sample_interior(g, 2, rng.next(), 0.05);
      z1 = zz[0];
      z2 = zz[1];
    }
    if (g.raw_distance(z1) <= 0.0 || g.raw_distance(z2) <= 0.0) continue;

    Arc gamma = Arc::segment(z1, z2);
    if (scenarios % 5 == 1) {
      gamma = Arc({z1, q, z2});
    } else if (scenarios % 5 == 2) {
      try {
        gamma = neargeodesic(base, z1, z2, 1.2, KOptions{.max_rounds = 2}).arc;
      } catch (const BudgetExhausted& e) {
        gamma = e.best().arc;
      }
    }
    const auto rep = repair_arc(base, p, gamma);
    double lowest = 0.0;
    const double cone = dense_cone(rep.output_arc, punctured_depth(base, pts), &lowest);
    const double bound = ledger::repair_cone(std::max(1.0, rep.input_cone_constant));
    const bool ok = rep.output_arc.start() == z1 && rep.output_arc.end() == z2 && lowest > 0.0 &&
                    rep.min_clearance > 0.0 && rep.length_ratio <= length_bound && cone <= bound;
    if (!ok) ++failures;
    if (rep.case_taken != RepairCase::clean) ++dirty;
    worst_ratio = std::max(worst_ratio, rep.length_ratio);
    worst_cone_frac = std::max(worst_cone_frac, cone / bound);
    ++scenarios;
  }
  r.pass = failures == 0;
  r.summary = strf("%zu scenarios (%zu repaired), %zu failures, worst length ratio %.4g, worst cone / bound %.3g",
                   scenarios, dirty, failures, worst_ratio, worst_cone_frac);
  r.metrics = {{"failures", double(failures)},
               {"repaired", double(dirty)},
               {"worst_length_ratio", worst_ratio},
               {"worst_cone_fraction", worst_cone_frac}};
  return r;
}

// 8. John constants of D and G and the transfer of G-arcs back to D.
CriterionResult john_round_trip(std::uint64_t seed) {
  auto r = make(8, "John round trip, 5 punctures");
  const DomainSpec disk = DomainSpec::ball(Point{0, 0}, 1.0);
  std::size_t violations = 0, transfers = 0;
  double worst_jg = 0.0, worst_transfer = 0.0;
  for (std::uint64_t s = seed; s < seed + 5; ++s) {
    Rng rng = Rng::child(s, 8);
    const double phase = rng.uniform(0.0, 2.0 * M_PI / 5.0);
    std::vector<Point> pts;
    for (int i = 0; i < 5; ++i) {
      const double a = phase + 2.0 * M_PI * i / 5.0;
      pts.push_back(Point{0.5 * std::cos(a), 0.5 * std::sin(a)});
    }
    const auto p = validate_punctures(disk, PunctureSet(pts));
    if (p.validated() != Validation::pass) {
      ++violations;
      continue;
    }
    const DomainSpec g = with_punctures(disk, p);
    const double jd = john_estimate(disk, 6, s).estimate;
    const double jg = john_estimate(g, 6, s).estimate;
    if (jg > ledger::repair_cone(std::max(1.0, jd))) ++violations;
    worst_jg = std::max(worst_jg, jg);

    const auto zs = sample_interior(g, 2, rng.next(), 0.02);
    const std::size_t i = rng.index(5), j = (i + 1 + rng.index(4)) % 5;
    for (const auto& [z1, z2] : {std::pair{pts[i], zs[0]}, std::pair{pts[i], pts[j]}, std::pair{zs[0], zs[1]}}) {
      const auto t = john_transfer(disk, p, z1, z2);
      const double cone = dense_cone(t.beta, [&](const Point& z) { return disk.signed_base_distance(z); });
      const double bound = 1.02 * (65.0 / 63.0) * t.measured_c1;
      if (!t.ok || cone > bound || !(t.beta.start() == z1) || !(t.beta.end() == z2)) ++violations;
      worst_transfer = std::max(worst_transfer, cone / bound);
      ++transfers;
    }
  }
  r.pass = violations == 0;
  r.summary = strf("5 seeds, %zu transfers, %zu violations; largest G estimate %.4g, worst transfer cone / bound %.3g",
                   transfers, violations, worst_jg, worst_transfer);
  r.metrics = {{"violations", double(violations)}, {"worst_john_G", worst_jg}, {"worst_transfer_fraction", worst_transfer}};
  return r;
}

// 9. psi floor, the k <= 7 c^3 j bound in ball subdomains and the exact transforms.
CriterionResult psi_machinery(std::uint64_t seed) {
  auto r = make(9, "psi machinery");
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(std::pow(10.0, -4.0 + 11.0 * i / 2000.0));
  const std::vector<PsiFunction> cands = {
      PsiFunction::log1p(),
      PsiFunction::log1p(2.0),
      PsiFunction::log1p(0.5),
      PsiFunction::linear(),
      PsiFunction::linear(1e-3),
      PsiFunction::expm1(),
      PsiFunction([](double t) { return std::sqrt(t); }, "sqrt t"),
      PsiFunction([](double t) { return 3.0 * std::log1p(std::sqrt(t)); }, "3 log(1 + sqrt t)"),
  };
  std::size_t accepted = 0, floor_violations = 0, unguarded = 0;
  for (const auto& psi : cands) {
    const bool ok = psi_admissible(psi);
    bool transform_throws = false;
    try {
      psi_necessity_transform(psi);
    } catch (const InvalidArgument&) {
      transform_throws = true;
    }
    if (ok == transform_throws) ++unguarded;
    if (!ok) continue;
    ++accepted;
    for (double t : grid) {
      if (psi(t) < std::log1p(t) * (1.0 - 1e-12)) {
        ++floor_violations;
        break;
      }
    }
  }

  struct Sub {
    DomainSpec ambient, ball;
    std::size_t pairs;
  };
  const std::vector<Sub> subs = {
      {DomainSpec::half_space(2), DomainSpec::ball(Point{0, 2}, 1.0), 67},
      {DomainSpec::ball(Point{0, 0}, 10.0), DomainSpec::ball(Point{3, 1}, 2.0), 67},
      {DomainSpec::polygon({Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2}, Point{0, 2}}),
       DomainSpec::ball(Point{0.5, 0.5}, 0.4), 66},
  };
  const double c = ledger::ball_uniform().to_double();
  std::size_t bound_pairs = 0, bound_violations = 0;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    const auto rep = uniform_subdomain_bound_check(subs[i].ambient, subs[i].ball, c, subs[i].pairs,
                                                   Rng::child(seed, 90 + i).next());
    bound_pairs += rep.checked;
    bound_violations += rep.violations;
    worst_ratio = std::max(worst_ratio, rep.worst_ratio);
  }

  std::size_t inexact = 0;
  if (!(ledger::mu() == Rational(40824)) || !(ledger::psi_necessity_factor() == Rational(1025 * 40824)) ||
      !(ledger::psi_sufficiency_factor() == Rational(1025 * 40826))) {
    ++inexact;
  }
  const auto base = PsiFunction::log1p();
  const auto nec = psi_necessity_transform(base);
  const auto suf = psi_sufficiency_transform(base);
  for (int i = 0; i < 20; ++i) {
    const double t = std::pow(10.0, -3.0 + 6.0 * i / 19.0);
    if (nec(t) != 41844600.0 * std::log1p(8.0 * t)) ++inexact;
    if (suf(t) != 41846650.0 * std::log1p(32768.0 * t)) ++inexact;
  }

  r.pass = floor_violations == 0 && unguarded == 0 && bound_violations == 0 && bound_pairs == 200 && inexact == 0;
  r.summary = strf("%zu/%zu gauges accepted, %zu below the floor, %zu unguarded transforms; k <= 7c^3 j on %zu pairs, "
                   "%zu violations (worst ratio %.3g); %zu inexact transform values",
                   accepted, cands.size(), floor_violations, unguarded, bound_pairs, bound_violations, worst_ratio,
                   inexact);
  r.metrics = {{"accepted", double(accepted)},   {"floor_violations", double(floor_violations)},
               {"bound_pairs", double(bound_pairs)}, {"bound_violations", double(bound_violations)},
               {"worst_ratio", worst_ratio},       {"inexact", double(inexact)}};
  return r;
}

// 10. Threshold and sphere-exit sequences across a puncture.
CriterionResult crossing_sequences(std::uint64_t seed) {
  auto r = make(10, "crossing sequences");
  const DomainSpec big = DomainSpec::ball(Point{0, 0}, 10.0);
  Rng rng = Rng::child(seed, 10);
  std::size_t seq_fail = 0, clearance_checks = 0, clearance_fail = 0, legs = 0, leg_violations = 0, exit_fail = 0;
  for (int it = 0; it < 50; ++it) {
    const Point q{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const auto p = validate_punctures(big, PunctureSet({q}));
    if (p.validated() != Validation::pass) {
      ++seq_fail;
      continue;
    }
    const Point u = rng.direction(2);
    const double dq = big.base_distance(q);
    const Point a = q - u * (0.3 * dq), b = q + u * (0.3 * dq) + Point{0, rng.uniform(-1e-3, 1e-3)};
    const auto seq = threshold_sequence(big, p, Arc::segment(a, b));
    if (!seq.terminated || seq.points.size() % 2 == 0 ||
        static_cast<double>(seq.points.size()) >= seq.count_bound) {
      ++seq_fail;
    }
    for (std::size_t j = 1; j < seq.points.size(); j += 2) {
      ++clearance_checks;
      if (seq.points[j].d_punctured < seq.points[j].d_base / 66.0) ++clearance_fail;
    }

    const Point w0 = base_shift(big, p, a).w;
    const Point y = q + rng.direction(2) * (dq * rng.uniform(1e-3, 5e-3));
    try {
      const auto c4 = claim4_sequence(big, p, w0, y);
      legs += c4.legs.size();
      leg_violations += c4.violations;
      if (!c4.depth_ok) ++exit_fail;
    } catch (const BudgetExhausted&) {
      ++exit_fail;
    }
  }
  r.pass = seq_fail == 0 && clearance_fail == 0 && clearance_checks > 0 && leg_violations == 0 && exit_fail == 0;
  r.summary = strf("50 scenarios, %zu sequence failures, %zu/%zu clearance failures; %zu sphere-exit legs, %zu "
                   "violations, %zu depth failures",
                   seq_fail, clearance_fail, clearance_checks, legs, leg_violations, exit_fail);
  r.metrics = {{"sequence_failures", double(seq_fail)}, {"clearance_checks", double(clearance_checks)},
               {"clearance_failures", double(clearance_fail)}, {"legs", double(legs)},
               {"leg_violations", double(leg_violations)}, {"exit_failures", double(exit_fail)}};
  return r;
}

}  // namespace

double log_polar_lattice_distance(double x1, double x2, double y1, double y2, double h, int stencil) {
  const double ux = std::log(std::hypot(x1, x2)), uy = std::log(std::hypot(y1, y2));
  double dth = std::atan2(y2, y1) - std::atan2(x2, x1);
  dth = std::fmod(dth + 4.0 * M_PI, 2.0 * M_PI);

  // Cylinder lattice with x at node (ix, 0).
  const int nth = std::max(8, static_cast<int>(std::lround(2.0 * M_PI / h)));
  const double ht = 2.0 * M_PI / nth;
  const double margin = 0.5 + 2.0 * stencil * h;
  const int below = static_cast<int>(std::ceil((ux - std::min(ux, uy) + margin) / h));
  const int nu = below + static_cast<int>(std::ceil((std::max(ux, uy) - ux + margin) / h)) + 1;
  const double u0 = ux - below * h;

  struct Move {
    int a, b;
    double w;
  };
  std::vector<Move> moves;
  for (int a = -stencil; a <= stencil; ++a) {
    for (int b = -stencil; b <= stencil; ++b) {
      if ((a || b) && std::gcd(a, b) == 1) moves.push_back({a, b, std::hypot(a * h, b * ht)});
    }
  }

  const std::size_t n = static_cast<std::size_t>(nu) * nth;
  std::vector<double> dist(n, kInfinity);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const std::size_t src = static_cast<std::size_t>(below) * nth;
  dist[src] = 0.0;
  pq.push({0.0, src});
  while (!pq.empty()) {
    const auto [dv, v] = pq.top();
    pq.pop();
    if (dv > dist[v]) continue;
    const int i = static_cast<int>(v / nth), j = static_cast<int>(v % nth);
    for (const Move& m : moves) {
      const int ii = i + m.a;
      if (ii < 0 || ii >= nu) continue;
      const int jj = ((j + m.b) % nth + nth) % nth;
      const std::size_t w = static_cast<std::size_t>(ii) * nth + jj;
      const double nd = dv + m.w;
      if (nd < dist[w]) {
        dist[w] = nd;
        pq.push({nd, w});
      }
    }
  }

  // Flat finish from the lattice nodes around y.
  const int iy = static_cast<int>(std::floor((uy - u0) / h));
  const int jy = static_cast<int>(std::floor(dth / ht));
  double best = kInfinity;
  for (int di = -1; di <= 2; ++di) {
    for (int dj = -1; dj <= 2; ++dj) {
      const int i = iy + di;
      if (i < 0 || i >= nu) continue;
      const int j = ((jy + dj) % nth + nth) % nth;
      double dt = std::fabs(dth - j * ht);
      dt = std::min(dt, 2.0 * M_PI - dt);
      const double flat = std::hypot(uy - (u0 + i * h), dt);
      best = std::min(best, dist[static_cast<std::size_t>(i) * nth + j] + flat);
    }
  }
  return best;
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  const Timer timer;
  CriterionResult r;
  switch (id) {
    case 1: r = half_space_oracle(seed); break;
    case 2: r = punctured_space_oracle(seed); break;
    case 3: r = inequality_chain(seed); break;
    case 4: r = short_segment(seed); break;
    case 5: r = one_puncture_per_ball(seed); break;
    case 6: r = uniform_arc_bounds(seed); break;
    case 7: r = repair_soundness(seed); break;
    case 8: r = john_round_trip(seed); break;
    case 9: r = psi_machinery(seed); break;
    case 10: r = crossing_sequences(seed); break;
    default: throw InvalidArgument("no acceptance criterion " + std::to_string(id));
  }
  r.seconds = timer.seconds();
  if (r.time_limit > 0.0 && r.seconds > r.time_limit) {
    r.pass = false;
    r.summary += strf("; over the %.0f s limit", r.time_limit);
  }
  return r;
}

bool AcceptanceReport::all_pass() const noexcept {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return !results.empty();
}

std::string AcceptanceReport::digest() const {
  std::string bytes = strf("seed %llu\n", static_cast<unsigned long long>(seed));
  for (const auto& r : results) {
    if (r.id == 11) continue;
    bytes += strf("%d %d ", r.id, r.pass ? 1 : 0) + r.summary + "\n";
    for (const auto& [k, v] : r.metrics) bytes += k + strf("=%.17g\n", v);
  }
  return hex_digest(bytes);
}

std::string AcceptanceReport::to_json() const {
  nlohmann::json doc;
  doc["seed"] = seed;
  doc["all_pass"] = all_pass();
  doc["digest"] = digest();
  doc["criteria"] = nlohmann::json::array();
  for (const auto& r : results) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    doc["criteria"].push_back({{"id", r.id},
                               {"title", r.title},
                               {"pass", r.pass},
                               {"summary", r.summary},
                               {"metrics", m},
                               {"seconds", r.seconds},
                               {"time_limit", r.time_limit}});
  }
  return doc.dump(2) + "\n";
}

AcceptanceReport run_acceptance(std::uint64_t seed, std::vector<int> criteria) {
  if (criteria.empty()) criteria = parse_suite("all");
  AcceptanceReport rep;
  rep.seed = seed;
  bool determinism = false;
  for (int id : criteria) {
    if (id == 11) {
      determinism = true;
      continue;
    }
    rep.results.push_back(run_criterion(id, seed));
  }
  if (determinism) {
    const Timer timer;
    auto r = make(11, "determinism");
    AcceptanceReport first = rep, second;
    second.seed = seed;
    // The digest covers criteria 1-10 whether or not they were requested.
    for (int id = 1; id <= 10; ++id) {
      bool have = false;
      for (const auto& c : rep.results) have = have || c.id == id;
      if (!have) first.results.push_back(run_criterion(id, seed));
      second.results.push_back(run_criterion(id, seed));
    }
    std::sort(first.results.begin(), first.results.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    const std::string d1 = first.digest(), d2 = second.digest();
    r.pass = d1 == d2;
    r.summary = "digests " + d1 + (r.pass ? " == " : " != ") + d2;
    r.seconds = timer.seconds();
    rep.results.push_back(r);
  }
  return rep;
}

std::vector<int> parse_suite(const std::string& suite) {
  if (suite == "all") {
    std::vector<int> all(11);
    std::iota(all.begin(), all.end(), 1);
    return all;
  }
  std::vector<int> out;
  std::stringstream ss(suite);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || id < 1 || id > 11) throw InvalidArgument("bad acceptance suite entry \"" + item + "\"");
    out.push_back(id);
  }
  if (out.empty()) throw InvalidArgument("empty acceptance suite");
  return out;
}

std::string format_result_line(const CriterionResult& r) {
  return strf("criterion %2d %s  %s: ", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str()) + r.summary +
         strf("  (%.1f s)", r.seconds);
}

}  // namespace qhgeo
