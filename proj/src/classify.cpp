#include "qhgeo/classify.hpp"

#include <algorithm>
#include <cmath>

#include "qhgeo/constants.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/rng.hpp"
#include "qhgeo/uniform_arcs.hpp"

namespace qhgeo {

namespace {

std::vector<double> cone_params(const Arc& a, std::size_t samples) {
  auto params = a.sample_params(samples);
  params.push_back(0.5 * a.length());
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  return params;
}

double window_extent(const DomainSpec& d) {
  const auto [lo, hi] = d.sampling_window();
  double e = 0.0;
  for (std::size_t i = 0; i < d.dim(); ++i) e = std::max(e, hi[i] - lo[i]);
  return e;
}

// A ball inside the half-space {x_n > 0} holding x and y at half their depth or
// better: centre above the midpoint at height R, R doubled until it fits.
std::optional<Ball> half_space_ball(const DomainSpec& d, const Point& x, const Point& y) {
  const std::size_t n = d.dim() - 1;
  Point c = lerp(x, y, 0.5);
  double R = std::max(x[n], y[n]);
  for (int it = 0; it < 80; ++it, R *= 2.0) {
    c[n] = R;
    const double dx = R - d.norm().distance(x, c), dy = R - d.norm().distance(y, c);
    if (dx >= 0.5 * x[n] && dy >= 0.5 * y[n]) return Ball{c, R};
  }
  return std::nullopt;
}

std::optional<Arc> bent_candidate(const DomainSpec& d, const Point& x, const Point& y) {
  if (const auto* b = std::get_if<Ball>(&d.shape())) {
    const auto& pts = d.punctures().points();
    if (pts.size() > 1) return std::nullopt;
    return ball_arc_avoiding(b->center, b->radius, pts, x, y, d.norm()).arc;
  }
  if (std::holds_alternative<HalfSpace>(d.shape()) && !d.has_punctures()) {
    if (auto ball = half_space_ball(d, x, y)) return ball_arc(ball->center, ball->radius, x, y, d.norm()).arc;
  }
  return std::nullopt;
}

}  // namespace

ConeReport cone_constant(const DistanceFn& dist, const Arc& a, std::size_t samples) {
  ConeReport rep{a, {a.start(), a.end()}, 0.0, a.start(), 0};
  const double len = a.length();
  const auto params = cone_params(a, samples);
  rep.sample_count = params.size();
  for (double s : params) {
    const Point z = a.point_at(s);
    const double dz = dist(z);
    if (!(dz > 0.0)) throw MembershipError("arc leaves the domain at " + z.to_string());
    const double v = std::min(s, len - s) / dz;
    if (v > rep.cone_constant) {
      rep.cone_constant = v;
      rep.argmax_point = z;
    }
  }
  return rep;
}

ConeReport cone_constant(const DomainSpec& d, const Arc& a, std::size_t samples) {
  return cone_constant([&](const Point& z) { return d.raw_distance(z); }, a, samples);
}

double diam_cone_constant(const DomainSpec& d, const Arc& a, std::size_t samples) {
  const double len = a.length();
  double best = 0.0;
  for (double s : cone_params(a, samples)) {
    const Point z = a.point_at(s);
    const double dz = d.raw_distance(z);
    if (!(dz > 0.0)) throw MembershipError("arc leaves the domain at " + z.to_string());
    const double d1 = s > 0.0 ? a.subarc(0.0, s).diameter() : 0.0;
    const double d2 = s < len ? a.subarc(s, len).diameter() : 0.0;
    best = std::max(best, std::min(d1, d2) / dz);
  }
  return best;
}

UniformReport uniform_constant(const DomainSpec& d, const Arc& a, std::size_t samples) {
  UniformReport rep;
  rep.cone_constant = cone_constant(d, a, samples).cone_constant;
  const double chord = a.norm().distance(a.start(), a.end());
  if (chord == 0.0) {
    rep.degenerate = true;
    rep.value = rep.cone_constant;
    return rep;
  }
  rep.length_ratio = a.length() / chord;
  rep.value = std::max(rep.cone_constant, rep.length_ratio);
  return rep;
}

UniformReport inner_uniform_constant(const DomainSpec& d, const Arc& a, double rel_tol, std::size_t samples) {
  UniformReport rep;
  rep.cone_constant = cone_constant(d, a, samples).cone_constant;
  if (a.start() == a.end()) {
    rep.degenerate = true;
    rep.value = rep.cone_constant;
    return rep;
  }
  const auto lambda = inner_distance(d, a.start(), a.end(), rel_tol);
  rep.length_ratio = a.length() / lambda.upper;
  rep.value = std::max(rep.cone_constant, rep.length_ratio);
  return rep;
}

JohnReport john_estimate(const DomainSpec& d, std::size_t pair_count, std::uint64_t seed, const JohnOptions& opts) {
  JohnReport rep;
  rep.candidate_family = {"straight", "inner-witness", "bent-ball-arc"};
  if (opts.use_neargeodesic) rep.candidate_family.insert(rep.candidate_family.begin() + 1, "neargeodesic");
  rep.note =
      "per pair: smallest cone constant among the candidates (an upper estimate of the pair's optimum); "
      "estimate: max over pairs (a lower estimate of the domain's John constant)";
  const double clearance = opts.min_clearance * window_extent(d);
  const auto xs = sample_interior(d, pair_count, seed, clearance);
  const auto ys = sample_interior(d, pair_count, seed ^ 0x9e3779b97f4a7c15ull, clearance);

  KOptions kopts = opts.kopts;
  kopts.exec = Exec::serial;
  struct PairResult {
    double value = kInfinity;
    std::string winner;
  };
  const auto results = parallel_map<PairResult>(
      pair_count,
      [&](std::size_t i) {
        const Point &x = xs[i], &y = ys[i];
        PairResult best;
        auto consider = [&](const std::string& name, const Arc& arc) {
          try {
            const double c = cone_constant(d, arc, opts.samples).cone_constant;
            if (c < best.value) best = {c, name};
          } catch (const MembershipError&) {
          }
        };
        consider("straight", Arc::segment(x, y, d.norm()));
        if (opts.use_neargeodesic) {
          try {
            consider("neargeodesic", neargeodesic(d, x, y, opts.neargeodesic_c, kopts).arc);
          } catch (const BudgetExhausted& e) {
            consider("neargeodesic", e.best().arc);
          }
        }
        if (auto w = inner_distance(d, x, y).witness) consider("inner-witness", *w);
        if (auto bent = bent_candidate(d, x, y)) consider("bent-ball-arc", *bent);
        return best;
      },
      opts.exec);

  for (std::size_t i = 0; i < pair_count; ++i) {
    rep.pairs.emplace_back(xs[i], ys[i]);
    rep.per_pair.push_back(results[i].value);
    rep.winner.push_back(results[i].winner);
    rep.estimate = std::max(rep.estimate, results[i].value);
  }
  return rep;
}

const char* to_string(SeparationStatus s) noexcept {
  switch (s) {
    case SeparationStatus::pass:
      return "pass";
    case SeparationStatus::fail:
      return "fail";
    case SeparationStatus::indeterminate:
      return "indeterminate";
  }
  return "?";
}

SeparationReport separation_check(const DomainSpec& d, const PunctureSet& p, const KOptions& opts) {
  const DomainSpec base = d.base();
  SeparationReport rep;
  rep.b = p.b();
  const auto& pts = p.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      SeparationPair pr{i, j};
      // Order the endpoints canonically so the outcome does not depend on listing order.
      const bool swap = std::lexicographical_compare(pts[j].coords().begin(), pts[j].coords().end(),
                                                     pts[i].coords().begin(), pts[i].coords().end());
      const Point& x = swap ? pts[j] : pts[i];
      const Point& y = swap ? pts[i] : pts[j];
      pr.lower = analytic_lower_bound(base, x, y);
      pr.upper = kInfinity;
      if (pr.lower < rep.b) {
        auto br = k_distance(base, x, y, 0.01, opts);
        if (br.lower < rep.b && br.upper >= rep.b) {
          KOptions more = opts;
          more.max_rounds *= 2;
          const double gap = std::abs(rep.b - br.midpoint()) / rep.b;
          br = k_distance(base, x, y, std::max(1e-4, 0.25 * gap), more);
        }
        pr.lower = std::max(pr.lower, br.lower);
        pr.upper = br.upper;
      }
      if (pr.lower >= rep.b) {
        pr.status = SeparationStatus::pass;
      } else if (pr.upper < rep.b) {
        pr.status = SeparationStatus::fail;
      } else {
        pr.status = SeparationStatus::indeterminate;
      }
      if (pr.lower < rep.worst_lower) {
        rep.worst_lower = pr.lower;
        rep.worst_pair = rep.pairs.size();
      }
      rep.pairs.push_back(pr);
    }
  }
  for (const auto& pr : rep.pairs) {
    if (pr.status == SeparationStatus::fail) {
      rep.status = SeparationStatus::fail;
    } else if (pr.status == SeparationStatus::indeterminate && rep.status == SeparationStatus::pass) {
      rep.status = SeparationStatus::indeterminate;
    }
  }
  return rep;
}

PunctureSet validate_punctures(const DomainSpec& d, const PunctureSet& p, const KOptions& opts) {
  switch (separation_check(d, p, opts).status) {
    case SeparationStatus::pass:
      return p.with_validation(Validation::pass);
    case SeparationStatus::fail:
      return p.with_validation(Validation::fail);
    default:
      return p.with_validation(Validation::unchecked);
  }
}

int ball_puncture_count(const DomainSpec& g, const Point& w) {
  if (g.punctures().validated() != Validation::pass) {
    throw PreconditionError("puncture set has not passed the separation check");
  }
  const double r = g.base_distance(w) / 6.0;
  int count = 0;
  for (const auto& p : g.punctures().points()) {
    if (g.norm().distance(p, w) < r) ++count;
  }
  return count;
}

ConeFloorReport cone_floor_check(const DomainSpec& d, const Arc& a, double c3, std::size_t samples) {
  ConeFloorReport rep;
  rep.measured_cone = cone_constant(d, a, samples).cone_constant;
  if (rep.measured_cone > c3 * (1.0 + 1e-9)) {
    throw PreconditionError("arc is not a " + std::to_string(c3) + "-cone arc: measured cone constant " +
                            std::to_string(rep.measured_cone));
  }
  const double len = a.length();
  const double dx = d.boundary_distance(a.start()), dy = d.boundary_distance(a.end());
  rep.worst_point = a.start();
  for (double s : cone_params(a, samples)) {
    const Point w = a.point_at(s);
    const double dw = d.boundary_distance(w);
    const double plain = std::min(dx, dy) / (2.0 * c3);
    const double halves = (s <= len - s ? dx : dy) / (2.0 * c3);
    const double margin = dw - std::max(plain, halves);
    ++rep.checks;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.worst_point = w;
    }
  }
  rep.pass = rep.worst_margin >= -1e-9;
  return rep;
}

PsiFunction::PsiFunction(std::function<double(double)> f, std::string description, std::map<std::string, double> params)
    : f_(std::move(f)), description_(std::move(description)), params_(std::move(params)) {}

PsiFunction PsiFunction::log1p(double scale) {
  return PsiFunction([scale](double t) { return scale * std::log1p(t); }, "scale*log(1+t)", {{"scale", scale}});
}

PsiFunction PsiFunction::linear(double a) {
  return PsiFunction([a](double t) { return a * t; }, "a*t", {{"a", a}});
}

PsiFunction PsiFunction::expm1() {
  return PsiFunction([](double t) { return std::expm1(t); }, "exp(t)-1");
}

std::vector<double> psi_test_grid() {
  std::vector<double> g{0.0};
  for (int k = -12; k <= 24; ++k) g.push_back(std::pow(10.0, k / 4.0));
  return g;
}

bool psi_is_gauge(const PsiFunction& psi, const std::vector<double>& grid) {
  double prev = -kInfinity;
  double prev_t = -kInfinity;
  for (double t : grid) {
    const double v = psi(t);
    if (!std::isfinite(v)) return false;
    if (t == 0.0 && v != 0.0) return false;
    if (t > prev_t && !(v > prev)) return false;
    prev = v;
    prev_t = t;
  }
  return true;
}

bool psi_admissible(const PsiFunction& psi, const std::vector<double>& grid) {
  for (double t : grid) {
    if (!(psi(t) >= std::log1p(t) * (1.0 - 1e-12))) return false;
  }
  return true;
}

PsiMarginReport psi_john_margin(const DomainSpec& d, const Point& center, const PsiFunction& psi,
                                const std::vector<Point>& samples, const KOptions& opts) {
  PsiMarginReport rep;
  rep.samples = samples.size();
  rep.argmax = center;
  if (samples.empty()) return rep;
  KOptions inner = opts;
  inner.exec = Exec::serial;
  const double dc = d.boundary_distance(center);
  const auto excess = parallel_map<double>(
      samples.size(),
      [&](std::size_t i) {
        const Point& y = samples[i];
        if (y == center) return -psi(0.0);
        const double t = d.norm().distance(center, y) / std::min(dc, d.boundary_distance(y));
        return k_distance(d, center, y, 0.05, inner).upper - psi(t);
      },
      opts.exec);
  rep.worst_excess = -kInfinity;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (excess[i] > rep.worst_excess) {
      rep.worst_excess = excess[i];
      rep.argmax = samples[i];
    }
  }
  return rep;
}

PsiMarginReport psi_john_margin(const DomainSpec& d, const Point& center, const PsiFunction& psi,
                                std::size_t sample_count, std::uint64_t seed, const KOptions& opts) {
  const auto samples = sample_interior(d, sample_count, seed, 1e-3 * window_extent(d));
  return psi_john_margin(d, center, psi, samples, opts);
}

double k_upper_estimate(const DomainSpec& d, const Point& x, const Point& y, const std::vector<Arc>& candidates) {
  if (x == y) return 0.0;
  std::optional<Arc> best_arc;
  double best = kInfinity;
  auto consider = [&](const Arc& a) {
    try {
      const double len = qh_arc_length(d, a);
      if (len < best) {
        best = len;
        best_arc = a;
      }
    } catch (const MembershipError&) {
    }
  };
  consider(Arc::segment(x, y, d.norm()));
  for (const auto& a : candidates) consider(a);
  if (best_arc) best = std::min(best, qh_arc_length(d, refine_arc(d, *best_arc, 2, 1e-3)));
  return best;
}

namespace {

void require_subdomain(const DomainSpec& dD, const DomainSpec& d1) {
  if (d1.dim() != dD.dim() || !(d1.norm() == dD.norm())) {
    throw InvalidArgument("subdomain must share dimension and norm with the ambient domain");
  }
  const auto& norm = dD.norm();
  if (const auto* b = std::get_if<Ball>(&d1.shape())) {
    if (dD.signed_base_distance(b->center) < b->radius) throw InvalidArgument("subdomain ball leaves the domain");
    for (const auto& p : dD.punctures().points()) {
      if (norm.distance(p, b->center) < b->radius) throw InvalidArgument("subdomain ball contains a puncture");
    }
    return;
  }
  if (const auto* bx = std::get_if<Box>(&d1.shape())) {
    const std::size_t n = d1.dim();
    const std::size_t corners = std::size_t{1} << n;
    auto corner = [&](std::size_t mask) {
      Point c(n);
      for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1 ? bx->hi[i] : bx->lo[i];
      return c;
    };
    for (std::size_t m = 0; m < corners; ++m) {
      if (dD.signed_base_distance(corner(m)) < 0.0) throw InvalidArgument("subdomain box leaves the domain");
      for (std::size_t i = 0; i < n; ++i) {
        if ((m >> i) & 1) continue;
        if (dD.segment_base_clearance(corner(m), corner(m | (std::size_t{1} << i))) < 0.0) {
          throw InvalidArgument("subdomain box leaves the domain");
        }
      }
    }
    for (const auto& p : dD.punctures().points()) {
      bool inside = true;
      for (std::size_t i = 0; i < n; ++i) inside = inside && p[i] >= bx->lo[i] && p[i] <= bx->hi[i];
      if (inside) throw InvalidArgument("subdomain box contains a puncture");
    }
    return;
  }
  throw InvalidArgument("subdomain containment is checked for balls and boxes only");
}

}  // namespace

BoundCheckReport uniform_subdomain_bound_check(const DomainSpec& dD, const DomainSpec& d1, double c,
                                               std::size_t pair_count, std::uint64_t seed) {
  require_subdomain(dD, d1);
  BoundCheckReport rep;
  const double factor = 7.0 * c * c * c;
  const double clearance = 1e-3 * window_extent(d1);
  const auto xs = sample_interior(d1, pair_count, seed, clearance);
  const auto ys = sample_interior(d1, pair_count, seed ^ 0x9e3779b97f4a7c15ull, clearance);
  const auto* ball = std::get_if<Ball>(&d1.shape());
  for (std::size_t i = 0; i < pair_count; ++i) {
    std::vector<Arc> cands;
    if (ball) cands.push_back(ball_arc(ball->center, ball->radius, xs[i], ys[i], d1.norm()).arc);
    const double k = k_upper_estimate(dD, xs[i], ys[i], cands);
    const double bound = factor * j_metric(dD, xs[i], ys[i]);
    ++rep.checked;
    if (k > bound + 1e-9) ++rep.violations;
    if (bound > 0.0) rep.worst_ratio = std::max(rep.worst_ratio, k / bound);
  }
  return rep;
}

std::vector<std::pair<Point, Point>> cor4_2_pairs(const DomainSpec& g, std::size_t count, std::uint64_t seed) {
  const auto& pts = g.punctures().points();
  if (pts.empty()) return {};
  const Norm& norm = g.norm();
  Rng rng(seed);
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t attempt = 0; out.size() < count && attempt < 100 * count + 100; ++attempt) {
    const Point& q = pts[rng.index(pts.size())];
    Point u = rng.direction(g.dim());
    u = u / norm(u);
    // d_D(q + t u) - 128 t decreases in t and changes sign on [0, d_D(q)/127].
    double lo = 0.0, hi = g.signed_base_distance(q) / 127.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g.signed_base_distance(q + u * mid) - 128.0 * mid > 0.0 ? lo : hi) = mid;
    }
    const Point x = q + u * (0.5 * (lo + hi));
    if (!(g.raw_distance(x) > 0.0)) continue;
    const double dd = g.signed_base_distance(x);
    Point v = rng.direction(g.dim());
    v = v / norm(v);
    const double r = dd / 32.0 * std::pow(rng.uniform(), 1.0 / static_cast<double>(g.dim()));
    const Point y = x + v * r;
    if (!(g.raw_distance(y) > 0.0)) continue;
    out.emplace_back(x, y);
  }
  return out;
}

BoundCheckReport cor4_2_check(const DomainSpec& g, const std::vector<std::pair<Point, Point>>& pairs, double tol) {
  BoundCheckReport rep;
  const double mu = ledger::mu().to_double();
  const Norm& norm = g.norm();
  for (const auto& [x, y] : pairs) {
    const double dd = g.base_distance(x);
    const double dg = g.boundary_distance(x);
    const bool threshold = std::abs(dd / dg - 128.0) <= 128.0 * tol;
    if (!threshold || norm.distance(x, y) > dd / 32.0 * (1.0 + 1e-12) || !g.contains(y)) {
      ++rep.excluded;
      continue;
    }
    ++rep.checked;
    if (x == y) continue;
    std::vector<Arc> cands;
    std::vector<Point> near;
    for (const auto& p : g.punctures().points()) {
      if (norm.distance(p, x) < dd / 6.0) near.push_back(p);
    }
    try {
      cands.push_back(ball_arc_avoiding(x, dd / 6.0, near, x, y, norm).arc);
    } catch (const PreconditionError&) {
    }
    const double k = k_upper_estimate(g, x, y, cands);
    const double bound = mu * j_metric(g, x, y);
    if (k > bound + 1e-9) ++rep.violations;
    rep.worst_ratio = std::max(rep.worst_ratio, k / bound);
  }
  return rep;
}

bool psi_class_check(const PsiFunction& psi, double c, double lambda1, double lambda2, const std::vector<double>& grid) {
  if (!(c > 0.0) || !(lambda1 > 0.0) || !(lambda2 > 0.0)) throw InvalidArgument("c and lambdas must be positive");
  bool ok = true;
  for (double t : grid) {
    if (!(t > 0.0)) continue;
    const double base = psi(t);
    if (base == 0.0) throw InvalidArgument("psi vanishes at t = " + std::to_string(t) + "; ratio undefined");
    const double ratio = psi(c * t) / base;
    if (!std::isfinite(ratio) || ratio < lambda1 * (1.0 - 1e-12) || ratio > lambda2 * (1.0 + 1e-12)) ok = false;
  }
  return ok;
}

}  // namespace qhgeo
