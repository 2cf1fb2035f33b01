#include "qhgeo/repair.hpp"

#include <algorithm>
#include <cmath>

#include "arc_probe.hpp"
#include "qhgeo/constants.hpp"
#include "qhgeo/errors.hpp"
#include "qhgeo/metrics.hpp"
#include "qhgeo/rng.hpp"
#include "qhgeo/uniform_arcs.hpp"

namespace qhgeo {

namespace {

constexpr double kSphere = 1.0 / 32.0;
constexpr std::size_t kMaxSequence = 100000;

// Depth probes along one arc, parameterized by arclength. Every search is a
// first_nonnegative walk with tolerance 1e-6 of the arc length.
class Walker {
 public:
  Walker(const DomainSpec& g, const Arc& a) : g_(g), a_(a), norm_(g.norm()) {
    tol_ = std::max(1e-6 * a.length(), 1e-300);
  }

  const Arc& arc() const noexcept { return a_; }
  double length() const noexcept { return a_.length(); }
  Point at(double s) const { return a_.point_at(s); }

  double d_base(const Point& z) const { return g_.signed_base_distance(z); }
  double d_punct(const Point& z) const {
    return std::max(0.0, std::min(g_.signed_base_distance(z), g_.puncture_distance(z)));
  }

  // First s walking from `from` to `to` with d_D >= t d_G.
  std::optional<double> first_hit(double t, double from, double to) const {
    auto f = [&](double s) {
      const Point z = at(s);
      const double dd = g_.signed_base_distance(z);
      return dd - t * std::min(dd, g_.puncture_distance(z));
    };
    return probe::first_nonnegative(f, from, to, 1.0 + t, tol_, tol_);
  }

  // Last exit from the closed ball B(c, r) within [from, to]; `from` lies in the
  // ball. Returns the outer end of the final bracket, so |a(s) - c| >= r
  // unless the exit is `to` itself.
  double last_exit(const Point& c, double r, double from, double to) const {
    auto f = [&](double s) { return r - norm_.distance(at(s), c); };
    const double inside = probe::first_nonnegative(f, to, from, 1.0, tol_, tol_).value_or(from);
    const double outside = std::min(inside + tol_, to);
    return f(outside) < 0.0 ? outside : inside;
  }

  std::optional<double> first_entry(const Point& c, double r, double from, double to) const {
    auto f = [&](double s) { return r - norm_.distance(at(s), c); };
    return probe::first_nonnegative(f, from, to, 1.0, tol_, tol_);
  }

  TaggedPoint tag(const Point& z, double s, std::string role) const {
    return TaggedPoint{z, s, std::move(role), d_base(z), d_punct(z)};
  }

  // A sequence point must avoid the punctures; nudge forward once if it does not.
  TaggedPoint probe_tag(double s, std::string role) const {
    TaggedPoint t = tag(at(s), s, role);
    if (t.d_punctured > 0.0) return t;
    const double s2 = std::min(length(), s + tol_);
    t = tag(at(s2), s2, std::move(role));
    if (t.d_punctured > 0.0) return t;
    throw PreconditionError("arc meets a puncture at a probe point");
  }

  double tol() const noexcept { return tol_; }
  const Norm& norm() const noexcept { return norm_; }

 private:
  const DomainSpec& g_;
  const Arc& a_;
  Norm norm_;
  double tol_;
};

enum class Mode { target_ball, midpoint, target_point };

struct Target {
  Mode mode;
  double s;
  Point point;
  double radius = 0.0;
};

struct Walk {
  std::vector<TaggedPoint> points;
  // "union", "sphere", "exit", "midpoint", "target_in_ball", "target"
  std::string terminal;
};

// Alternating threshold points (even positions) and sphere exits (odd
// positions) from `first` toward the target, with the termination rule of the mode.
Walk walk_sequence(const Walker& w, TaggedPoint first, const Target& tg, double outer, double frac) {
  Walk out;
  out.points.push_back(std::move(first));
  const double len = w.length();
  for (std::size_t it = 0; it < kMaxSequence; ++it) {
    const TaggedPoint y = out.points.back();
    const double rho = frac * y.d_base;
    const double gap = w.norm().distance(y.point, tg.point);
    switch (tg.mode) {
      case Mode::target_ball: {
        if (gap < rho + tg.radius) {
          out.terminal = "union";
          return out;
        }
        const double se = w.last_exit(y.point, rho, y.s, tg.s);
        out.points.push_back(w.probe_tag(se, "sphere_exit"));
        const double entry = w.first_entry(tg.point, tg.radius, se, tg.s).value_or(tg.s);
        const auto hit = w.first_hit(outer, se, entry);
        if (!hit) {
          out.points.push_back(w.probe_tag(entry, "terminal_sphere"));
          out.terminal = "sphere";
          return out;
        }
        out.points.push_back(w.probe_tag(*hit, "threshold128"));
        break;
      }
      case Mode::midpoint: {
        if (gap <= rho) {
          out.points.push_back(w.probe_tag(w.last_exit(y.point, rho, y.s, len), "sphere_exit"));
          out.terminal = "exit";
          return out;
        }
        const double se = w.last_exit(y.point, rho, y.s, tg.s);
        out.points.push_back(w.probe_tag(se, "sphere_exit"));
        const auto hit = w.first_hit(outer, se, tg.s);
        if (!hit) {
          out.points.push_back(w.tag(tg.point, tg.s, "midpoint"));
          out.terminal = "midpoint";
          return out;
        }
        out.points.push_back(w.probe_tag(*hit, "threshold128"));
        break;
      }
      case Mode::target_point: {
        if (gap <= rho) {
          out.points.push_back(w.tag(tg.point, tg.s, "target"));
          out.terminal = "target_in_ball";
          return out;
        }
        const double se = w.last_exit(y.point, rho, y.s, tg.s);
        out.points.push_back(w.probe_tag(se, "sphere_exit"));
        const auto hit = w.first_hit(outer, se, tg.s);
        if (!hit) {
          out.points.push_back(w.tag(tg.point, tg.s, "target"));
          out.terminal = "target";
          return out;
        }
        out.points.push_back(w.probe_tag(*hit, "threshold128"));
        break;
      }
    }
  }
  throw PreconditionError("threshold sequence did not terminate");
}

class Builder {
 public:
  void add(const Arc& a) {
    for (const auto& p : a.vertices()) add(p);
  }
  void add(const Point& p) {
    if (v_.empty() || !(v_.back() == p)) v_.push_back(p);
  }
  // gamma[s, t], optionally ending exactly at `end`.
  void add_sub(const Arc& a, double s, double t, const std::optional<Point>& end = std::nullopt) {
    if (t > s) add(a.subarc(s, t));
    if (end) {
      if (!v_.empty() && a.norm().distance(v_.back(), *end) <= 1e-12 * std::max(1.0, a.length())) v_.pop_back();
      add(*end);
    } else if (t <= s) {
      add(a.point_at(s));
    }
  }
  std::vector<Point> take() { return std::move(v_); }

 private:
  std::vector<Point> v_;
};

struct Context {
  const DomainSpec& g;
  const std::vector<Point>& punctures;
  Norm norm;
};

Arc ball_piece(const Context& c, const TaggedPoint& center, const Point& to) {
  return ball_arc_avoiding(center.point, center.d_base / 6.0, c.punctures, center.point, to, c.norm).arc;
}

// pts alternate: threshold -> exit by a ball arc, exit -> threshold along gamma.
void add_alternating(const Context& c, const Arc& a, const std::vector<TaggedPoint>& pts, Builder& b) {
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (k % 2 == 0) {
      b.add(ball_piece(c, pts[k], pts[k + 1].point));
    } else {
      b.add_sub(a, pts[k].s, pts[k + 1].s, pts[k + 1].point);
    }
  }
}

struct Construction {
  std::vector<Point> vertices;
  RepairCase kase = RepairCase::clean;
  std::string detail;
  std::vector<TaggedPoint> y, u, v;
};

Construction build_case2(const Context& c, const Walker& w, double s_w1) {
  const Arc& a = w.arc();
  const Point& z2 = a.end();
  const TaggedPoint w1 = w.tag(w.at(s_w1), s_w1, "w1");
  Construction out;
  Builder b;
  const auto hit = w.first_hit(64.0, 0.0, s_w1);
  if (!hit) {
    out.kase = RepairCase::case2a;
    b.add_sub(a, 0.0, s_w1);
    b.add(ball_piece(c, w1, z2));
    out.vertices = b.take();
    return out;
  }
  out.kase = RepairCase::case2b;
  const TaggedPoint y1 = w.probe_tag(*hit, *hit == 0.0 ? "start" : "threshold64");
  const Walk seq = walk_sequence(w, y1, Target{Mode::target_ball, s_w1, w1.point, kSphere * w1.d_base}, 128.0, kSphere);
  out.y = seq.points;
  out.detail = seq.points.size() == 1 ? "union" : "sequence";
  b.add_sub(a, 0.0, y1.s, y1.point);
  add_alternating(c, a, seq.points, b);
  const TaggedPoint& last = seq.points.back();
  if (seq.terminal == "union") {
    const Ball b1{last.point, last.d_base / 16.0}, b2{w1.point, w1.d_base / 16.0};
    b.add(two_ball_union_arc(b1, b2, PunctureSet(c.punctures), last.point, z2, c.norm).arc);
  } else {
    b.add(ball_arc_avoiding(w1.point, w1.d_base / 6.0, c.punctures, last.point, z2, c.norm).arc);
  }
  out.vertices = b.take();
  return out;
}

Construction build_case3(const Context& c, const Walker& w, const Walker& wr, double s0) {
  const Arc& a = w.arc();
  const Arc& ar = wr.arc();
  const double len = a.length();
  Construction out;
  out.kase = RepairCase::case3;

  Builder front;
  const auto hit = w.first_hit(64.0, 0.0, s0);
  const TaggedPoint u1 = w.probe_tag(hit.value_or(0.0), hit && *hit == 0.0 ? "start" : "threshold64");
  const Walk useq = walk_sequence(w, u1, Target{Mode::midpoint, s0, w.at(s0)}, 128.0, kSphere);
  out.u = useq.points;
  front.add_sub(a, 0.0, u1.s, u1.point);
  add_alternating(c, a, useq.points, front);
  const TaggedPoint& t = useq.points.back();

  Builder back;
  const double st = len - t.s;
  const auto vhit = wr.first_hit(64.0, 0.0, st);
  if (!vhit) {
    back.add_sub(ar, 0.0, st, t.point);
  } else {
    const TaggedPoint v1 = wr.probe_tag(*vhit, *vhit == 0.0 ? "start" : "threshold64");
    const Walk vseq = walk_sequence(wr, v1, Target{Mode::target_point, st, t.point}, 128.0, kSphere);
    out.v = vseq.points;
    back.add_sub(ar, 0.0, v1.s, v1.point);
    add_alternating(c, ar, vseq.points, back);
  }
  Builder all;
  for (const auto& p : front.take()) all.add(p);
  auto rear = back.take();
  for (auto it = rear.rbegin(); it != rear.rend(); ++it) all.add(*it);
  out.vertices = all.take();
  return out;
}

// First s in [0, to] with g(s) >= 0, g = d_D / 32 - max over `anchors` of |z - gamma(s)|.
std::optional<double> first_ball_cover(const Walker& w, const std::vector<Point>& anchors, double to) {
  auto f = [&](double s) {
    const Point z = w.at(s);
    double far = 0.0;
    for (const auto& q : anchors) far = std::max(far, w.norm().distance(z, q));
    return kSphere * w.d_base(z) - far;
  };
  return probe::first_nonnegative(f, 0.0, to, 1.0 + kSphere, w.tol(), w.tol());
}

Construction construct(const Context& c, const Arc& gamma) {
  const Walker w(c.g, gamma);
  const double len = gamma.length();
  const Point& z1 = gamma.start();
  const Point& z2 = gamma.end();
  Construction out;
  if (!w.first_hit(64.0, 0.0, len)) {
    out.vertices = gamma.vertices();
    return out;
  }

  if (const auto s = first_ball_cover(w, {z1, z2}, len)) {
    const TaggedPoint w0 = w.tag(w.at(*s), *s, "w0");
    out.kase = RepairCase::case1;
    out.vertices =
        ball_arc_avoiding(w0.point, w0.d_base / 6.0, c.punctures, z1, z2, c.norm).arc.vertices();
    return out;
  }

  const double s0 = 0.5 * len;
  const Arc rev = gamma.reversed();
  const Walker wr(c.g, rev);
  if (const auto s = first_ball_cover(w, {z2}, s0)) return build_case2(c, w, *s);
  if (const auto s = first_ball_cover(wr, {z1}, len - s0)) {
    out = build_case2(c, wr, *s);
    out.detail += out.detail.empty() ? "mirrored" : ",mirrored";
    std::reverse(out.vertices.begin(), out.vertices.end());
    return out;
  }
  if (w.first_hit(64.0, 0.0, s0)) return build_case3(c, w, wr, s0);
  out = build_case3(c, wr, w, len - s0);
  out.detail = "mirrored";
  std::reverse(out.vertices.begin(), out.vertices.end());
  return out;
}

DomainSpec punctured(const DomainSpec& d, const PunctureSet& p) { return with_punctures(d.base(), p); }

void require_validated(const PunctureSet& p) {
  if (!p.empty() && p.validated() != Validation::pass) {
    throw PreconditionError("puncture set must pass the separation check");
  }
}

bool is_puncture(const PunctureSet& p, const Point& z) {
  return std::find(p.points().begin(), p.points().end(), z) != p.points().end();
}

}  // namespace

const char* to_string(RepairCase c) noexcept {
  switch (c) {
    case RepairCase::clean:
      return "Case2a-degenerate";
    case RepairCase::case1:
      return "Case1";
    case RepairCase::case2a:
      return "Case2a";
    case RepairCase::case2b:
      return "Case2b";
    case RepairCase::case3:
      return "Case3";
  }
  return "unknown";
}

RepairReport repair_arc(const DomainSpec& d, const PunctureSet& p, const Arc& gamma, std::optional<double> c_hint) {
  require_validated(p);
  const DomainSpec g = punctured(d, p);
  const DomainSpec base = d.base();
  if (!(gamma.norm() == g.norm())) throw InvalidArgument("arc and domain use different norms");
  if (gamma.dim() != g.dim()) throw InvalidArgument("arc dimension does not match the domain");
  if (g.raw_distance(gamma.start()) <= 0.0 || g.raw_distance(gamma.end()) <= 0.0) {
    throw MembershipError("repair endpoints must lie in the punctured domain");
  }
  const auto& v = gamma.vertices();
  for (const auto& z : v) {
    if (base.signed_base_distance(z) <= 0.0) throw MembershipError("arc leaves the base domain");
  }
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (base.segment_base_clearance(v[i], v[i + 1]) <= 0.0) throw MembershipError("arc leaves the base domain");
  }

  const Context ctx{g, p.points(), g.norm()};
  Construction built = construct(ctx, gamma);

  RepairReport r;
  r.input_arc = gamma;
  r.output_arc = Arc(std::move(built.vertices), gamma.norm());
  r.case_taken = built.kase;
  r.detail = built.detail;
  r.mirrored = built.detail.find("mirrored") != std::string::npos;
  r.y_sequence = std::move(built.y);
  r.u_sequence = std::move(built.u);
  r.v_sequence = std::move(built.v);
  r.length_ratio = gamma.length() > 0.0 ? r.output_arc.length() / gamma.length() : 1.0;
  r.input_cone_constant = cone_constant(base, gamma).cone_constant;
  r.min_clearance = arc_clearance(g, r.output_arc);
  r.output_cone_constant = r.min_clearance > 0.0 ? cone_constant(g, r.output_arc).cone_constant : kInfinity;
  const double c = std::max(1.0, c_hint.value_or(r.input_cone_constant));
  r.cone_bound = ledger::repair_cone(c);
  const bool hint_applies = !c_hint || r.input_cone_constant <= *c_hint;
  r.bounds_ok = r.output_arc.start() == gamma.start() && r.output_arc.end() == gamma.end() &&
                r.min_clearance > 0.0 && r.length_ratio <= ledger::repair_length().to_double() &&
                (!hint_applies || r.output_cone_constant <= r.cone_bound);
  return r;
}

RepairReport repair_arc(const DomainSpec& g, const Arc& gamma, std::optional<double> c_hint) {
  return repair_arc(g, g.punctures(), gamma, c_hint);
}

ThresholdSequence threshold_sequence(const DomainSpec& d, const PunctureSet& p, const Arc& a, double inner_threshold,
                                     double outer_threshold, double sphere_frac) {
  require_validated(p);
  if (!(inner_threshold > 0.0 && outer_threshold >= inner_threshold && sphere_frac > 0.0 && sphere_frac < 1.0)) {
    throw InvalidArgument("thresholds must satisfy 0 < inner <= outer and 0 < sphere_frac < 1");
  }
  const DomainSpec g = punctured(d, p);
  ThresholdSequence out;
  out.qh_length = qh_arc_length(d.base(), a);
  out.count_bound = out.qh_length / std::log(33.0 / 32.0);
  const Walker w(g, a);
  const double len = a.length();
  const auto hit = w.first_hit(inner_threshold, 0.0, len);
  out.terminated = true;
  if (!hit) return out;
  const TaggedPoint end = w.tag(a.end(), len, "end");
  const TaggedPoint y1 = w.probe_tag(*hit, *hit == 0.0 ? "start" : "threshold64");
  out.points = walk_sequence(w, y1, Target{Mode::target_ball, len, end.point, sphere_frac * end.d_base},
                             outer_threshold, sphere_frac)
                   .points;
  return out;
}

ArcProvider neargeodesic_provider(double c, KOptions opts) {
  return [c, opts](const DomainSpec& g, const Point& x, const Point& y) {
    try {
      return neargeodesic(g, x, y, c, opts).arc;
    } catch (const BudgetExhausted& e) {
      return e.best().arc;
    }
  };
}

TransferReport john_transfer(const DomainSpec& d, const PunctureSet& p, const Point& z1, const Point& z2,
                             const ArcProvider& provider) {
  const DomainSpec base = d.base();
  const DomainSpec g = punctured(d, p);
  const double d1 = base.base_distance(z1), d2 = base.base_distance(z2);
  const Norm& n = base.norm();
  TransferReport r;
  r.beta = Arc::segment(z1, z2, n);
  if (n.distance(z1, z2) <= 0.25 * std::max(d1, d2)) {
    r.construction = "segment";
    r.beta_cone = cone_constant(base, r.beta).cone_constant;
    r.bound = 1.0;
    r.ok = r.beta_cone <= 1.0 + 1e-12;
    return r;
  }
  const bool p1 = is_puncture(p, z1), p2 = is_puncture(p, z2);
  auto radial = [&](const Point& z, const Point& toward, double dz) {
    const Point u = toward - z;
    return z + u * (dz / 64.0 / n(u));
  };
  const Point x = p1 ? radial(z1, z2, d1) : z1;
  const Point y = p2 ? radial(z2, z1, d2) : z2;
  Arc gamma = provider(g, x, y);
  if (!(gamma.start() == x) || !(gamma.end() == y)) throw InvalidArgument("provider arc has the wrong endpoints");
  std::vector<Point> v;
  if (p1) v.push_back(z1);
  v.insert(v.end(), gamma.vertices().begin(), gamma.vertices().end());
  if (p2) v.push_back(z2);
  r.beta = Arc(std::move(v), n);
  r.construction = p1 && p2 ? "radial+provider+radial" : (p1 || p2 ? "radial+provider" : "provider");
  r.measured_c1 = std::max(1.0, cone_constant(g, gamma).cone_constant);
  r.gamma = std::move(gamma);
  r.beta_cone = cone_constant(base, r.beta).cone_constant;
  r.bound = ledger::thm1_sufficiency(r.measured_c1);
  r.ok = r.beta_cone <= 1.02 * r.bound;
  return r;
}

InnerTransferReport inner_transfer(const DomainSpec& d, const PunctureSet& p, const Point& z1, const Point& z2,
                                   const ArcProvider& provider, double rel_tol) {
  const DomainSpec base = d.base();
  InnerTransferReport r;
  if (z1 == z2) {
    base.base_distance(z1);
    r.transfer.beta = Arc::single(z1, base.norm());
    r.transfer.construction = "point";
    r.transfer.ok = true;
    r.length_ok = r.cone_ok = true;
    return r;
  }
  r.lambda = inner_distance(base, z1, z2, rel_tol);
  r.transfer = john_transfer(d, p, z1, z2, provider);
  r.length = r.transfer.beta.length();
  if (r.transfer.gamma) {
    const Arc& gamma = *r.transfer.gamma;
    const auto lxy = inner_distance(base, gamma.start(), gamma.end(), rel_tol);
    r.c1 = std::max({1.0, r.transfer.measured_c1, gamma.length() / lxy.lower});
  }
  r.cone_bound = ledger::thm2_sufficiency(r.c1);
  r.length_bound = r.cone_bound * r.lambda.lower;
  r.length_ok = r.length <= r.length_bound * (1.0 + 1e-12);
  r.cone_ok = r.transfer.beta_cone <= r.cone_bound;

  const DomainSpec g = punctured(d, p);
  if (r.lambda.witness && r.lambda.upper <= 2.0 * r.lambda.lower && g.raw_distance(z1) > 0.0 &&
      g.raw_distance(z2) > 0.0 && p.validated() == Validation::pass) {
    r.seed_arc = r.lambda.witness;
    r.seed_repair = repair_arc(d, p, *r.seed_arc);
  }
  return r;
}

PsiFunction psi_necessity_transform(const PsiFunction& psi) {
  if (!psi_admissible(psi)) throw InvalidArgument("psi is below log(1 + t) somewhere: " + psi.description());
  const double factor = ledger::psi_necessity_factor().to_double();
  const double scale = ledger::psi_necessity_scale().to_double();
  return PsiFunction([psi, factor, scale](double t) { return factor * psi(scale * t); },
                     "1025 mu psi(8 t) of " + psi.description(), {{"factor", factor}, {"scale", scale}});
}

PsiFunction psi_sufficiency_transform(const PsiFunction& psi1) {
  if (!psi_admissible(psi1)) throw InvalidArgument("psi is below log(1 + t) somewhere: " + psi1.description());
  const double factor = ledger::psi_sufficiency_factor().to_double();
  const double scale = ledger::psi_sufficiency_scale().to_double();
  return PsiFunction([psi1, factor, scale](double t) { return factor * psi1(scale * t); },
                     "1025 (mu + 2) psi1(2^15 t) of " + psi1.description(), {{"factor", factor}, {"scale", scale}});
}

BaseShiftReport base_shift(const DomainSpec& d, const PunctureSet& p, const Point& x) {
  const DomainSpec base = d.base();
  const DomainSpec g = punctured(d, p);
  const Norm& n = base.norm();
  BaseShiftReport r;
  r.x = x;
  r.d_base_x = base.base_distance(x);
  double nearest = kInfinity;
  for (const auto& q : p.points()) {
    const double dq = n.distance(x, q);
    if (dq < r.d_base_x / 6.0 && dq < nearest) {
      nearest = dq;
      r.puncture = q;
    }
  }
  Point u(x.dim());
  u[0] = 1.0;
  if (r.puncture && nearest > 0.0) u = (x - *r.puncture) / nearest;
  r.w = x + u * (kSphere * r.d_base_x);
  r.d_base_w = base.signed_base_distance(r.w);
  r.d_punctured_w = std::max(0.0, std::min(r.d_base_w, g.puncture_distance(r.w)));
  const double tol = 1e-9 * r.d_base_x;
  r.clauses_ok = r.d_base_x / 48.0 < r.d_base_w / 33.0 + tol && r.d_base_w / 33.0 <= r.d_punctured_w + tol &&
                 r.d_punctured_w <= 33.0 / 31.0 * r.d_base_w + tol;
  return r;
}

SphereCheckReport sphere_depth_check(const DomainSpec& d, const PunctureSet& p, const Point& x, std::size_t samples) {
  const DomainSpec base = d.base();
  const DomainSpec g = punctured(d, p);
  const Norm& n = base.norm();
  SphereCheckReport r;
  const double dx = base.base_distance(x);
  r.applicable = dx >= 128.0 * std::max(0.0, g.raw_distance(x));
  if (!r.applicable) return r;
  const std::size_t dim = x.dim();
  Rng rng(0x5eed);
  for (std::size_t i = 0; i < samples; ++i) {
    Point v(dim);
    if (dim == 2) {
      const double t = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(samples);
      v[0] = std::cos(t);
      v[1] = std::sin(t);
    } else if (dim == 3) {
      // Fibonacci lattice.
      const double zc = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(samples);
      const double rc = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double phi = static_cast<double>(i) * M_PI * (3.0 - std::sqrt(5.0));
      v[0] = rc * std::cos(phi);
      v[1] = rc * std::sin(phi);
      v[2] = zc;
    } else {
      v = rng.direction(dim);
    }
    const Point w = x + v * (kSphere * dx / n(v));
    const double dw = base.signed_base_distance(w);
    const double gw = std::max(0.0, std::min(dw, g.puncture_distance(w)));
    r.worst_margin = std::min(r.worst_margin, gw - dw / 44.0);
    ++r.samples;
  }
  return r;
}

Claim4Report claim4_sequence(const DomainSpec& d, const PunctureSet& p, const Point& w0, const Point& y, double c,
                             const KOptions& opts) {
  require_validated(p);
  const DomainSpec base = d.base();
  const DomainSpec g = punctured(d, p);
  if (g.raw_distance(w0) <= 0.0 || g.raw_distance(y) <= 0.0) {
    throw MembershipError("claim4_sequence endpoints must lie in the punctured domain");
  }
  Claim4Report r;
  r.path = neargeodesic(base, w0, y, c, opts).arc;
  const Walker w(g, r.path);
  const double len = r.path.length();
  r.points.push_back(w.tag(w0, 0.0, "start"));
  const auto hit = w.first_hit(128.0, 0.0, len);
  if (!hit) {
    r.points.push_back(w.tag(y, len, "end"));
  } else {
    const auto seq = walk_sequence(w, w.probe_tag(*hit, "threshold128"), Target{Mode::target_point, len, y}, 128.0,
                                   kSphere);
    r.points.insert(r.points.end(), seq.points.begin(), seq.points.end());
  }

  const double mu = ledger::mu().to_double();
  r.depth_ok = true;
  for (std::size_t k = 0; k + 1 < r.points.size(); ++k) {
    const TaggedPoint& a = r.points[k];
    const TaggedPoint& b = r.points[k + 1];
    if (k % 2 == 0) r.depth_ok = r.depth_ok && a.d_base <= 44.0 * a.d_punctured * (1.0 + 1e-9);
    Claim4Leg leg{k, k + 1, k % 2 == 0 ? "shallow" : "ball"};
    if (a.point == b.point) {
      leg.factor = k % 2 == 0 ? 256.0 : 128.0 * mu;
      leg.ok = true;
      r.legs.push_back(leg);
      continue;
    }
    leg.k_base_lower = k_distance(base, a.point, b.point, 0.01, opts).lower;
    if (k % 2 == 0) {
      leg.factor = 256.0;
      leg.k_punctured_upper = qh_arc_length(g, r.path.subarc(a.s, b.s));
    } else {
      leg.factor = 128.0 * mu;
      const Arc around = ball_arc_avoiding(a.point, a.d_base / 6.0, p.points(), a.point, b.point, g.norm()).arc;
      leg.k_punctured_upper = k_upper_estimate(g, a.point, b.point, {around});
    }
    leg.ok = leg.k_punctured_upper <= leg.factor * leg.k_base_lower;
    if (!leg.ok) ++r.violations;
    r.legs.push_back(leg);
  }
  return r;
}

}  // namespace qhgeo
