#include "qhgeo/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qhgeo {

namespace {

constexpr std::size_t kMaxRefineVertices = 257;
constexpr int kMaxMovesPerVertex = 64;

// Pattern-search directions: coordinate axes plus the chord normal(s).
std::vector<Point> move_directions(const Point& prev, const Point& next) {
  const std::size_t n = prev.dim();
  std::vector<Point> dirs;
  for (std::size_t i = 0; i < n; ++i) {
    dirs.push_back(unit_vector(n, i));
    dirs.push_back(-unit_vector(n, i));
  }
  const Point chord = next - prev;
  const double len = euclidean_norm(chord);
  if (len > 0.0 && n == 2) {
    const Point nrm{-chord[1] / len, chord[0] / len};
    dirs.push_back(nrm);
    dirs.push_back(-nrm);
  }
  return dirs;
}

}  // namespace

Arc refine_arc(const DomainSpec& d, const Arc& arc, int rounds, double rel_tol) {
  if (arc.size() < 2) return arc;
  const Norm& norm = d.norm();
  std::vector<Point> v = arc.vertices();
  auto seg = [&](const Point& a, const Point& b) { return qh_segment_length(d, a, b, 1e-10); };
  std::vector<double> lens(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) lens[i] = seg(v[i], v[i + 1]);
  auto total = [&] {
    double s = 0.0;
    for (double l : lens) s += l;
    return s;
  };
  double current = total();
  if (!std::isfinite(current)) return arc;
  bool subdivided_last = false;
  for (int round = 0; round < rounds; ++round) {
    const double before = current;
    // Shortcut: drop vertices whose removal does not lengthen the arc.
    for (std::size_t i = 1; i + 1 < v.size();) {
      const double w = seg(v[i - 1], v[i + 1]);
      if (w <= lens[i - 1] + lens[i]) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        lens[i - 1] = w;
        lens.erase(lens.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        ++i;
      }
    }
    // Pattern search on each interior vertex.
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      const double room = std::min({norm.distance(v[i], v[i - 1]), norm.distance(v[i], v[i + 1]),
                                    std::max(d.raw_distance(v[i]), 0.0)});
      double step = 0.25 * room;
      const double min_step = 1e-4 * room;
      const auto dirs = move_directions(v[i - 1], v[i + 1]);
      int moves = 0;
      while (step > min_step && moves < kMaxMovesPerVertex) {
        bool moved = false;
        const double target = (lens[i - 1] + lens[i]) * (1.0 - 1e-9);
        for (const auto& dir : dirs) {
          const Point c = v[i] + dir * (step / norm(dir));
          if (!(d.raw_distance(c) > 0.0)) continue;
          const double a = seg(v[i - 1], c);
          if (!(a < target)) continue;
          const double b = seg(c, v[i + 1]);
          if (a + b < target) {
            ++moves;
            v[i] = c;
            lens[i - 1] = a;
            lens[i] = b;
            moved = true;
            break;
          }
        }
        if (!moved) step *= 0.5;
      }
    }
    current = total();
    const double gain = (before - current) / std::max(current, 1e-300);
    if (gain < 0.125 * rel_tol) {
      if (subdivided_last || v.size() * 2 > kMaxRefineVertices) break;
      // Subdivide so the polyline can follow curvature more closely.
      std::vector<Point> nv{v.front()};
      std::vector<double> nl;
      for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        const Point m = lerp(v[i], v[i + 1], 0.5);
        const double a = seg(v[i], m);
        const double b = seg(m, v[i + 1]);
        nv.push_back(m);
        nv.push_back(v[i + 1]);
        nl.push_back(a);
        nl.push_back(b);
      }
      v = std::move(nv);
      lens = std::move(nl);
      current = total();
      subdivided_last = true;
    } else {
      subdivided_last = false;
    }
  }
  Arc out(std::move(v), norm);
  return out;
}

namespace {

// Local window for the search graph: a box around the pair, clipped to the domain's box.
std::pair<Point, Point> local_window(const DomainSpec& d, const Point& x, const Point& y) {
  const std::size_t n = d.dim();
  const double r = 1.5 * d.norm().distance(x, y) + std::max(d.boundary_distance(x), d.boundary_distance(y));
  Point lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double m = 0.5 * (x[i] + y[i]);
    lo[i] = m - r;
    hi[i] = m + r;
  }
  if (auto bb = d.bounding_box()) {
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = std::max(lo[i], bb->first[i]);
      hi[i] = std::min(hi[i], bb->second[i]);
    }
  } else {
    lo[n - 1] = std::max(lo[n - 1], 0.0);
  }
  return {lo, hi};
}

}  // namespace

MetricBracket k_distance(const DomainSpec& d, const Point& x, const Point& y, double rel_tol, const KOptions& opts) {
  const double dx = d.boundary_distance(x);
  const double dy = d.boundary_distance(y);
  MetricBracket out;
  if (x == y) {
    out.witness = Arc::single(x, d.norm());
    return out;
  }
  out.lower = analytic_lower_bound(d, x, y);
  std::optional<Arc> base_witness;
  if (d.has_punctures()) {
    // k in the punctured domain dominates k in its base.
    MetricBracket base = k_distance(d.base(), x, y, rel_tol, opts);
    out.lower = std::max(out.lower, base.lower);
    base_witness = std::move(base.witness);
  }
  out.upper = kInfinity;
  const Arc straight = Arc::segment(x, y, d.norm());
  const double straight_len = qh_segment_length(d, x, y, 1e-10);
  if (std::isfinite(straight_len)) {
    out.upper = straight_len;
    out.witness = straight;
  }
  auto closed = [&] { return out.upper <= (1.0 + rel_tol) * out.lower; };
  auto consider = [&](const Arc& arc) {
    const double len = qh_arc_length(d, arc, 1e-10);
    if (len < out.upper) {
      out.upper = len;
      out.witness = arc;
    }
  };
  if (base_witness && std::isfinite(qh_arc_length(d, *base_witness, 1e-10))) consider(*base_witness);
  if (closed()) {
    out.lower = std::min(out.lower, out.upper);
    return out;
  }

  if (std::isfinite(straight_len)) consider(refine_arc(d, straight, opts.descent_rounds, 0.25 * rel_tol));
  if (closed()) {
    out.lower = std::min(out.lower, out.upper);
    return out;
  }

  const auto window = local_window(d, x, y);
  double extent = 0.0;
  for (std::size_t i = 0; i < d.dim(); ++i) extent = std::max(extent, window.second[i] - window.first[i]);
  double res = opts.initial_resolution * extent;
  const double floor = 0.5 * std::min(dx, dy);
  const int ring = d.dim() == 2 ? 3 : 2;
  SearchGraphOptions gopts;
  gopts.spacing_factor = opts.spacing_factor;
  gopts.node_cap = opts.node_cap;
  gopts.exec = opts.exec;
  gopts.window = window;
  int stalled = 0;
  bool exhausted = true;
  for (int round = 0; round < opts.max_rounds; ++round) {
    const double prev_upper = out.upper;
    const double prev_lower = out.lower;
    bool truncated = false;
    if (opts.use_graph) {
      gopts.prune = SearchGraphOptions::Prune{x, y, out.upper};
      const SearchGraph g = build_search_graph(d, res, floor, gopts);
      truncated = g.truncated();
      if (auto path = g.shortest_arc(d, x, y)) {
        consider(refine_arc(d, path->first, opts.descent_rounds, 0.25 * rel_tol));
      }
    }
    if (opts.use_cell_bound && d.bounded()) {
      out.lower = std::max(out.lower, cell_lower_bound(d, x, y, 0.5 * res, ring));
    }
    if (closed()) {
      exhausted = false;
      break;
    }
    if (truncated) break;
    const bool upper_moved = prev_upper - out.upper > 0.1 * rel_tol * out.upper;
    const bool lower_moved = out.lower - prev_lower > 0.1 * rel_tol * out.lower;
    stalled = (upper_moved || lower_moved) ? 0 : stalled + 1;
    if (stalled >= 2 || !opts.use_graph) break;
    res *= 0.5;
  }
  if (!std::isfinite(out.upper)) {
    throw DisconnectedError("no arc found between " + x.to_string() + " and " + y.to_string());
  }
  out.budget_exhausted = exhausted && !closed();
  out.lower = std::min(out.lower, out.upper);
  return out;
}

GeodesicResult neargeodesic(const DomainSpec& d, const Point& x, const Point& y, double c, const KOptions& opts) {
  if (!(c > 1.0)) throw InvalidArgument("neargeodesic constant must exceed 1");
  GeodesicResult res{Arc::single(x, d.norm()), 0.0, MetricBracket{}};
  if (x == y) {
    d.boundary_distance(x);
    res.bracket.witness = res.arc;
    return res;
  }
  res.bracket = k_distance(d, x, y, c - 1.0, opts);
  res.arc = *res.bracket.witness;
  res.qh_length = res.bracket.upper;
  res.c_certificate = res.bracket.lower > 0.0 ? std::max(1.0, res.qh_length / res.bracket.lower) : kInfinity;

  // Spot-check the subarc inequality on a fixed grid of arclength parameters.
  const int parts = 8;
  const double len = res.arc.length();
  for (int i = 0; i < parts; ++i) {
    for (int j = i + 1; j <= parts; ++j) {
      const Arc sub = res.arc.subarc(len * i / parts, len * j / parts);
      if (sub.start() == sub.end()) continue;
      const double sub_len = qh_arc_length(d, sub, 1e-10);
      const double lower = analytic_lower_bound(d, sub.start(), sub.end());
      ++res.subarc_checks;
      if (lower > 0.0) res.subarc_worst_ratio = std::max(res.subarc_worst_ratio, sub_len / lower);
    }
  }
  if (res.c_certificate > c) {
    std::ostringstream os;
    os << "neargeodesic: best certificate " << res.c_certificate << " exceeds c = " << c;
    throw BudgetExhausted(os.str(), res);
  }
  return res;
}

}  // namespace qhgeo
