#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>

#include "qhgeo/geodesics.hpp"

namespace qhgeo {

namespace {

constexpr int kMaxLevels = 48;

// Primitive integer offsets with max-norm <= radius, one of each +/- pair.
std::vector<std::array<std::int64_t, 3>> half_stencil(std::size_t dim) {
  const int radius = dim == 2 ? 2 : 1;
  std::vector<std::array<std::int64_t, 3>> out;
  for (int a = -radius; a <= radius; ++a) {
    for (int b = -radius; b <= radius; ++b) {
      for (int c = (dim == 3 ? -radius : 0); c <= (dim == 3 ? radius : 0); ++c) {
        const std::array<std::int64_t, 3> s{a, b, c};
        // Keep the lexicographically positive representative.
        bool positive = false;
        for (std::int64_t v : s) {
          if (v != 0) {
            positive = v > 0;
            break;
          }
        }
        if (!positive) continue;
        std::int64_t g = 0;
        for (std::int64_t v : s) g = std::gcd(g, std::abs(v));
        if (g != 1) continue;
        out.push_back(s);
      }
    }
  }
  return out;
}

}  // namespace

std::size_t SearchGraph::KeyHash::operator()(const Key& key) const noexcept {
  std::uint64_t h = 1469598103934665603ull ^ static_cast<std::uint64_t>(key.level);
  for (std::int64_t v : key.k) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

SearchGraph::Key SearchGraph::canonical(int level, const std::int64_t* k) const {
  Key key{level, {k[0], k[1], dim_ == 3 ? k[2] : 0}};
  while (key.level > 0 && (key.k[0] % 2 == 0) && (key.k[1] % 2 == 0) && (key.k[2] % 2 == 0)) {
    --key.level;
    for (auto& v : key.k) v /= 2;
  }
  return key;
}

SearchGraph build_search_graph(const DomainSpec& d, double resolution, double clearance_floor,
                               const SearchGraphOptions& opts) {
  if (!(resolution > 0.0)) throw InvalidArgument("resolution must be positive");
  if (clearance_floor < 0.0) throw InvalidArgument("clearance_floor must be nonnegative");
  SearchGraph g;
  const std::size_t n = d.dim();
  g.dim_ = n;
  g.resolution_ = resolution;
  g.floor_ = clearance_floor > 0.0 ? clearance_floor : resolution / 16.0;
  g.spacing_factor_ = opts.spacing_factor;
  g.edge_rel_tol_ = opts.edge_rel_tol;
  const auto [lo, hi] = opts.window ? *opts.window : d.sampling_window();
  double extent = 0.0;
  for (std::size_t i = 0; i < n; ++i) extent = std::max(extent, hi[i] - lo[i]);
  g.origin_ = lo;
  g.h0_ = extent / 16.0;
  std::int64_t count[3] = {0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) count[i] = static_cast<std::int64_t>(std::ceil((hi[i] - lo[i]) / g.h0_));

  const double f = opts.spacing_factor;
  const double floor = g.floor_;
  auto position = [&](int level, const std::int64_t* k) {
    const double h = std::ldexp(g.h0_, -level);
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = g.origin_[i] + static_cast<double>(k[i]) * h;
    return p;
  };
  auto inside_window = [&](const Point& p) {
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] < lo[i] || p[i] > hi[i]) return false;
    }
    return true;
  };

  // j(a, z) over a ball of radius rad around c is at least the value at the
  // nearest distance and the largest possible d(z).
  auto j_floor = [&](const Point& a, double da, const Point& c, double dc, double rad) {
    const double gap = std::max(0.0, d.norm().distance(a, c) - rad);
    return std::log1p(gap / std::min(da, std::max(dc + rad, 1e-300)));
  };
  double prune_da = 0.0, prune_db = 0.0;
  if (opts.prune) {
    prune_da = d.boundary_distance(opts.prune->a);
    prune_db = d.boundary_distance(opts.prune->b);
  }
  auto pruned = [&](const Point& c, double dc, double rad) {
    if (!opts.prune) return false;
    const auto& pr = *opts.prune;
    return j_floor(pr.a, prune_da, c, dc, rad) + j_floor(pr.b, prune_db, c, dc, rad) > pr.budget;
  };

  using Index = std::array<std::int64_t, 3>;
  std::vector<std::vector<std::pair<Index, std::uint32_t>>> level_nodes;

  // Registers the lattice points of one level; returns false once the cap is hit.
  auto add_level = [&](int level, std::vector<Index>& candidates) {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    const double h = std::ldexp(g.h0_, -level);
    level_nodes.emplace_back();
    auto& out = level_nodes.back();
    for (const auto& k : candidates) {
      const Point p = position(level, k.data());
      if (!inside_window(p)) continue;
      const double dz = d.raw_distance(p);
      if (!(dz > 0.0) || dz < floor) continue;
      if (std::min(resolution, f * dz) > 2.0 * h) continue;
      if (pruned(p, dz, 0.0)) continue;
      const auto key = g.canonical(level, k.data());
      auto it = g.index_.find(key);
      std::uint32_t id;
      if (it == g.index_.end()) {
        if (g.nodes_.size() >= opts.node_cap) {
          g.truncated_ = true;
          return false;
        }
        id = static_cast<std::uint32_t>(g.nodes_.size());
        g.index_.emplace(key, id);
        g.nodes_.push_back(p);
        g.finest_level_.push_back(level);
      } else {
        id = it->second;
        g.finest_level_[id] = std::max(g.finest_level_[id], level);
      }
      out.push_back({k, id});
    }
    return true;
  };

  // Level 0: every lattice point of the window.
  std::vector<Index> candidates;
  std::vector<Index> cells;
  for (std::int64_t a = 0; a <= count[0]; ++a) {
    for (std::int64_t b = 0; b <= count[1]; ++b) {
      for (std::int64_t c = 0; c <= (n == 3 ? count[2] : 0); ++c) {
        candidates.push_back({a, b, c});
        if (a < count[0] && b < count[1] && (n == 2 || c < count[2])) cells.push_back({a, b, c});
      }
    }
  }
  bool ok = add_level(0, candidates);
  int level = 0;
  while (ok && level + 1 < kMaxLevels) {
    const double h = std::ldexp(g.h0_, -level);
    Point half(n);
    for (std::size_t i = 0; i < n; ++i) half[i] = 0.5 * h;
    const double rad = d.norm()(half);
    std::vector<Index> next_cells;
    candidates.clear();
    for (const auto& k : cells) {
      Point center = position(level, k.data());
      for (std::size_t i = 0; i < n; ++i) center[i] += 0.5 * h;
      const double dc = d.raw_distance(center);
      if (dc + rad < floor || dc + rad <= 0.0) continue;
      if (!(resolution <= h || f * (dc - rad) <= h)) continue;
      if (pruned(center, dc, rad)) continue;
      for (int a = 0; a <= 2; ++a) {
        for (int b = 0; b <= 2; ++b) {
          for (int c = 0; c <= (n == 3 ? 2 : 0); ++c) {
            const Index child{2 * k[0] + a, 2 * k[1] + b, n == 3 ? 2 * k[2] + c : 0};
            candidates.push_back(child);
            if (a < 2 && b < 2 && (n == 2 || c < 2)) next_cells.push_back(child);
          }
        }
      }
    }
    if (candidates.empty()) break;
    ++level;
    ok = add_level(level, candidates);
    cells = std::move(next_cells);
  }
  g.levels_ = static_cast<int>(level_nodes.size());
  if (g.nodes_.empty() && !opts.prune) throw InvalidArgument("search graph has no nodes: domain thinner than the resolution");

  // Candidate edges in deterministic order, then weights in parallel.
  const auto stencil = half_stencil(n);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (int lv = 0; lv < g.levels_; ++lv) {
    for (const auto& [k, id] : level_nodes[static_cast<std::size_t>(lv)]) {
      for (const auto& s : stencil) {
        const Index k2{k[0] + s[0], k[1] + s[1], k[2] + s[2]};
        auto it = g.index_.find(g.canonical(lv, k2.data()));
        if (it == g.index_.end()) continue;
        if (g.finest_level_[it->second] < lv) continue;
        pairs.push_back({id, it->second});
      }
    }
  }
  const auto weights = parallel_map<double>(
      pairs.size(),
      [&](std::size_t i) {
        return qh_segment_length(d, g.nodes_[pairs[i].first], g.nodes_[pairs[i].second], g.edge_rel_tol_);
      },
      opts.exec);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (std::isfinite(weights[i])) g.edges_.push_back({pairs[i].first, pairs[i].second, weights[i]});
  }

  const std::size_t nn = g.nodes_.size();
  g.offsets_.assign(nn + 1, 0);
  for (const auto& e : g.edges_) {
    ++g.offsets_[e.a + 1];
    ++g.offsets_[e.b + 1];
  }
  for (std::size_t i = 0; i < nn; ++i) g.offsets_[i + 1] += g.offsets_[i];
  g.adjacency_.resize(2 * g.edges_.size());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : g.edges_) {
    g.adjacency_[fill[e.a]++] = {e.b, e.weight};
    g.adjacency_[fill[e.b]++] = {e.a, e.weight};
  }
  return g;
}

std::vector<std::pair<std::uint32_t, double>> SearchGraph::attach(const DomainSpec& d, const Point& x) const {
  std::vector<std::uint32_t> ids;
  for (int lv = 0; lv < levels_; ++lv) {
    const double h = std::ldexp(h0_, -lv);
    std::int64_t base[3] = {0, 0, 0};
    for (std::size_t i = 0; i < dim_; ++i) {
      base[i] = static_cast<std::int64_t>(std::floor((x[i] - origin_[i]) / h));
    }
    for (int a = -2; a <= 3; ++a) {
      for (int b = -2; b <= 3; ++b) {
        for (int c = (dim_ == 3 ? -2 : 0); c <= (dim_ == 3 ? 3 : 0); ++c) {
          const std::int64_t k[3] = {base[0] + a, base[1] + b, base[2] + c};
          auto it = index_.find(canonical(lv, k));
          if (it == index_.end() || finest_level_[it->second] < lv) continue;
          ids.push_back(it->second);
        }
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::pair<std::uint32_t, double>> out;
  for (std::uint32_t id : ids) {
    const double w = qh_segment_length(d, x, nodes_[id], edge_rel_tol_);
    if (std::isfinite(w)) out.push_back({id, w});
  }
  return out;
}

std::optional<std::pair<Arc, double>> SearchGraph::shortest_arc(const DomainSpec& d, const Point& x,
                                                                const Point& y) const {
  const std::size_t n = nodes_.size();
  const std::size_t src = n;
  const std::size_t dst = n + 1;
  const auto from_x = attach(d, x);
  const auto to_y = attach(d, y);
  std::unordered_map<std::uint32_t, double> target;
  for (const auto& [id, w] : to_y) target[id] = w;

  std::vector<double> dist(n + 2, kInfinity);
  std::vector<std::size_t> prev(n + 2, n + 2);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.push({0.0, src});
  auto relax = [&](std::size_t u, std::size_t v, double w) {
    const double nd = dist[u] + w;
    if (nd < dist[v]) {
      dist[v] = nd;
      prev[v] = u;
      pq.push({nd, v});
    }
  };
  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[u]) continue;
    if (u == dst) break;
    if (u == src) {
      for (const auto& [id, w] : from_x) relax(src, id, w);
      const double direct = qh_segment_length(d, x, y, edge_rel_tol_);
      if (std::isfinite(direct)) relax(src, dst, direct);
      continue;
    }
    for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) relax(u, adjacency_[e].first, adjacency_[e].second);
    auto it = target.find(static_cast<std::uint32_t>(u));
    if (it != target.end()) relax(u, dst, it->second);
  }
  if (!std::isfinite(dist[dst])) return std::nullopt;
  std::vector<Point> path{y};
  for (std::size_t v = prev[dst]; v != src; v = prev[v]) path.push_back(nodes_[v]);
  path.push_back(x);
  std::reverse(path.begin(), path.end());
  return std::make_pair(Arc(std::move(path), d.norm()), dist[dst]);
}

}  // namespace qhgeo
