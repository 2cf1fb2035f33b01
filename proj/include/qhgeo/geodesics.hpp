#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "qhgeo/errors.hpp"
#include "qhgeo/metrics.hpp"
#include "qhgeo/parallel.hpp"

namespace qhgeo {

struct SearchGraphOptions {
  /// Local node spacing is at most min(resolution, spacing_factor * d).
  double spacing_factor = 0.5;
  std::size_t node_cap = 2'000'000;
  double edge_rel_tol = 1e-7;
  Exec exec = Exec::parallel;
  /// Region to discretize; defaults to the domain's sampling window.
  std::optional<std::pair<Point, Point>> window;
  /// Drops points z with j(a, z) + j(z, b) > budget: no a-b path through them
  /// is shorter than budget, since k >= j.
  struct Prune {
    Point a, b;
    double budget;
  };
  std::optional<Prune> prune;
};

/// Nested multilevel lattice graph over a domain. Level L has spacing h0 / 2^L;
/// a lattice point is a level-L node when it lies in the domain with
/// d >= clearance_floor and its target spacing min(resolution, f d) is at most
/// 2 h_L. Edges join level-L nodes along primitive stencil offsets, so every
/// geometric pair appears on exactly one level and the node and edge sets only
/// grow when the resolution shrinks.
class SearchGraph {
 public:
  struct Edge {
    std::uint32_t a;
    std::uint32_t b;
    double weight;
  };

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  double resolution() const noexcept { return resolution_; }
  double clearance_floor() const noexcept { return floor_; }
  int level_count() const noexcept { return levels_; }
  /// True when enumeration stopped at the node cap.
  bool truncated() const noexcept { return truncated_; }

  /// Shortest path between two domain points through the graph (plus the direct
  /// segment), with its quasihyperbolic length; nullopt if they are not connected.
  std::optional<std::pair<Arc, double>> shortest_arc(const DomainSpec& d, const Point& x, const Point& y) const;

 private:
  friend SearchGraph build_search_graph(const DomainSpec&, double, double, const SearchGraphOptions&);

  struct Key {
    int level;
    std::int64_t k[3];
    bool operator==(const Key& o) const noexcept {
      return level == o.level && k[0] == o.k[0] && k[1] == o.k[1] && k[2] == o.k[2];
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& key) const noexcept;
  };

  Key canonical(int level, const std::int64_t* k) const;
  std::vector<std::pair<std::uint32_t, double>> attach(const DomainSpec& d, const Point& x) const;

  std::vector<Point> nodes_;
  std::vector<int> finest_level_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<std::pair<std::uint32_t, double>> adjacency_;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
  Point origin_;
  double h0_ = 1.0;
  double resolution_ = 0.0;
  double floor_ = 0.0;
  double spacing_factor_ = 0.5;
  double edge_rel_tol_ = 1e-7;
  std::size_t dim_ = 2;
  int levels_ = 0;
  bool truncated_ = false;
};

/// Throws InvalidArgument when the node set is empty (domain thinner than the resolution).
SearchGraph build_search_graph(const DomainSpec& d, double resolution, double clearance_floor,
                               const SearchGraphOptions& opts = {});

/// Lower bounds for k that need no discretization: j, the log ratio, hyperbolic
/// bounds from half-spaces containing the domain, and the punctured-space bound
/// around punctures and boundary vertices.
double analytic_lower_bound(const DomainSpec& d, const Point& x, const Point& y);

/// Certified lower bound from a uniform cell partition of a bounded domain: a
/// curve leaving the ring of `ring` cells around its current cell travels at
/// least the gap to the next cell with d no larger than the ring maximum.
/// Returns 0 for unbounded domains or when the cell count exceeds `cell_cap`.
double cell_lower_bound(const DomainSpec& d, const Point& x, const Point& y, double cell, int ring,
                        std::size_t cell_cap = 4'000'000);

/// Local descent on the interior vertices of an arc (pattern search, shortcutting
/// and subdivision). Never returns an arc with larger quasihyperbolic length.
Arc refine_arc(const DomainSpec& d, const Arc& arc, int rounds, double rel_tol);

struct KOptions {
  int max_rounds = 20;
  std::size_t node_cap = 2'000'000;
  /// Starting graph resolution as a fraction of the window extent.
  double initial_resolution = 0.125;
  double spacing_factor = 0.5;
  bool use_graph = true;
  bool use_cell_bound = true;
  int descent_rounds = 12;
  Exec exec = Exec::parallel;
};

/// Certified bracket for k(x, y). Stops when upper <= (1 + rel_tol) lower, or
/// flags budget_exhausted after max_rounds, the node cap, or two rounds without
/// progress.
MetricBracket k_distance(const DomainSpec& d, const Point& x, const Point& y, double rel_tol = 0.01,
                         const KOptions& opts = {});

struct GeodesicResult {
  Arc arc;
  double qh_length = 0.0;
  MetricBracket bracket;
  double c_certificate = 1.0;
  /// Subarc pairs checked against the neargeodesic inequality and the worst
  /// ratio l_k(subarc) / k_lower(endpoints) among them.
  std::size_t subarc_checks = 0;
  double subarc_worst_ratio = 1.0;
};

/// Raised when no arc with certificate <= c was found; carries the best one.
class BudgetExhausted : public Error {
 public:
  BudgetExhausted(const std::string& what, GeodesicResult best) : Error(what), best_(std::move(best)) {}
  const GeodesicResult& best() const noexcept { return best_; }

 private:
  GeodesicResult best_;
};

/// Default neargeodesic constant used by the other modules.
inline constexpr double kDefaultNeargeodesicC = 1.1;

GeodesicResult neargeodesic(const DomainSpec& d, const Point& x, const Point& y, double c = kDefaultNeargeodesicC,
                            const KOptions& opts = {});

}  // namespace qhgeo
