#pragma once

// Shared fixtures and seeded generators for the property tests.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qhgeo/arc.hpp"
#include "qhgeo/domain.hpp"
#include "qhgeo/rng.hpp"

namespace qhgeo::testing {

inline constexpr double kPs[] = {1.0, 1.5, 2.0, 3.0, kInfinity};

struct NamedDomain {
  std::string name;
  DomainSpec domain;
};

inline std::vector<NamedDomain> domain_families(double p = 2.0) {
  std::vector<NamedDomain> out;
  out.push_back({"half-plane", DomainSpec::half_space(2, p)});
  out.push_back({"disk", DomainSpec::ball(Point{0.0, 0.0}, 1.0, p)});
  out.push_back({"box", DomainSpec::box(Point{-1.0, -0.5}, Point{1.0, 0.5}, p)});
  out.push_back({"L-polygon", DomainSpec::polygon({Point{0, 0}, Point{2, 0}, Point{2, 1}, Point{1, 1}, Point{1, 2},
                                                   Point{0, 2}},
                                                  p)});
  out.push_back({"punctured-disk", with_punctures(DomainSpec::ball(Point{0.0, 0.0}, 1.0, p),
                                                  PunctureSet({Point{0.0, 0.0}, Point{0.6, 0.0}}))});
  out.push_back({"ball3", DomainSpec::ball(Point{0.0, 0.0, 0.0}, 1.0, p)});
  return out;
}

/// Point pairs drawn independently from the domain, at least `clearance` deep.
inline std::vector<std::pair<Point, Point>> sample_pairs(const DomainSpec& d, std::size_t count, std::uint64_t seed,
                                                         double clearance = 1e-3) {
  const auto a = sample_interior(d, count, seed, clearance);
  const auto b = sample_interior(d, count, seed ^ 0x5bd1e995u, clearance);
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({a[i], b[i]});
  return out;
}

/// Dense sampling of min(arclength to the nearer end) / dist, walking each
/// segment in 200 steps. `min_dist` receives the smallest sampled distance.
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

}  // namespace qhgeo::testing
