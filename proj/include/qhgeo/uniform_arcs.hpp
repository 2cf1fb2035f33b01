#pragma once

#include <algorithm>

#include "qhgeo/arc.hpp"
#include "qhgeo/domain.hpp"

namespace qhgeo {

struct UniformArcReport {
  Arc arc;
  /// Measured in the domain the constructor works in (ball, punctured ball,
  /// or two-ball union with d bounded below by the larger ball depth).
  double cone_constant = 0.0;
  /// l(arc) / |z1 - z2|; 1 for coincident endpoints.
  double quasiconvexity_ratio = 1.0;
  double claimed_bound = 0.0;
  /// Radius of the sphere detour around a puncture, 0 when none was needed.
  double detour_radius = 0.0;

  bool within_bound() const noexcept { return std::max(cone_constant, quasiconvexity_ratio) <= claimed_bound; }
};

/// 2-uniform arc in B(center, r): the chord when its cone constant is at most 2,
/// otherwise the two-segment path bent toward the centre until the bend is
/// |z1 - z2| / 2 deep.
UniformArcReport ball_arc(const Point& center, double r, const Point& z1, const Point& z2, Norm norm = Norm{});

/// Arc in B(center, r) \ {puncture}: the ball arc with the part inside
/// B(puncture, rho) replaced by the shorter great-circle route on the sphere
/// S(puncture, rho), rho = min(|z1 - p|, |z2 - p|, r - |p - center|) / 2.
UniformArcReport punctured_ball_arc(const Point& center, double r, const Point& puncture, const Point& z1,
                                    const Point& z2, Norm norm = Norm{});

/// Arc in (b1 u b2) \ punctures routed through the deepest point of the lens,
/// each leg built in its own ball. At most one puncture may lie in each ball.
UniformArcReport two_ball_union_arc(const Ball& b1, const Ball& b2, const PunctureSet& punctures, const Point& z1,
                                    const Point& z2, Norm norm = Norm{});

/// Uniform arc in B(center, r) minus whichever of `punctures` lie in it (at most one).
UniformArcReport ball_arc_avoiding(const Point& center, double r, const std::vector<Point>& punctures,
                                   const Point& z1, const Point& z2, Norm norm = Norm{});

}  // namespace qhgeo
