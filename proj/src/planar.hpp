#pragma once

#include <vector>

#include "qhgeo/point.hpp"

// Planar predicates shared by the polygon code paths.
namespace qhgeo::planar {

double cross2(const Point& o, const Point& a, const Point& b);

/// Closed-segment intersection test (touching counts).
bool segments_intersect2(const Point& p1, const Point& p2, const Point& q1, const Point& q2);

/// Crossing-number test; points on the boundary may go either way.
bool point_in_polygon(const std::vector<Point>& poly, const Point& x);

/// True when the closed segment [a, b] lies in the closed polygon.
bool segment_in_closed_polygon(const std::vector<Point>& poly, const Point& a, const Point& b);

}  // namespace qhgeo::planar
