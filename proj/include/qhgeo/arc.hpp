#pragma once

#include <cstddef>
#include <vector>

#include "qhgeo/point.hpp"

namespace qhgeo {

/// An ordered polyline with its arclength parameterization in a given norm.
/// Every rectifiable curve in the toolkit is represented this way.
class Arc {
 public:
  /// Consecutive exact duplicates are dropped. Requires at least one vertex.
  explicit Arc(std::vector<Point> vertices, Norm norm = Norm{});

  static Arc segment(const Point& a, const Point& b, Norm norm = Norm{});
  static Arc single(const Point& a, Norm norm = Norm{});

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t segment_count() const noexcept { return vertices_.size() - 1; }
  std::size_t dim() const noexcept { return vertices_.front().dim(); }
  const Norm& norm() const noexcept { return norm_; }

  double length() const noexcept { return cumulative_.back(); }
  const Point& start() const noexcept { return vertices_.front(); }
  const Point& end() const noexcept { return vertices_.back(); }
  bool is_point() const noexcept { return vertices_.size() == 1; }

  /// Point at arclength s (clamped to [0, length]).
  Point point_at(double s) const;
  /// Index i of the segment [v_i, v_{i+1}] containing arclength s.
  std::size_t segment_index(double s) const;

  /// The part of the arc between arclengths s <= t.
  Arc subarc(double s, double t) const;
  Arc reversed() const;
  /// Joins `next` after this arc; the endpoints must agree to 1e-9 of the scale.
  Arc concat(const Arc& next) const;

  /// Arclength parameters of all vertices plus `samples` + 1 equally spaced
  /// points (i * length / samples), sorted and deduplicated. Parameter sets for
  /// k and 2k samples are nested.
  std::vector<double> sample_params(std::size_t samples) const;

  /// Maximum distance between any two points of the arc (attained at vertices).
  double diameter() const;

 private:
  std::vector<Point> vertices_;
  std::vector<double> cumulative_;
  Norm norm_;
};

}  // namespace qhgeo
