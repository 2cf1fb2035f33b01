#include "qhgeo/arc.hpp"

#include <algorithm>
#include <cmath>

#include "qhgeo/errors.hpp"

namespace qhgeo {

Arc::Arc(std::vector<Point> vertices, Norm norm) : norm_(norm) {
  if (vertices.empty()) throw InvalidArgument("an arc needs at least one vertex");
  const std::size_t dim = vertices.front().dim();
  vertices_.reserve(vertices.size());
  for (auto& v : vertices) {
    if (v.dim() != dim) throw InvalidArgument("arc vertices have mixed dimensions");
    if (!v.is_finite()) throw InvalidArgument("arc vertex is not finite");
    if (!vertices_.empty() && vertices_.back() == v) continue;
    vertices_.push_back(v);
  }
  cumulative_.reserve(vertices_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    cumulative_.push_back(cumulative_.back() + norm_.distance(vertices_[i - 1], vertices_[i]));
  }
}

Arc Arc::segment(const Point& a, const Point& b, Norm norm) { return Arc({a, b}, norm); }

Arc Arc::single(const Point& a, Norm norm) { return Arc({a}, norm); }

std::size_t Arc::segment_index(double s) const {
  if (vertices_.size() < 2) return 0;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
  if (i == 0) return 0;
  return std::min(i - 1, vertices_.size() - 2);
}

Point Arc::point_at(double s) const {
  if (vertices_.size() == 1 || s <= 0.0) return vertices_.front();
  if (s >= length()) return vertices_.back();
  const std::size_t i = segment_index(s);
  const double seg = cumulative_[i + 1] - cumulative_[i];
  if (seg <= 0.0) return vertices_[i];
  const double t = (s - cumulative_[i]) / seg;
  return lerp(vertices_[i], vertices_[i + 1], std::clamp(t, 0.0, 1.0));
}

Arc Arc::subarc(double s, double t) const {
  const double len = length();
  s = std::clamp(s, 0.0, len);
  t = std::clamp(t, 0.0, len);
  if (t < s) throw InvalidArgument("subarc requires s <= t");
  std::vector<Point> out;
  out.push_back(point_at(s));
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (cumulative_[i] > s && cumulative_[i] < t) out.push_back(vertices_[i]);
  }
  out.push_back(point_at(t));
  return Arc(std::move(out), norm_);
}

Arc Arc::reversed() const {
  std::vector<Point> out(vertices_.rbegin(), vertices_.rend());
  return Arc(std::move(out), norm_);
}

Arc Arc::concat(const Arc& next) const {
  const double gap = norm_.distance(end(), next.start());
  const double scale = std::max({1.0, length(), next.length(), norm_(end())});
  if (gap > 1e-9 * scale) {
    throw InvalidArgument("concat: arcs do not share an endpoint (gap " + std::to_string(gap) + ")");
  }
  std::vector<Point> out = vertices_;
  // The join point of `next` replaces ours so the result ends exactly where `next` does.
  out.pop_back();
  out.insert(out.end(), next.vertices_.begin(), next.vertices_.end());
  return Arc(std::move(out), norm_);
}

std::vector<double> Arc::sample_params(std::size_t samples) const {
  std::vector<double> params(cumulative_);
  const double len = length();
  if (samples > 0 && len > 0.0) {
    for (std::size_t i = 0; i <= samples; ++i) {
      params.push_back(len * static_cast<double>(i) / static_cast<double>(samples));
    }
  }
  std::sort(params.begin(), params.end());
  params.erase(std::unique(params.begin(), params.end()), params.end());
  return params;
}

double Arc::diameter() const {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices_.size(); ++j) {
      best = std::max(best, norm_.distance(vertices_[i], vertices_[j]));
    }
  }
  return best;
}

}  // namespace qhgeo
