#include "qhgeo/point.hpp"

#include <algorithm>
#include <sstream>

#include "qhgeo/errors.hpp"

namespace qhgeo {

namespace {

void check_dim(std::size_t dim) {
  if (dim < 2 || dim > kMaxDim) {
    throw InvalidArgument("point dimension must be 2 or 3, got " + std::to_string(dim));
  }
}

}  // namespace

Point::Point(std::size_t dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<double> coords) : dim_(coords.size()) {
  check_dim(dim_);
  std::copy(coords.begin(), coords.end(), c_.begin());
}

Point Point::from_span(std::span<const double> coords) {
  Point p(coords.size());
  std::copy(coords.begin(), coords.end(), p.c_.begin());
  return p;
}

bool Point::is_finite() const noexcept {
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

Point& Point::operator+=(const Point& o) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

Point& Point::operator/=(double s) noexcept {
  for (std::size_t i = 0; i < dim_; ++i) c_[i] /= s;
  return *this;
}

bool operator==(const Point& a, const Point& b) noexcept {
  if (a.dim_ != b.dim_) return false;
  for (std::size_t i = 0; i < a.dim_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < dim_; ++i) {
    if (i) os << ", ";
    os << c_[i];
  }
  os << ')';
  return os.str();
}

double dot(const Point& a, const Point& b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(const Point& v) noexcept {
  if (v.dim() == 2) return std::hypot(v[0], v[1]);
  return std::hypot(v[0], v[1], v[2]);
}

Point unit_vector(std::size_t dim, std::size_t i) {
  Point e(dim);
  e[i] = 1.0;
  return e;
}

Norm::Norm(double p) : p_(p) {
  if (!(p >= 1.0)) throw InvalidArgument("norm exponent must be in [1, inf]");
}

double Norm::operator()(const Point& v) const noexcept {
  const std::size_t n = v.dim();
  if (p_ == 2.0) return euclidean_norm(v);
  if (p_ == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(v[i]);
    return s;
  }
  if (std::isinf(p_)) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
    return m;
  }
  // Scale by the max component to avoid overflow in pow.
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::pow(std::abs(v[i]) / m, p_);
  return m * std::pow(s, 1.0 / p_);
}

double Norm::lower_euclidean_ratio(std::size_t n) const noexcept {
  // p >= 2: |v|_2 <= n^{1/2 - 1/p} |v|_p.  p <= 2: |v|_2 <= |v|_p.
  if (p_ <= 2.0) return 1.0;
  const double inv_p = std::isinf(p_) ? 0.0 : 1.0 / p_;
  return std::pow(static_cast<double>(n), inv_p - 0.5);
}

double Norm::upper_euclidean_ratio(std::size_t n) const noexcept {
  if (p_ >= 2.0) return 1.0;
  return std::pow(static_cast<double>(n), 1.0 / p_ - 0.5);
}

double Norm::ones_norm(std::size_t n) const noexcept {
  if (std::isinf(p_)) return 1.0;
  return std::pow(static_cast<double>(n), 1.0 / p_);
}

double Norm::dual(const Point& a) const noexcept {
  if (p_ == 1.0) return Norm(kInfinity)(a);
  if (std::isinf(p_)) return Norm(1.0)(a);
  return Norm(p_ / (p_ - 1.0))(a);
}

}  // namespace qhgeo
