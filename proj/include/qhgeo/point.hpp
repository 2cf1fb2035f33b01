#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>

namespace qhgeo {

inline constexpr std::size_t kMaxDim = 3;

/// A point or displacement in R^n with n in {2, 3}.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim);
  Point(std::initializer_list<double> coords);
  static Point from_span(std::span<const double> coords);

  std::size_t dim() const noexcept { return dim_; }
  double operator[](std::size_t i) const noexcept { return c_[i]; }
  double& operator[](std::size_t i) noexcept { return c_[i]; }
  std::span<const double> coords() const noexcept { return {c_.data(), dim_}; }

  bool is_finite() const noexcept;

  Point& operator+=(const Point& o) noexcept;
  Point& operator-=(const Point& o) noexcept;
  Point& operator*=(double s) noexcept;
  Point& operator/=(double s) noexcept;

  friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
  friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
  friend Point operator*(Point a, double s) noexcept { return a *= s; }
  friend Point operator*(double s, Point a) noexcept { return a *= s; }
  friend Point operator/(Point a, double s) noexcept { return a /= s; }
  friend Point operator-(Point a) noexcept { return a *= -1.0; }
  friend bool operator==(const Point& a, const Point& b) noexcept;

  std::string to_string() const;

 private:
  std::array<double, kMaxDim> c_{};
  std::size_t dim_ = 2;
};

double dot(const Point& a, const Point& b) noexcept;
double euclidean_norm(const Point& v) noexcept;

/// Unit coordinate vector e_i in dimension `dim`.
Point unit_vector(std::size_t dim, std::size_t i);

/// Linear interpolation a + t (b - a).
inline Point lerp(const Point& a, const Point& b, double t) noexcept { return a + (b - a) * t; }

/// The p-norm on R^n, p in [1, inf].
class Norm {
 public:
  explicit Norm(double p = 2.0);

  double p() const noexcept { return p_; }
  bool is_euclidean() const noexcept { return p_ == 2.0; }

  double operator()(const Point& v) const noexcept;
  double distance(const Point& a, const Point& b) const noexcept { return (*this)(a - b); }

  /// Largest c with c |v|_2 <= |v|_p for all v in R^n.
  double lower_euclidean_ratio(std::size_t n) const noexcept;
  /// Smallest C with |v|_p <= C |v|_2 for all v in R^n.
  double upper_euclidean_ratio(std::size_t n) const noexcept;
  /// p-norm of the all-ones vector in R^n (n^{1/p}).
  double ones_norm(std::size_t n) const noexcept;
  /// Dual-norm value |a|_q of a vector, 1/p + 1/q = 1.
  double dual(const Point& a) const noexcept;

  friend bool operator==(const Norm& a, const Norm& b) noexcept { return a.p_ == b.p_; }

 private:
  double p_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace qhgeo
