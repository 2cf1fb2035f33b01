#pragma once

#include <cstdint>
#include <random>

#include "qhgeo/point.hpp"

namespace qhgeo {

/// The toolkit's only random source: a 64-bit Mersenne Twister (std::mt19937_64)
/// seeded with a single 64-bit value. Doubles are built from the top 53 bits of
/// each draw, so sequences are identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  /// Uniform point in the axis box [lo, hi].
  Point in_box(const Point& lo, const Point& hi) {
    Point p(lo.dim());
    for (std::size_t i = 0; i < lo.dim(); ++i) p[i] = uniform(lo[i], hi[i]);
    return p;
  }

  /// Direction uniformly distributed on the Euclidean unit sphere.
  Point direction(std::size_t dim) {
    for (;;) {
      Point v(dim);
      for (std::size_t i = 0; i < dim; ++i) v[i] = uniform(-1.0, 1.0);
      const double r = euclidean_norm(v);
      if (r > 1e-3 && r <= 1.0) return v / r;
    }
  }

  /// Independent child stream for index `i` (used to keep parallel sweeps deterministic).
  static Rng child(std::uint64_t seed, std::uint64_t i) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 e(seq);
    return Rng(e());
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qhgeo
