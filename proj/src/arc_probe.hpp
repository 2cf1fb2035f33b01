#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>

// Root finding along an arclength parameter for Lipschitz functions.
namespace qhgeo::probe {

/// First s between `from` and `to` (walking from `from`, either direction)
/// with f(s) >= 0, for f that is `lip`-Lipschitz in s. Steps by
/// max(-f / lip, min_step), which cannot skip a sign change wider than
/// min_step, then bisects to `tol`. Returns the bracket end with f >= 0.
template <class F>
std::optional<double> first_nonnegative(F&& f, double from, double to, double lip, double min_step, double tol,
                                        std::size_t max_steps = 4'000'000) {
  const double dir = to >= from ? 1.0 : -1.0;
  double s = from;
  double fs = f(s);
  if (fs >= 0.0) return s;
  for (std::size_t step = 0; step < max_steps; ++step) {
    if (s == to) return std::nullopt;
    const double h = std::max(-fs / lip, min_step);
    double next = s + dir * h;
    if ((next - to) * dir > 0.0) next = to;
    const double fn = f(next);
    if (fn >= 0.0) {
      double lo = s, hi = next;
      while (std::abs(hi - lo) > tol) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      return hi;
    }
    s = next;
    fs = fn;
  }
  return std::nullopt;
}

}  // namespace qhgeo::probe
