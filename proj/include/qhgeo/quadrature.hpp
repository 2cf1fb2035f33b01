#pragma once

#include <cmath>

namespace qhgeo {

struct QuadratureResult {
  double value = 0.0;
  bool converged = true;
  int evaluations = 0;
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                    int level, int max_depth, QuadratureResult& out) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (!std::isfinite(left + right)) {
    out.converged = false;
    return left + right;
  }
  // Always split a few times before trusting the estimate on peaked integrands.
  const bool small = std::abs(delta) <= 15.0 * tol;
  if ((level >= 3 && small) || level >= max_depth) {
    if (!small) out.converged = false;
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, level + 1, max_depth, out) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, level + 1, max_depth, out);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`,
/// with Richardson correction and a hard recursion depth.
template <class F>
QuadratureResult adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 50) {
  QuadratureResult out;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  out.evaluations = 3;
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  out.value = detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 0, max_depth, out);
  return out;
}

}  // namespace qhgeo
