#include "qhgeo/constants.hpp"

#include <limits>
#include <stdexcept>

namespace qhgeo {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::reduce(__int128 n, __int128 d) {
  if (d == 0) throw std::domain_error("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const __int128 g = gcd128(n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();
  if (n > kMax || n < -kMax || d > kMax) throw std::overflow_error("rational overflow");
  return Rational(Raw{}, static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
}

Rational::Rational(std::int64_t num, std::int64_t den) : Rational(reduce(num, den)) {}

std::string Rational::to_string() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::reduce(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return Rational::reduce(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
                          static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::reduce(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::reduce(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

Rational pow(const Rational& base, int exponent) {
  Rational out(1);
  for (int i = 0; i < exponent; ++i) out = out * base;
  return out;
}

namespace ledger {

Rational b() { return Rational(1, 2); }
Rational ball_uniform() { return 2; }
Rational punctured_ball_uniform() { return 10; }
Rational c2() { return 18; }
Rational vaisala_removal(const Rational& c) { return Rational(9) * c; }

Rational union_formula(const Rational& c, const Rational& c0) {
  return Rational(1, 2) * (c + 1) * (Rational(6) * c0 + 1) + c;
}

Rational union_c0() {
  // Solve (c2 + 1)(6 c0 + 1)/2 + c2 = two_ball() for c0.
  const Rational c = c2();
  return ((two_ball() - c) * Rational(2) / (c + 1) - 1) / Rational(6);
}

Rational two_ball() { return Rational(660) * pow(c2(), 2); }
Rational repair_length() { return two_ball(); }

Rational repair_cone(const Rational& c) { return pow(Rational(2), 18) * c * pow(c2(), 3) + two_ball(); }

Rational thm1_sufficiency(const Rational& c1) { return Rational(65, 63) * c1; }

Rational thm2_necessity(const Rational& c) { return pow(Rational(2), 18) * c * c * pow(c2(), 3) + two_ball(); }

Rational thm2_sufficiency(const Rational& c1) { return Rational(1485) * c1 * pow(c2(), 2) + Rational(1, 8); }

Rational mu() { return Rational(7) * pow(c2(), 3); }
Rational psi_necessity_factor() { return Rational(1025) * mu(); }
Rational psi_sufficiency_factor() { return Rational(1025) * (mu() + 2); }
Rational psi_necessity_scale() { return 8; }
Rational psi_sufficiency_scale() { return pow(Rational(2), 15); }

double repair_cone(double c) {
  return pow(Rational(2), 18).to_double() * c * pow(c2(), 3).to_double() + two_ball().to_double();
}
double thm1_sufficiency(double c1) { return 65.0 / 63.0 * c1; }
double thm2_necessity(double c) {
  return pow(Rational(2), 18).to_double() * c * c * pow(c2(), 3).to_double() + two_ball().to_double();
}
double thm2_sufficiency(double c1) { return 1485.0 * c1 * pow(c2(), 2).to_double() + 0.125; }

std::vector<Rational> thresholds() {
  return {Rational(1, 6), Rational(1, 16), Rational(1, 32), Rational(1, 64), 44, 48, 62, 64, 66, 128};
}

std::vector<LedgerEntry> entries() {
  return {
      {"b", b(), "separation normalisation of the puncture set"},
      {"ball_uniform", ball_uniform(), "uniformity of a ball"},
      {"punctured_ball_uniform", punctured_ball_uniform(), "uniformity of a ball minus its centre"},
      {"c2", c2(), "uniformity of a ball minus one arbitrary point, via removal of a point from a ball"},
      {"vaisala_removal(1)", vaisala_removal(1), "uniformity after removing one point from a c-uniform domain: 9c"},
      {"union_c0", union_c0(), "radius ratio at which the union formula with c = c2 meets the two-ball bound"},
      {"union_formula(c2, union_c0)", union_formula(c2(), union_c0()), "union of two overlapping uniform domains"},
      {"two_ball", two_ball(), "uniformity of two overlapping punctured balls"},
      {"repair_length", repair_length(), "length factor of the arc repair"},
      {"repair_cone(1)", repair_cone(1), "cone constant after repair of a 1-cone arc"},
      {"thm1_sufficiency(1)", thm1_sufficiency(1), "cone constant after adding radial steps at punctures"},
      {"thm2_necessity(1)", thm2_necessity(1), "inner uniformity of the punctured domain"},
      {"thm2_sufficiency(1)", thm2_sufficiency(1), "inner uniformity of the base domain"},
      {"mu", mu(), "k <= mu j near a puncture at the 128 threshold"},
      {"psi_necessity_factor", psi_necessity_factor(), "psi'(t) = 1025 mu psi(8t)"},
      {"psi_sufficiency_factor", psi_sufficiency_factor(), "psi(t) = 1025 (mu + 2) psi1(2^15 t)"},
  };
}

}  // namespace ledger

}  // namespace qhgeo
