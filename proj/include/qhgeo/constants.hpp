#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qhgeo {

/// Exact rational with 64-bit numerator and denominator; arithmetic goes
/// through 128-bit intermediates and throws std::overflow_error when a reduced
/// result does not fit.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  bool is_integer() const noexcept { return den_ == 1; }
  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

 private:
  struct Raw {};
  Rational(Raw, std::int64_t num, std::int64_t den) : num_(num), den_(den) {}
  static Rational reduce(__int128 n, __int128 d);

  std::int64_t num_;
  std::int64_t den_;
};

Rational pow(const Rational& base, int exponent);

/// One named value of the ledger with a plain description of where it comes from.
struct LedgerEntry {
  std::string name;
  Rational value;
  std::string origin;
};

/// The numeric constants of the punctured-domain theory, evaluated from their
/// formulas in exact arithmetic. Functions of a measured constant come in a
/// Rational and a double flavour.
namespace ledger {

Rational b();
Rational ball_uniform();
Rational punctured_ball_uniform();
/// Uniformity constant of a ball punctured anywhere (centre not required).
Rational c2();
Rational vaisala_removal(const Rational& c);
/// c' = (c+1)(6 c0 + 1)/2 + c for the union of two overlapping c-uniform
/// domains, c0 bounding the radius ratio R1 / r of a ball containing D1 and a
/// ball inside the intersection.
Rational union_formula(const Rational& c, const Rational& c0);
/// The c0 at which union_formula(c2, c0) meets two_ball(): the instantiation
/// used for the two-ball union.
Rational union_c0();
Rational two_ball();
Rational repair_length();
Rational repair_cone(const Rational& c);
Rational thm1_sufficiency(const Rational& c1);
Rational thm2_necessity(const Rational& c);
Rational thm2_sufficiency(const Rational& c1);
Rational mu();
/// Leading factors of the two psi transforms: 1025 mu and 1025 (mu + 2).
Rational psi_necessity_factor();
Rational psi_sufficiency_factor();
/// Argument scalings of the two psi transforms: 8 and 2^15.
Rational psi_necessity_scale();
Rational psi_sufficiency_scale();

double repair_cone(double c);
double thm1_sufficiency(double c1);
double thm2_necessity(double c);
double thm2_sufficiency(double c1);

/// Ball and sphere fractions and depth-ratio thresholds used by the repair.
std::vector<Rational> thresholds();

/// Every fixed constant with its origin, for reports.
std::vector<LedgerEntry> entries();

}  // namespace ledger

}  // namespace qhgeo
