#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qhgeo/arc.hpp"
#include "qhgeo/domain.hpp"
#include "qhgeo/geodesics.hpp"

namespace qhgeo {

/// Distance-to-complement function used by the cone evaluators.
using DistanceFn = std::function<double(const Point&)>;

struct ConeReport {
  Arc arc;
  std::pair<Point, Point> endpoints;
  double cone_constant = 0.0;
  Point argmax_point;
  std::size_t sample_count = 0;
};

/// max over sampled z of min(l(a[z1, z]), l(a[z2, z])) / d(z). Samples are the
/// vertices, the arclength midpoint and `samples` + 1 equally spaced points, so
/// the value is exact for convex domains without punctures (d is concave along
/// each segment there) and nondecreasing when `samples` doubles.
/// Throws MembershipError if a sample lies outside the domain.
ConeReport cone_constant(const DomainSpec& d, const Arc& a, std::size_t samples = 256);
ConeReport cone_constant(const DistanceFn& dist, const Arc& a, std::size_t samples = 256);

/// Cone constant with subarc diameters in place of lengths.
double diam_cone_constant(const DomainSpec& d, const Arc& a, std::size_t samples = 256);

struct UniformReport {
  double value = 0.0;
  double cone_constant = 0.0;
  /// l(a) / |z1 - z2|, or l(a) / lambda_upper for the inner variant.
  double length_ratio = 1.0;
  /// Endpoints coincide; value is the cone constant alone.
  bool degenerate = false;
};

UniformReport uniform_constant(const DomainSpec& d, const Arc& a, std::size_t samples = 256);
UniformReport inner_uniform_constant(const DomainSpec& d, const Arc& a, double rel_tol = 1e-6,
                                     std::size_t samples = 256);

struct JohnOptions {
  std::size_t samples = 256;
  /// Sampled points are at least this deep, as a fraction of the sampling window extent.
  double min_clearance = 1e-3;
  bool use_neargeodesic = true;
  double neargeodesic_c = kDefaultNeargeodesicC;
  KOptions kopts{.max_rounds = 3};
  Exec exec = Exec::parallel;
};

struct JohnReport {
  /// max over pairs of the best candidate's cone constant.
  double estimate = 0.0;
  std::vector<std::pair<Point, Point>> pairs;
  std::vector<double> per_pair;
  std::vector<std::string> winner;
  std::vector<std::string> candidate_family;
  std::string note;
};

/// Heuristic John constant: per pair the smallest cone constant among the
/// candidate arcs, maximized over seeded pairs.
JohnReport john_estimate(const DomainSpec& d, std::size_t pair_count, std::uint64_t seed, const JohnOptions& opts = {});

enum class SeparationStatus { pass, fail, indeterminate };

const char* to_string(SeparationStatus s) noexcept;

struct SeparationPair {
  std::size_t i = 0, j = 0;
  double lower = 0.0, upper = 0.0;
  SeparationStatus status = SeparationStatus::pass;
};

struct SeparationReport {
  SeparationStatus status = SeparationStatus::pass;
  double b = 0.5;
  std::vector<SeparationPair> pairs;
  /// Index into `pairs` of the pair with the smallest lower bound.
  std::optional<std::size_t> worst_pair;
  double worst_lower = kInfinity;
};

/// Checks k_D(x_i, x_j) >= b for all puncture pairs, with D the base of `d`.
/// Straddling brackets are refined once with a tighter tolerance and a larger
/// budget, then reported indeterminate.
SeparationReport separation_check(const DomainSpec& d, const PunctureSet& p, const KOptions& opts = {});

/// The puncture set stamped with the outcome of separation_check (indeterminate
/// leaves it unchecked).
PunctureSet validate_punctures(const DomainSpec& d, const PunctureSet& p, const KOptions& opts = {});

/// Punctures in the open ball B(w, d_D(w) / 6). Requires a validated puncture set.
int ball_puncture_count(const DomainSpec& g, const Point& w);

struct ConeFloorReport {
  bool pass = true;
  double measured_cone = 0.0;
  std::size_t checks = 0;
  /// min over samples of d(w) - floor(w); the floor uses the nearer endpoint for
  /// the halves version and min(d(x), d(y)) for the plain one.
  double worst_margin = kInfinity;
  Point worst_point;
};

/// Depth floor along a c3-cone arc: d(w) >= min(d(x), d(y)) / (2 c3), and
/// d(w) >= d(x) / (2 c3) on the half nearer x (likewise for y). Throws
/// PreconditionError if the arc's cone constant exceeds c3.
ConeFloorReport cone_floor_check(const DomainSpec& d, const Arc& a, double c3, std::size_t samples = 256);

/// A monotone gauge function [0, inf) -> [0, inf).
class PsiFunction {
 public:
  PsiFunction(std::function<double(double)> f, std::string description, std::map<std::string, double> params = {});

  double operator()(double t) const { return f_(t); }
  const std::string& description() const noexcept { return description_; }
  const std::map<std::string, double>& parameters() const noexcept { return params_; }

  /// scale * log(1 + t)
  static PsiFunction log1p(double scale = 1.0);
  /// a * t
  static PsiFunction linear(double a = 1.0);
  /// e^t - 1
  static PsiFunction expm1();

 private:
  std::function<double(double)> f_;
  std::string description_;
  std::map<std::string, double> params_;
};

/// Logarithmic grid on [1e-3, 1e6] plus t = 0.
std::vector<double> psi_test_grid();

/// psi(0) = 0, finite and strictly increasing on the grid.
bool psi_is_gauge(const PsiFunction& psi, const std::vector<double>& grid = psi_test_grid());

/// psi(t) >= log(1 + t) on the grid (the floor every psi-John gauge obeys).
bool psi_admissible(const PsiFunction& psi, const std::vector<double>& grid = psi_test_grid());

struct PsiMarginReport {
  /// max over samples of k_upper(center, y) - psi(|center - y| / min(d(center), d(y))).
  double worst_excess = 0.0;
  Point argmax;
  std::size_t samples = 0;
  bool certified() const noexcept { return worst_excess <= 0.0; }
};

/// Does not require psi to be admissible: an inadmissible gauge simply shows a
/// positive excess.
PsiMarginReport psi_john_margin(const DomainSpec& d, const Point& center, const PsiFunction& psi,
                                std::size_t sample_count, std::uint64_t seed, const KOptions& opts = {});
/// Same over an explicit sample set.
PsiMarginReport psi_john_margin(const DomainSpec& d, const Point& center, const PsiFunction& psi,
                                const std::vector<Point>& samples, const KOptions& opts = {});

/// Cheap certified upper bound for k: the smallest quasihyperbolic length among
/// the straight segment, the given candidate arcs and a local refinement of the best.
double k_upper_estimate(const DomainSpec& d, const Point& x, const Point& y, const std::vector<Arc>& candidates = {});

struct BoundCheckReport {
  std::size_t checked = 0;
  std::size_t excluded = 0;
  std::size_t violations = 0;
  /// max of k_upper / bound over checked pairs with a positive bound.
  double worst_ratio = 0.0;
};

/// k_upper(dD; x, y) <= 7 c^3 j(dD; x, y) for seeded pairs in a c-uniform
/// subdomain d1 (a ball or a box). Throws InvalidArgument if d1 is not inside dD.
BoundCheckReport uniform_subdomain_bound_check(const DomainSpec& dD, const DomainSpec& d1, double c,
                                               std::size_t pair_count, std::uint64_t seed);

/// Pairs (x, y) with d_D(x) = 128 d_G(x) and y in the closed ball B(x, d_D(x) / 32).
std::vector<std::pair<Point, Point>> cor4_2_pairs(const DomainSpec& g, std::size_t count, std::uint64_t seed);

/// k_G upper <= mu j_G on pairs meeting the 128-threshold precondition within
/// `tol`; others are counted as excluded.
BoundCheckReport cor4_2_check(const DomainSpec& g, const std::vector<std::pair<Point, Point>>& pairs,
                              double tol = 0.01);

/// lambda1 <= psi(c t) / psi(t) <= lambda2 on the grid. Throws InvalidArgument
/// if psi vanishes at a grid point t > 0.
bool psi_class_check(const PsiFunction& psi, double c, double lambda1, double lambda2, const std::vector<double>& grid);

}  // namespace qhgeo
