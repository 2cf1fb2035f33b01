#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qhgeo/arc.hpp"
#include "qhgeo/classify.hpp"
#include "qhgeo/domain.hpp"
#include "qhgeo/geodesics.hpp"

namespace qhgeo {

/// A point of a threshold or sphere-exit sequence with its arclength on the
/// arc it was found on and both depths.
struct TaggedPoint {
  Point point;
  double s = 0.0;
  /// "start", "threshold64", "threshold128", "sphere_exit", "terminal_sphere",
  /// "terminal_union", "midpoint", "target", "end".
  std::string role;
  double d_base = 0.0;
  double d_punctured = 0.0;
};

enum class RepairCase { clean, case1, case2a, case2b, case3 };

/// "Case2a-degenerate" for clean inputs, otherwise "Case1" ... "Case3".
const char* to_string(RepairCase c) noexcept;

struct RepairReport {
  Arc input_arc = Arc::single(Point(2));
  Arc output_arc = Arc::single(Point(2));
  double length_ratio = 1.0;
  /// Cone constant of the input in D and of the output in G.
  double input_cone_constant = 0.0;
  double output_cone_constant = 0.0;
  /// repair_cone(max(1, c)) with c the hint, or the measured input constant.
  double cone_bound = 0.0;
  RepairCase case_taken = RepairCase::clean;
  /// The construction ran on the reversed arc (the z2-side variant).
  bool mirrored = false;
  /// "sequence" or "union" for Case 2b.
  std::string detail;
  std::vector<TaggedPoint> y_sequence, u_sequence, v_sequence;
  double min_clearance = 0.0;
  bool bounds_ok = false;
};

/// The repair works in G = base(d) \ p; `p` must carry Validation::pass.
RepairReport repair_arc(const DomainSpec& d, const PunctureSet& p, const Arc& gamma,
                        std::optional<double> c_hint = std::nullopt);
/// Same with the punctures of `g`.
RepairReport repair_arc(const DomainSpec& g, const Arc& gamma, std::optional<double> c_hint = std::nullopt);

struct ThresholdSequence {
  std::vector<TaggedPoint> points;
  bool terminated = false;
  /// Quasihyperbolic length of the arc in D and the count bound M / log(33/32).
  double qh_length = 0.0;
  double count_bound = 0.0;
};

/// Alternating first-hit and last-exit points along `a` toward its end point,
/// which plays the part of the target ball centre. Empty when the arc never
/// reaches d_D = inner_threshold d_G.
ThresholdSequence threshold_sequence(const DomainSpec& d, const PunctureSet& p, const Arc& a,
                                     double inner_threshold = 64.0, double outer_threshold = 128.0,
                                     double sphere_frac = 1.0 / 32.0);

/// Supplies arcs in G between two G-points.
using ArcProvider = std::function<Arc(const DomainSpec& g, const Point& x, const Point& y)>;

/// Neargeodesic in G (the best arc found if the certificate is not reached).
ArcProvider neargeodesic_provider(double c = kDefaultNeargeodesicC, KOptions opts = KOptions{.max_rounds = 3});

struct TransferReport {
  Arc beta = Arc::single(Point(2));
  /// The provider arc (absent for the short-pair segment).
  std::optional<Arc> gamma;
  /// "segment", "provider", "radial+provider", "radial+provider+radial".
  std::string construction;
  /// Cone constant of gamma in G, floored at 1.
  double measured_c1 = 1.0;
  double beta_cone = 0.0;
  double bound = 0.0;
  bool ok = false;
};

/// A cone arc in D between points of D (punctures allowed), built from a G-arc
/// by radial steps of length d_D / 64 at puncture endpoints. `ok` compares the
/// cone constant in D against (65/63) c1 with 2% slack for sampling.
TransferReport john_transfer(const DomainSpec& d, const PunctureSet& p, const Point& z1, const Point& z2,
                             const ArcProvider& provider = neargeodesic_provider());

struct InnerTransferReport {
  TransferReport transfer;
  MetricBracket lambda;
  /// max(1, cone in G, l(gamma) / lambda lower of its endpoints).
  double c1 = 1.0;
  double length = 0.0;
  /// thm2_sufficiency(c1) times the lower lambda bound.
  double length_bound = 0.0;
  double cone_bound = 0.0;
  bool length_ok = false;
  bool cone_ok = false;
  /// Witness arc with l <= 2 lambda and its repair into G.
  std::optional<Arc> seed_arc;
  std::optional<RepairReport> seed_repair;
};

InnerTransferReport inner_transfer(const DomainSpec& d, const PunctureSet& p, const Point& z1, const Point& z2,
                                   const ArcProvider& provider = neargeodesic_provider(), double rel_tol = 1e-6);

/// t -> 1025 mu psi(8 t). Throws InvalidArgument if psi is not admissible.
PsiFunction psi_necessity_transform(const PsiFunction& psi);
/// t -> 1025 (mu + 2) psi1(2^15 t). Throws InvalidArgument if psi1 is not admissible.
PsiFunction psi_sufficiency_transform(const PsiFunction& psi1);

struct BaseShiftReport {
  Point x, w;
  std::optional<Point> puncture;
  double d_base_x = 0.0, d_base_w = 0.0, d_punctured_w = 0.0;
  /// d_D(x)/48 < d_D(w)/33 <= d_G(w) <= (33/31) d_D(w), each to 1e-9.
  bool clauses_ok = false;
};

/// A point w on S(x, d_D(x)/32) with d_G(w) comparable to d_D(w): opposite the
/// puncture in B(x, d_D(x)/6) if there is one, else x + (d_D(x)/32) e1.
BaseShiftReport base_shift(const DomainSpec& d, const PunctureSet& p, const Point& x);

struct SphereCheckReport {
  /// d_D(x) >= 128 d_G(x); otherwise nothing is checked.
  bool applicable = false;
  std::size_t samples = 0;
  /// min over sampled w on S(x, d_D(x)/32) of d_G(w) - d_D(w)/44.
  double worst_margin = kInfinity;
  bool ok() const noexcept { return worst_margin >= -1e-12; }
};

SphereCheckReport sphere_depth_check(const DomainSpec& d, const PunctureSet& p, const Point& x,
                                     std::size_t samples = 720);

struct Claim4Leg {
  std::size_t from = 0, to = 0;
  /// "shallow" legs compare against 256 k_D, "ball" legs against 128 mu k_D.
  std::string kind;
  double k_punctured_upper = 0.0;
  double k_base_lower = 0.0;
  double factor = 0.0;
  bool ok = false;
};

struct Claim4Report {
  Arc path = Arc::single(Point(2));
  std::vector<TaggedPoint> points;
  std::vector<Claim4Leg> legs;
  std::size_t violations = 0;
  /// d_D <= 44 d_G at the even points.
  bool depth_ok = false;
};

/// Sequence w0, w1, ... along a c-neargeodesic of D from w0 to y, with the
/// 128 threshold and exits from S(w, d_D(w)/32). Throws BudgetExhausted when no
/// c-neargeodesic is found.
Claim4Report claim4_sequence(const DomainSpec& d, const PunctureSet& p, const Point& w0, const Point& y,
                             double c = 2.0, const KOptions& opts = KOptions{.max_rounds = 4});

}  // namespace qhgeo
