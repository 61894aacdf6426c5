// normtail/smoothness.hpp
//
// Smoothness and regularity constants of squared norms.
//
// p(x) = ||x||^2 is kappa-smooth when
//   p(x + y) <= p(x) + <grad p(x), y> + kappa * p(y)        (for all x, y)
// and the norm is kappa-regular when some kappa_plus-smooth norm ||.||_+
// with kappa_plus <= kappa satisfies
//   ||x||^2 <= ||x||_+^2 <= (kappa / kappa_plus) ||x||^2.
//
// A RegularityCertificate records (kappa, kappa_plus, rho): the regularity
// constant, the smoothness constant of the witness norm, and the exponent
// at which the minimization producing the certificate was attained.

#pragma once

#include "normtail/space.hpp"

#include <cstdint>

namespace normtail {

struct RegularityCertificate {
  double kappa = 1.0;       // regularity constant of the space's own norm
  double kappa_plus = 1.0;  // smoothness constant of the witness norm
  double rho = 2.0;         // exponent attaining the certificate minimum

  bool is_smooth() const { return kappa == kappa_plus; }
};

struct KappaDetail {
  double kappa = 1.0;
  double rho_opt = 2.0;
};

// min over rho in [2, min(p, cap)] of (rho - 1) n^(2/rho - 2/p), with
// cap = max(20, 2 ln n + 4); 2/p reads as 0 at p = inf.
double kappa_lp(std::int64_t n, double p);
KappaDetail kappa_lp_detail(std::int64_t n, double p);

// min over rho of max(2, rho - 1) * min(m,n)^(2/rho - 2/p); the objective
// has a kink at rho = 3, handled piecewise.
double kappa_schatten(std::int64_t m, std::int64_t n, double p);
KappaDetail kappa_schatten_detail(std::int64_t m, std::int64_t n, double p);

// Product of m factors, each kappa_factor-smooth (or -regular), combined
// with an l_p block norm: min over rho of
// (kappa_factor + rho - 1) m^(2/rho - 2/p), doubled when the factors are
// merely regular.
double kappa_product(double kappa_factor, std::int64_t m, double p,
                     bool factors_regular);
KappaDetail kappa_product_detail(double kappa_factor, std::int64_t m, double p,
                                 bool factors_regular);

// Sum of m norms on one space, each factor kappa_factor-smooth/regular:
// m * kappa_factor, doubled when the factors are merely regular.
double kappa_sum(double kappa_factor, std::int64_t m, bool factors_regular);

// Certificate for a whole space descriptor.  Euclidean is exactly 1-smooth;
// Lp/Schatten use the calculators above; BlockLp/SumOfNorms combine child
// certificates (doubling when any child is merely regular).
RegularityCertificate kappa_space(const SpaceDescriptor& space);

// Closed-form display bounds reported for context.  The l_p display
// min(p - 1, 2 ln n) is *informational only* (it undershoots the minimized
// formula for p = inf at moderate n); the Schatten display
// min(max(2, p - 1), (2 ln(min(m,n) + 2) - 1) e) genuinely dominates.
double display_bound_lp(std::int64_t n, double p);
double display_bound_schatten(std::int64_t m, std::int64_t n, double p);

// Dimension fallback: every norm on an n-dimensional space is n-regular.
RegularityCertificate dimension_fallback_certificate(
    const SpaceDescriptor& space);

// --- empirical verification -------------------------------------------------

struct SmoothnessReport {
  std::int64_t trials = 0;
  double worst_violation_ratio = 0.0;  // max over pairs of the smoothness quotient
  double empirical_kappa = 0.0;        // same quantity, reported as kappa
  double claimed_kappa = 0.0;          // the certificate's kappa_plus
  double sandwich_worst = 0.0;         // worst two-sided sandwich ratio (<= 1 ok)
  bool passed = false;
};

// Samples `trials` pairs (x, y) (random Gaussian pairs at several relative
// scales plus targeted extremal patterns) and checks the smoothness
// inequality for the certificate's witness norm with constant
// cert.kappa_plus, together with the equivalence sandwich against the space's own
// norm.  Passes when empirical_kappa <= claimed_kappa * (1 + 1e-7) and the
// sandwich holds to 1e-9.
SmoothnessReport verify_smoothness(const SpaceDescriptor& space,
                                   const RegularityCertificate& cert,
                                   std::int64_t trials, std::uint64_t seed);

// Convenience overload: certificate from kappa_space(space).
SmoothnessReport verify_smoothness(const SpaceDescriptor& space,
                                   std::int64_t trials, std::uint64_t seed);

struct CharCheckReport {
  bool passed = false;
  double claimed_kappa = 0.0;
  double worst_monotone_ratio = 0.0;   // <grad p(x)-grad p(y), x-y> / (2||x-y||^2)
  double worst_lipschitz_ratio = 0.0;  // ||grad p(x)-grad p(y)||_* / (2||x-y||)
  std::int64_t trials = 0;
  Point witness_x;  // pair attaining the worst ratio
  Point witness_y;
};

// Tests the gradient-difference characterizations of kappa-smoothness on
// sampled pairs (both normalized so the Euclidean case sits exactly at 1).
// A false claim (kappa below the true smoothness constant) is refuted by
// adversarial sign-pattern pairs; see the tests for the witness family.
CharCheckReport char_check(const SpaceDescriptor& space, double kappa,
                           std::int64_t trials, std::uint64_t seed);

}  // namespace normtail
