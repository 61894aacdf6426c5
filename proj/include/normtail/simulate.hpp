// normtail/simulate.hpp
//
// Seeded Monte Carlo harness for the martingale tail bounds.
//
// A scheme generates martingale-difference increments together with a
// certificate of the light-tail condition it satisfies (alpha, per-step
// scales, boundedness).  The harness accumulates S_N over many trials,
// counts exceedances of the analytic thresholds, and reports empirical
// frequencies with exact binomial upper confidence limits next to the
// analytic bounds.
//
// Determinism: every (seed, trial, step) triple owns a counter-based RNG
// substream, and per-trial statistics are reduced block-by-block over a
// fixed partition into 64 blocks combined in block order, so reports are
// bit-identical for any thread count.

#pragma once

#include "normtail/deviation.hpp"
#include "normtail/rng.hpp"
#include "normtail/space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace normtail {

// Step i <= n emits +/- e_i in R^n: the l1 norm of the partial sum is
// exactly k after k steps, witnessing that dimension-free concentration
// needs smoothness (kappa for l1 can only be the dimension fallback).
struct RademacherBasis {
  int n = 1;
};

// +/- sigma * u for a fixed unit-norm direction u in an arbitrary space.
struct FixedDirectionRademacher {
  SpaceDescriptor space;
  Point direction;  // normalized on construction via make_fixed_rademacher
  double sigma = 1.0;
};

// i.i.d. standard normal coordinates in R^n (times an optional scale);
// satisfies the alpha = 2 light-tail condition with
// sigma = scale / sqrt(s), s = (1 - exp(-2/n))/2, and is unbounded.
struct GaussianIso {
  int n = 1;
  double scale = 1.0;
};

// sigma times a random-sign, norm-one random direction in the given space:
// bounded increments with ||xi_i|| = sigma exactly.
struct BoundedSphere {
  SpaceDescriptor space;
  double sigma = 1.0;
};

using Scheme = std::variant<RademacherBasis, FixedDirectionRademacher,
                            GaussianIso, BoundedSphere>;

// Normalizes the direction (throws on zero) and validates shapes.
FixedDirectionRademacher make_fixed_rademacher(const SpaceDescriptor& space,
                                               const Point& direction,
                                               double sigma);

struct ConditionCertificate {
  double alpha = 2.0;
  SigmaProfile sigma;
  bool bounded = false;
};

// The light-tail certificate a scheme carries for an N-step horizon.
ConditionCertificate certify_condition(const Scheme& scheme, std::int64_t N);

// The increment at 1-based step i; (seed, trial, step) should key `rng`.
Point draw_increment(const Scheme& scheme, std::int64_t step, CounterRng& rng);

struct SimConfig {
  Scheme scheme;
  // Norm used to evaluate ||S_N||.  Defaults: the scheme's own space
  // (fixed-rademacher / bounded-sphere), Euclidean{n} (gaussian-iso), or
  // the l1 norm (rademacher-basis).
  std::optional<SpaceDescriptor> space;
  std::int64_t trials = 1;
  std::int64_t N = 1;
  std::vector<double> gammas;
  std::optional<TailVariant> variant;  // default: certified variant
  // Declaration overrides for user-supplied conditions; any override marks
  // the report "uncertified".
  std::optional<double> kappa_override;
  std::optional<double> alpha_override;
  std::optional<std::vector<double>> sigma_override;
  std::optional<bool> bounded_override;
  std::uint64_t seed = 1;
  int threads = 1;
  double ci_level = 0.999;
};

struct GammaRow {
  double gamma = 0.0;
  double threshold = 0.0;
  std::int64_t hits = 0;
  double freq = 0.0;
  double freq_upper_conf = 0.0;  // exact binomial upper limit at ci_level
  double analytic_bound = 1.0;
  Regime regime = Regime::not_applicable;
};

struct SimReport {
  std::string scheme_text;
  std::string space_text;
  std::string variant;
  double alpha = 2.0;
  double kappa = 1.0;
  std::int64_t N = 0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double ci_level = 0.999;
  double sigma_l2 = 0.0;
  bool certified = true;
  std::vector<GammaRow> rows;
  double mean_sq_norm = 0.0;
  double mean_sq_stderr = 0.0;
  double second_moment_bound = 0.0;
  double norm_min = 0.0;
  double norm_max = 0.0;
  double elapsed_seconds = 0.0;  // never printed: reports stay byte-stable
};

SimReport run(const SimConfig& config);

// Exact (Clopper-Pearson style) one-sided upper confidence limit: the
// smallest q with P(Binomial(trials, q) <= hits) <= 1 - level, via the
// incomplete beta inverse.  hits = trials gives 1.
double binomial_upper_ci(std::int64_t hits, std::int64_t trials, double level);

// Scheme text forms: "rademacher-basis:n=100", "fixed-rademacher:sigma=1",
// "gaussian-iso:n=5" or "gaussian-iso:n=5,scale=2", "bounded-sphere:sigma=1".
// The fixed-rademacher / bounded-sphere forms take their space (and optional
// direction) from the surrounding SimConfig; parse_scheme applies them.
Scheme parse_scheme(const std::string& text,
                    const std::optional<SpaceDescriptor>& space,
                    const std::optional<Point>& direction);
std::string format_scheme(const Scheme& scheme);

}  // namespace normtail
