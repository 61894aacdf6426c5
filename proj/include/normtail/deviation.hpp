// normtail/deviation.hpp
//
// Large-deviation tail bounds for vector-valued martingales.
//
// Setting: S_N = sum of martingale differences xi_i in a normed space whose
// squared norm is kappa-smooth (or kappa-regular), with the conditional
// light-tail condition
//   E_{i-1} exp{ ||xi_i||^alpha / sigma_i^alpha } <= e        (alpha in [1,2]).
//
// Each variant bounds P( ||S_N|| >= threshold(gamma) ) for gamma >= 0:
//
//   variant      threshold / ||sigma||_2         probability bound
//   regular_i    sqrt(2 e kappa) + sqrt(2) gamma min(1, 2 exp{-min[g^2, g*^(2-a) g^a]/64})
//   regular_ii   sqrt(2 kappa)   + sqrt(2) gamma min(1, exp{-g^2/3})   (alpha = 2)
//   regular_iii  sqrt(2 kappa)   + sqrt(2) gamma min(1, exp{-g^2/2})   (bounded steps)
//   smooth_i     sqrt(e kappa)   + gamma         min(1, 2 exp{-min[g^2, g*^(2-a) g^a]/64})
//   smooth_ii    sqrt(kappa)     + gamma         min(1, exp{-g^2/3})   (alpha = 2)
//   smooth_iii   sqrt(kappa)     + gamma         min(1, exp{-g^2/2})   (bounded steps)
//
// where g* = gamma_star(alpha, sigma) is the crossover point between the
// quadratic and the alpha-tail regime.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace normtail {

// Per-step conditional scale parameters sigma_1..sigma_N (all positive).
class SigmaProfile {
 public:
  explicit SigmaProfile(std::vector<double> values);
  static SigmaProfile constant(double value, std::int64_t n);

  const std::vector<double>& values() const { return values_; }
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()); }
  double l2() const { return l2_; }
  double linf() const { return linf_; }
  // ||sigma||_q for q >= 1, computed in scaled form (stable for large q).
  double lq(double q) const;
  double log_lq(double q) const;

 private:
  std::vector<double> values_;
  double l2_ = 0.0;
  double linf_ = 0.0;
};

enum class TailVariant {
  regular_i,
  regular_ii,
  regular_iii,
  smooth_i,
  smooth_ii,
  smooth_iii,
};

enum class Regime { quadratic, alpha_tail, not_applicable };

std::string to_string(TailVariant v);
TailVariant tail_variant_from_string(const std::string& s);
std::string to_string(Regime r);

struct TailQuery {
  TailVariant variant = TailVariant::smooth_iii;
  double alpha = 2.0;   // light-tail exponent in [1, 2]
  double kappa = 1.0;   // smoothness/regularity constant, >= 1
  SigmaProfile sigma;   // per-step scales
  double gamma = 0.0;   // deviation level, >= 0
};

struct TailResult {
  double threshold = 0.0;   // deviation threshold ||S_N|| is compared against
  double prob_bound = 1.0;  // the probability bound, always in (0, 1]
  double gamma_star = 0.0;  // regime crossover (+inf when alpha = 2)
  Regime regime = Regime::not_applicable;
};

// Regime crossover point:
//   alpha in (1,2): 32 [8 a* / 2^a*]^((alpha-1)/(2-alpha))
//                      * [||sigma||_2 / ||sigma||_a*]^(alpha/(2-alpha)),
//                   a* = alpha/(alpha-1), evaluated in log space;
//   alpha <= 1+1e-6: the alpha->1 limit 16 ||sigma||_2 / ||sigma||_inf;
//   alpha >= 2-1e-9: +inf.
// Always >= 16.
double gamma_star(double alpha, const SigmaProfile& sigma);

// Evaluates one variant.  The *_ii variants require alpha = 2; the *_iii
// variants additionally presuppose per-step boundedness ||xi_i|| <= sigma_i,
// which is the caller's responsibility to certify (the simulator does).
TailResult tail_bound(const TailQuery& query);

// Smallest gamma with prob_bound <= target_eps (0 when target_eps >= 1).
// Closed form for the *_ii / *_iii variants; bisection to 1e-10 otherwise.
double invert_gamma(TailVariant variant, double alpha, double kappa,
                    const SigmaProfile& sigma, double target_eps);

// --- scalar martingale bounds ----------------------------------------------
//
// For real-valued martingales with per-step conditional means mu_i and
// scales nu_i: P( sum (xi_i - mu_i) >= gamma ||nu||_2 ) is bounded by
//   general:  min(1, 2 exp{-min[g^2, g*^(2-a) g^a]/64})
//   subgauss: min(1, exp{-g^2/3})      (alpha = 2 light tail)
//   bounded:  min(1, exp{-g^2/2})      (|xi_i - mu_i| <= nu_i)

enum class ScalarVariant { general, subgauss, bounded };

double scalar_bound(ScalarVariant variant, double alpha,
                    const std::vector<double>& mu,
                    const std::vector<double>& nu, double gamma);

// The deviation level the scalar bound refers to: sum(mu) + gamma ||nu||_2.
double scalar_deviation_level(const std::vector<double>& mu,
                              const std::vector<double>& nu, double gamma);

// --- per-step MGF envelopes --------------------------------------------------
//
// Conditional log-MGF envelopes ln E exp{t xi} <= t mean_bound + psi(t nu):
//   light_tail (alpha in (1,2]): psi(u) = 8 u^2 + (2^a*/a*) u^a*
//   subgauss   (alpha = 2):      psi(u) = (3/4) u^2
//   bounded    (|xi| <= nu):     psi(u) = u^2 / 2

enum class MgfVariant { light_tail, subgauss, bounded };

double mgf_envelope(MgfVariant variant, double alpha, double nu,
                    double mean_bound, double t);

// E ||S_N||^2 <= kappa * sum_i sigma_i^2.
double second_moment_bound(double kappa, const SigmaProfile& sigma);

}  // namespace normtail
