#include "normtail/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace normtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_alpha(double alpha) {
  require(alpha >= 1.0 && alpha <= 2.0, "alpha must lie in [1, 2]");
}

bool is_sub_i(TailVariant v) {
  return v == TailVariant::regular_i || v == TailVariant::smooth_i;
}

bool is_sub_ii(TailVariant v) {
  return v == TailVariant::regular_ii || v == TailVariant::smooth_ii;
}

// Threshold coefficient: threshold = coef(variant, kappa, gamma) * ||sigma||_2.
double threshold_coefficient(TailVariant v, double kappa, double gamma) {
  const double e = std::exp(1.0);
  const double r2 = std::sqrt(2.0);
  switch (v) {
    case TailVariant::regular_i:
      return std::sqrt(2.0 * e * kappa) + r2 * gamma;
    case TailVariant::regular_ii:
    case TailVariant::regular_iii:
      return std::sqrt(2.0 * kappa) + r2 * gamma;
    case TailVariant::smooth_i:
      return std::sqrt(e * kappa) + gamma;
    default:
      return std::sqrt(kappa) + gamma;
  }
}

// The alpha-tail exponent term gamma_*^(2-alpha) gamma^alpha, in a form that
// survives gamma_* = +inf and gamma = 0.
double alpha_tail_term(double alpha, double gs, double gamma) {
  if (gamma == 0.0) return 0.0;
  if (alpha >= 2.0 - 1e-9) return gamma * gamma;
  if (std::isinf(gs)) return kInf;
  const double ln = (2.0 - alpha) * std::log(gs) + alpha * std::log(gamma);
  return ln > 700.0 ? kInf : std::exp(ln);
}

}  // namespace

SigmaProfile::SigmaProfile(std::vector<double> values)
    : values_(std::move(values)) {
  require(!values_.empty(), "SigmaProfile: needs at least one entry");
  double sq = 0.0;
  for (double v : values_) {
    require(std::isfinite(v) && v > 0.0,
            "SigmaProfile: entries must be positive and finite");
    sq += v * v;
    linf_ = std::max(linf_, v);
  }
  l2_ = std::sqrt(sq);
}

SigmaProfile SigmaProfile::constant(double value, std::int64_t n) {
  require(n >= 1, "SigmaProfile: length must be >= 1");
  return SigmaProfile(std::vector<double>(static_cast<size_t>(n), value));
}

double SigmaProfile::lq(double q) const { return std::exp(log_lq(q)); }

double SigmaProfile::log_lq(double q) const {
  require(q >= 1.0, "SigmaProfile::lq: q must be >= 1");
  if (std::isinf(q)) return std::log(linf_);
  // Scale by the max entry: sum of (v/max)^q stays in [1, n].
  double s = 0.0;
  for (double v : values_) s += std::pow(v / linf_, q);
  return std::log(linf_) + std::log(s) / q;
}

std::string to_string(TailVariant v) {
  switch (v) {
    case TailVariant::regular_i: return "regular_i";
    case TailVariant::regular_ii: return "regular_ii";
    case TailVariant::regular_iii: return "regular_iii";
    case TailVariant::smooth_i: return "smooth_i";
    case TailVariant::smooth_ii: return "smooth_ii";
    default: return "smooth_iii";
  }
}

TailVariant tail_variant_from_string(const std::string& s) {
  if (s == "regular_i") return TailVariant::regular_i;
  if (s == "regular_ii") return TailVariant::regular_ii;
  if (s == "regular_iii") return TailVariant::regular_iii;
  if (s == "smooth_i") return TailVariant::smooth_i;
  if (s == "smooth_ii") return TailVariant::smooth_ii;
  if (s == "smooth_iii") return TailVariant::smooth_iii;
  throw std::invalid_argument("unknown tail variant '" + s + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::quadratic: return "quadratic";
    case Regime::alpha_tail: return "alpha_tail";
    default: return "not_applicable";
  }
}

double gamma_star(double alpha, const SigmaProfile& sigma) {
  check_alpha(alpha);
  if (alpha <= 1.0 + 1e-6) return 16.0 * sigma.l2() / sigma.linf();
  if (alpha >= 2.0 - 1e-9) return kInf;
  const double astar = alpha / (alpha - 1.0);
  const double q = (alpha - 1.0) / (2.0 - alpha);
  const double r = alpha / (2.0 - alpha);
  const double ln_gs = std::log(32.0) +
                       q * (std::log(8.0 * astar) - astar * std::log(2.0)) +
                       r * (std::log(sigma.l2()) - sigma.log_lq(astar));
  return ln_gs > 700.0 ? kInf : std::exp(ln_gs);
}

TailResult tail_bound(const TailQuery& query) {
  check_alpha(query.alpha);
  require(query.kappa >= 1.0, "tail_bound: kappa must be >= 1");
  require(query.gamma >= 0.0, "tail_bound: gamma must be >= 0");
  if (is_sub_ii(query.variant))
    require(query.alpha == 2.0,
            "tail_bound: " + to_string(query.variant) + " requires alpha = 2");

  TailResult out;
  out.gamma_star = gamma_star(query.alpha, query.sigma);
  out.threshold =
      threshold_coefficient(query.variant, query.kappa, query.gamma) *
      query.sigma.l2();

  const double g = query.gamma;
  if (is_sub_i(query.variant)) {
    const double quad = g * g;
    const double tail = alpha_tail_term(query.alpha, out.gamma_star, g);
    out.regime = quad <= tail ? Regime::quadratic : Regime::alpha_tail;
    out.prob_bound = std::min(1.0, 2.0 * std::exp(-std::min(quad, tail) / 64.0));
  } else if (is_sub_ii(query.variant)) {
    out.regime = Regime::not_applicable;
    out.prob_bound = std::min(1.0, std::exp(-g * g / 3.0));
  } else {
    out.regime = Regime::not_applicable;
    out.prob_bound = std::min(1.0, std::exp(-g * g / 2.0));
  }
  return out;
}

double invert_gamma(TailVariant variant, double alpha, double kappa,
                    const SigmaProfile& sigma, double target_eps) {
  check_alpha(alpha);
  require(kappa >= 1.0, "invert_gamma: kappa must be >= 1");
  require(target_eps > 0.0, "invert_gamma: target_eps must be positive");
  if (target_eps >= 1.0) return 0.0;

  if (is_sub_ii(variant)) return std::sqrt(3.0 * std::log(1.0 / target_eps));
  if (!is_sub_i(variant)) return std::sqrt(2.0 * std::log(1.0 / target_eps));

  const auto bound_at = [&](double g) {
    TailQuery q{variant, alpha, kappa, sigma, g};
    return tail_bound(q).prob_bound;
  };
  double hi = 1.0;
  for (int it = 0; it < 300 && bound_at(hi) > target_eps; ++it) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (bound_at(mid) <= target_eps)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double scalar_bound(ScalarVariant variant, double alpha,
                    const std::vector<double>& mu,
                    const std::vector<double>& nu, double gamma) {
  check_alpha(alpha);
  require(mu.size() == nu.size(),
          "scalar_bound: mu and nu must have equal lengths");
  require(gamma >= 0.0, "scalar_bound: gamma must be >= 0");
  const SigmaProfile profile{std::vector<double>(nu)};
  if (variant == ScalarVariant::general) {
    const double gs = gamma_star(alpha, profile);
    const double quad = gamma * gamma;
    const double tail = alpha_tail_term(alpha, gs, gamma);
    return std::min(1.0, 2.0 * std::exp(-std::min(quad, tail) / 64.0));
  }
  require(alpha == 2.0, "scalar_bound: this variant requires alpha = 2");
  if (variant == ScalarVariant::subgauss)
    return std::min(1.0, std::exp(-gamma * gamma / 3.0));
  return std::min(1.0, std::exp(-gamma * gamma / 2.0));
}

double scalar_deviation_level(const std::vector<double>& mu,
                              const std::vector<double>& nu, double gamma) {
  require(mu.size() == nu.size(),
          "scalar_deviation_level: mu and nu must have equal lengths");
  double mean = 0.0, sq = 0.0;
  for (double m : mu) mean += m;
  for (double v : nu) sq += v * v;
  return mean + gamma * std::sqrt(sq);
}

double mgf_envelope(MgfVariant variant, double alpha, double nu,
                    double mean_bound, double t) {
  require(t >= 0.0, "mgf_envelope: t must be >= 0");
  require(nu > 0.0 && std::isfinite(nu), "mgf_envelope: nu must be positive");
  const double u = t * nu;
  switch (variant) {
    case MgfVariant::light_tail: {
      require(alpha > 1.0 && alpha <= 2.0,
              "mgf_envelope: light_tail requires alpha in (1, 2]");
      const double astar = alpha / (alpha - 1.0);
      double tail = 0.0;
      if (u > 0.0) {
        const double ln = astar * std::log(2.0 * u) - std::log(astar);
        tail = ln > 700.0 ? kInf : std::exp(ln);
      }
      return t * mean_bound + 8.0 * u * u + tail;
    }
    case MgfVariant::subgauss:
      return t * mean_bound + 0.75 * u * u;
    default:
      return t * mean_bound + 0.5 * u * u;
  }
}

double second_moment_bound(double kappa, const SigmaProfile& sigma) {
  require(kappa >= 1.0, "second_moment_bound: kappa must be >= 1");
  return kappa * sigma.l2() * sigma.l2();
}

}  // namespace normtail
