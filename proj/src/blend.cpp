#include "normtail/blend.hpp"

#include "normtail/norms.hpp"
#include "normtail/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace normtail {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

double BlendNorm::q_star(const Point& xi) const {
  const double a = dual_norm(pi, xi);
  const double b = dual_norm(base, xi);
  return std::sqrt(gamma * a * a + (1.0 - gamma) * b * b);
}

double BlendNorm::q_primal(const Point& x, int directions,
                           std::uint64_t seed) const {
  check_point(base, x);
  require(directions > 0, "q_primal: directions must be positive");
  const Eigen::Index d = x.vec().size();

  const auto objective = [&](const Eigen::VectorXd& xi) {
    const double denom = q_star(Point(Eigen::VectorXd(xi)));
    if (!(denom > 0.0)) return -1.0;
    return x.vec().dot(xi) / denom;
  };

  CounterRng rng(seed, 0xb1e4dULL);
  Eigen::VectorXd best_xi = Eigen::VectorXd::Zero(d);
  double best = -1.0;
  Eigen::VectorXd cand(d);
  for (int k = 0; k < directions; ++k) {
    for (Eigen::Index i = 0; i < d; ++i) cand[i] = rng.normal();
    const double v = objective(cand);
    if (v > best) {
      best = v;
      best_xi = cand;
    }
  }

  // Coordinate pattern search with a shrinking step around the best ray.
  double step = 0.5 * std::max(1.0, best_xi.cwiseAbs().maxCoeff());
  for (int rounds = 0; step > 1e-10 && rounds < 100000; ++rounds) {
    bool improved = false;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (double s : {step, -step}) {
        cand = best_xi;
        cand[i] += s;
        const double v = objective(cand);
        if (v > best) {
          best = v;
          best_xi = cand;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::max(best, 0.0);
}

BlendNorm blend_smooth_norm(const SpaceDescriptor& base,
                            const SpaceDescriptor& pi, double mu) {
  validate_space(base);
  validate_space(pi);
  require(shape_signature(base) == shape_signature(pi),
          "blend_smooth_norm: base and pi must share one ambient space");
  require(shape_signature(base)[0] == 'v',
          "blend_smooth_norm: only vector-shaped spaces are supported");
  require(space_dim(base) <= 4,
          "blend_smooth_norm: desk-scale construction, dimension <= 4");
  require(mu > 1.0, "blend_smooth_norm: mu must exceed 1");

  // Audit the declared sandwich ||x|| <= pi(x) <= sqrt(mu) ||x|| on a
  // deterministic direction sample.
  const double root_mu = std::sqrt(mu);
  CounterRng rng(17, 0x5a4dULL);
  const Eigen::Index d = space_dim(base);
  for (int k = 0; k < 2000; ++k) {
    Eigen::VectorXd v(d);
    for (Eigen::Index i = 0; i < d; ++i) v[i] = rng.normal();
    const Point x{Eigen::VectorXd(v)};
    const double nb = norm(base, x);
    const double np = norm(pi, x);
    if (!(nb <= np * (1.0 + 1e-9)) || !(np <= root_mu * nb * (1.0 + 1e-9)))
      throw std::invalid_argument(
          "blend_smooth_norm: pi violates the sandwich ||x|| <= pi(x) <= "
          "sqrt(mu)||x|| on a sampled direction");
  }

  BlendNorm out;
  out.base = base;
  out.pi = pi;
  out.mu = mu;
  out.gamma = 1.0 / (mu - 1.0);
  return out;
}

}  // namespace normtail
