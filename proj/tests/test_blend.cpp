#include <doctest.h>

#include "normtail/blend.hpp"
#include "normtail/norms.hpp"
#include "normtail/rng.hpp"
#include "normtail/space.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace normtail;

namespace {

Point vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return Point(v);
}

}  // namespace

TEST_SUITE("blend") {

TEST_CASE("interpolating toward a matching Euclidean proxy") {
  const SpaceDescriptor base = parse_space("lp:n=2,p=inf");
  const SpaceDescriptor pi = parse_space("euclidean:n=2");
  // The proxy satisfies ||x||_inf <= ||x||_2 <= sqrt(2) ||x||_inf, so the
  // proxy constant is mu_pi = 2. With mu = 2 the blend collapses onto the
  // proxy itself: gamma = 1 and q == ||.||_2.
  const BlendNorm b2 = blend_smooth_norm(base, pi, 2.0);
  CHECK(b2.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(b2.mu == doctest::Approx(2.0));
  CHECK(b2.q_primal(vec2(1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(b2.q_primal(vec2(1.0, 1.0)) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(b2.q_primal(vec2(-3.0, 4.0)) == doctest::Approx(5.0).epsilon(1e-6));

  // Requesting a looser ratio interpolates part-way: gamma in (0, 1) and the
  // blended norm is sandwiched between the base norm and sqrt(mu) times it.
  const BlendNorm b4 = blend_smooth_norm(base, pi, 4.0);
  CHECK(b4.gamma == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  CounterRng rng(11, 0);
  for (int t = 0; t < 200; ++t) {
    Eigen::VectorXd v(2);
    v << rng.normal(), rng.normal();
    const Point x{v};
    const double base_n = norm(base, x);
    if (base_n < 1e-9) continue;
    const double q = b4.q_primal(x);
    CHECK(q >= base_n * (1.0 - 1e-6));
    CHECK(q <= std::sqrt(4.0 / 3.0) * base_n * (1.0 + 1e-6));
  }
}

TEST_CASE("dual-side value at a known point") {
  const SpaceDescriptor base = parse_space("lp:n=2,p=inf");
  const SpaceDescriptor pi = parse_space("euclidean:n=2");
  const BlendNorm b = blend_smooth_norm(base, pi, 2.0);
  // When the blend collapses onto the Euclidean proxy the dual is Euclidean
  // as well.
  CHECK(b.q_star(vec2(3.0, 4.0)) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("input validation") {
  const SpaceDescriptor base = parse_space("lp:n=2,p=inf");
  const SpaceDescriptor pi = parse_space("euclidean:n=2");
  CHECK_THROWS_AS(blend_smooth_norm(base, pi, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(blend_smooth_norm(base, pi, 0.5), std::invalid_argument);

  // Proxy that fails the required sandwich ||x|| <= pi(x): l-inf never
  // dominates the Euclidean norm on R^2.
  const SpaceDescriptor e2 = parse_space("euclidean:n=2");
  const SpaceDescriptor linf = parse_space("lp:n=2,p=inf");
  CHECK_THROWS_AS(blend_smooth_norm(e2, linf, 2.0), std::invalid_argument);

  // The dual-side numerics are dense; large dimensions are rejected.
  const SpaceDescriptor big = parse_space("lp:n=9,p=inf");
  const SpaceDescriptor bigpi = parse_space("euclidean:n=9");
  CHECK_THROWS_AS(blend_smooth_norm(big, bigpi, 4.0), std::invalid_argument);
}

}  // TEST_SUITE
