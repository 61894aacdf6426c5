#include <doctest.h>

#include "normtail/norms.hpp"
#include "normtail/rng.hpp"
#include "normtail/space.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

using namespace normtail;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

// Directional derivative of ||x||^2 by central differences.
double fd_directional(const SpaceDescriptor& space, const Point& x,
                      const Point& y, double h) {
  const double fp = norm(space, add(x, scale(h, y)));
  const double fm = norm(space, add(x, scale(-h, y)));
  return (fp * fp - fm * fm) / (2.0 * h);
}

void check_grad_fd(const SpaceDescriptor& space, std::uint64_t seed,
                   int points, double tol) {
  CounterRng rng(seed, 0x67726164);
  for (int t = 0; t < points; ++t) {
    const Point x = gaussian_point(space, rng);
    const Point y = gaussian_point(space, rng);
    const Point g = grad_sq_norm(space, x);
    const double analytic = inner(g, y);
    const double numeric = fd_directional(space, x, y, 1e-5);
    const double scale_ref =
        std::max({1.0, std::abs(analytic), std::abs(numeric)});
    CHECK(std::abs(analytic - numeric) / scale_ref <= tol);
  }
}

}  // namespace

TEST_SUITE("norms") {

TEST_CASE("vector lp norms at hand values") {
  const Point x(vec2(3.0, -4.0));
  CHECK(norm(parse_space("euclidean:n=2"), x) == doctest::Approx(5.0));
  CHECK(norm(parse_space("lp:n=2,p=2"), x) == doctest::Approx(5.0));
  CHECK(norm(parse_space("lp:n=2,p=inf"), x) == doctest::Approx(4.0));
  CHECK(detail::lp_norm(vec2(3.0, -4.0), 1.0) == doctest::Approx(7.0));
  CHECK(norm(parse_space("lp:n=2,p=4"), x) ==
        doctest::Approx(std::pow(81.0 + 256.0, 0.25)).epsilon(1e-14));
}

TEST_CASE("huge exponents stay finite via max-scaling") {
  Eigen::VectorXd v(2);
  v << 1e300, 1e300;
  const double n = detail::lp_norm(v, 200.0);
  CHECK(std::isfinite(n));
  CHECK(n == doctest::Approx(1e300 * std::pow(2.0, 1.0 / 200.0)).epsilon(1e-12));
}

TEST_CASE("schatten norms through singular values") {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(norm(parse_space("schatten:m=2,n=2,p=2"), Point(d)) ==
        doctest::Approx(5.0));
  CHECK(norm(parse_space("schatten:m=2,n=2,p=inf"), Point(d)) ==
        doctest::Approx(4.0));
  CHECK(dual_norm(parse_space("schatten:m=2,n=2,p=inf"), Point(d)) ==
        doctest::Approx(7.0));  // dual of spectral norm is trace norm

  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(3, 2);
  r(0, 1) = 2.0;  // single singular value 2
  CHECK(norm(parse_space("schatten:m=3,n=2,p=3"), Point(r)) ==
        doctest::Approx(2.0));

  // Unitary invariance: rotating both sides leaves the norm alone.
  CounterRng rng(11, 0);
  Eigen::MatrixXd x(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = rng.normal();
  Eigen::MatrixXd q(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q(i, j) = rng.normal();
  const Eigen::MatrixXd qq = Eigen::HouseholderQR<Eigen::MatrixXd>(q)
                                 .householderQ();
  const auto sp = parse_space("schatten:m=3,n=3,p=4");
  CHECK(norm(sp, Point(Eigen::MatrixXd(qq * x))) ==
        doctest::Approx(norm(sp, Point(x))).epsilon(1e-12));
}

TEST_CASE("block and sum norms compose") {
  const auto block = parse_space("block:p=inf,children=(euclidean:n=2|euclidean:n=2)");
  const Point x(std::vector<Point>{Point(vec2(3, 4)), Point(vec2(1, 1))});
  CHECK(norm(block, x) == doctest::Approx(5.0));

  const auto sum = parse_space("sum:children=(lp:n=2,p=2|lp:n=2,p=inf)");
  CHECK(norm(sum, Point(vec2(3, -4))) == doctest::Approx(5.0 + 4.0));
}

TEST_CASE("duality pairs satisfy Hoelder with equality witnesses") {
  // <x, xi> <= ||x|| * ||xi||_* with equality for aligned powers.
  const auto sp = parse_space("lp:n=2,p=4");
  const Point x(vec2(1.0, 2.0));
  // xi_i = sign(x_i) |x_i|^(p-1) is the aligned dual vector for lp.
  const Point xi(vec2(1.0, 8.0));
  CHECK(inner(x, xi) ==
        doctest::Approx(norm(sp, x) * dual_norm(sp, xi)).epsilon(1e-12));

  // Euclidean spaces are self-dual.
  const auto e = parse_space("euclidean:n=2");
  CHECK(dual_norm(e, x) == doctest::Approx(norm(e, x)).epsilon(1e-15));

  // Dual of a sum of m identical norms is (child dual) / m.
  const auto sum = parse_space("sum:children=(lp:n=2,p=2|lp:n=2,p=2)");
  CHECK(dual_norm(sum, x) ==
        doctest::Approx(x.vec().norm() / 2.0).epsilon(1e-14));
  const auto mixed = parse_space("sum:children=(lp:n=2,p=2|lp:n=2,p=inf)");
  CHECK_THROWS_AS(dual_norm(mixed, x), std::invalid_argument);
}

TEST_CASE("gradient of the squared norm matches finite differences") {
  check_grad_fd(parse_space("euclidean:n=6"), 1, 25, 1e-7);
  check_grad_fd(parse_space("lp:n=6,p=3"), 2, 25, 1e-6);
  check_grad_fd(parse_space("lp:n=6,p=2.5"), 3, 25, 1e-6);
  check_grad_fd(parse_space("schatten:m=3,n=4,p=4"), 4, 25, 1e-6);
  check_grad_fd(parse_space("block:p=4,children=(lp:n=3,p=3|euclidean:n=2)"),
                5, 25, 1e-6);
}

TEST_CASE("gradient edge cases") {
  const auto e = parse_space("euclidean:n=3");
  const Point g = grad_sq_norm(e, Point(Eigen::VectorXd(Eigen::VectorXd::Zero(3))));
  CHECK(g.vec().cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXd v(3);
  v << 1.0, -2.0, 0.5;
  const Point ge = grad_sq_norm(e, Point(Eigen::VectorXd(v)));
  CHECK((ge.vec() - 2.0 * v).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(grad_sq_norm(parse_space("lp:n=3,p=inf"), Point(v)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      grad_sq_norm(parse_space("sum:children=(lp:n=3,p=2|lp:n=3,p=2)"),
                   Point(v)),
      std::invalid_argument);
}

TEST_CASE("symmetric embedding transfers schatten norms") {
  CounterRng rng(21, 0);
  Eigen::MatrixXd x(3, 5);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 5; ++j) x(i, j) = rng.normal();
  const Eigen::MatrixXd s = embed_symmetric(x);
  CHECK(s.rows() == 8);
  CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.topLeftCorner(3, 3).cwiseAbs().maxCoeff() == 0.0);
  for (double p : {2.0, 3.0, std::numeric_limits<double>::infinity()}) {
    const auto rect = Schatten{3, 5, p};
    const auto big = Schatten{8, 8, p};
    const double lhs = norm(SpaceDescriptor(rect), Point(x));
    const double factor = std::isinf(p) ? 1.0 : std::pow(2.0, -1.0 / p);
    const double rhs = factor * norm(SpaceDescriptor(big), Point(s));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("huber values, branches, and gradient") {
  const auto e = parse_space("euclidean:n=2");
  const double beta = 2.0;
  const Point small(vec2(0.6, 0.8));  // r = 1 <= beta
  CHECK(huber(e, beta, small) == doctest::Approx(1.0 / (2.0 * beta)));
  const Point big(vec2(3.0, 4.0));  // r = 5 > beta
  CHECK(huber(e, beta, big) == doctest::Approx(5.0 - beta / 2.0));
  // Continuity at the knee r = beta.
  const Point knee(vec2(1.2, 1.6));
  CHECK(huber(e, beta, knee) == doctest::Approx(beta / 2.0).epsilon(1e-14));
  CHECK_THROWS_AS(huber(e, 0.0, small), std::invalid_argument);

  // Gradient by finite differences on both branches.
  const auto sp = parse_space("lp:n=4,p=3");
  CounterRng rng(31, 0);
  for (int t = 0; t < 20; ++t) {
    const Point xi = scale(t % 2 ? 3.0 : 0.2, gaussian_point(sp, rng));
    const Point y = gaussian_point(sp, rng);
    const Point g = huber_grad(sp, 1.0, xi);
    const double h = 1e-6;
    const double numeric = (huber(sp, 1.0, add(xi, scale(h, y))) -
                            huber(sp, 1.0, add(xi, scale(-h, y)))) /
                           (2.0 * h);
    CHECK(inner(g, y) == doctest::Approx(numeric).epsilon(1e-5));
  }
}

TEST_CASE("huber is 1-Lipschitz and dominates the pairing") {
  const auto sp = parse_space("lp:n=5,p=2.5");
  CounterRng rng(41, 0);
  for (int t = 0; t < 500; ++t) {
    const double beta = std::exp(rng.uniform() * 4.0 - 2.0);
    const Point xi = gaussian_point(sp, rng);
    const Point eta = scale(t % 3 == 0 ? 0.1 : 1.0, gaussian_point(sp, rng));
    const double lhs =
        std::abs(huber(sp, beta, add(xi, eta)) - huber(sp, beta, xi));
    CHECK(lhs <= norm(sp, eta) + 1e-10);

    Point xdir = gaussian_point(sp, rng);
    const double dn = dual_norm(sp, xdir);
    if (dn > 1e-12) {
      xdir = scale(1.0 / dn, xdir);
      CHECK(inner(xdir, xi) <= beta / 2.0 + huber(sp, beta, xi) + 1e-10);
    }
  }
}

}  // TEST_SUITE
