#include <doctest.h>

#include "normtail/norms.hpp"
#include "normtail/rng.hpp"
#include "normtail/smoothness.hpp"
#include "normtail/space.hpp"

#include <cmath>
#include <limits>

using namespace normtail;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Independent dense-grid minimizer over the smooth exponent rho (step 1e-4),
// used as the oracle for the closed-form/golden-section calculators.
double grid_min(double b, double p, bool schatten_kink) {
  const double top = std::isinf(p) ? 0.0 : 2.0 / p;
  double hi = std::isinf(p) ? 30.0 : std::min(p, 30.0);
  if (hi < 2.0) hi = 2.0;
  const double lnb = std::log(b);
  auto value = [&](double r) {
    const double lead = schatten_kink ? std::max(2.0, r - 1.0) : (r - 1.0);
    return lead * std::exp((2.0 / r - top) * lnb);
  };
  double best = value(hi);
  for (double r = 2.0; r < hi; r += 1e-4) best = std::min(best, value(r));
  return best;
}

}  // namespace

TEST_SUITE("smoothness") {

TEST_CASE("lp kappa frozen oracle values") {
  CHECK(kappa_lp(10, kInf) ==
        doctest::Approx(9.275905634371734).epsilon(1e-9));
  const KappaDetail d = kappa_lp_detail(10, kInf);
  CHECK(d.rho_opt == doctest::Approx(3.137287402466952).epsilon(1e-6));
  CHECK(kappa_lp(8, 3.0) ==
        doctest::Approx(1.9792444457656913).epsilon(1e-9));
  CHECK(kappa_lp_detail(8, 3.0).rho_opt ==
        doctest::Approx(2.4858822765732427).epsilon(1e-6));
  CHECK(kappa_lp(2, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(kappa_lp_detail(2, 2.0).rho_opt == doctest::Approx(2.0));
  // p = 2 is 1-smooth for every dimension.
  CHECK(kappa_lp(1000000, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp kappa agrees with the dense grid") {
  for (std::int64_t n : {2, 5, 17, 100, 1000}) {
    for (double p : {2.0, 2.5, 4.0, 16.0, kInf}) {
      const double mine = kappa_lp(n, p);
      const double grid = grid_min(static_cast<double>(n), p, false);
      CHECK(std::abs(mine - grid) / grid <= 1e-6);
    }
  }
}

TEST_CASE("schatten kappa frozen oracle values") {
  const double expected[][2] = {
      {2.0, 2.0},   {2.5, 2.0},          {3.0, 2.0},
      {4.0, 2.615320972023661},          {8.0, 3.9108170280178793},
      {16.0, 4.7823212691807315},        {kInf, 5.848035476425732},
  };
  for (const auto& [p, want] : expected)
    CHECK(kappa_schatten(5, 7, p) == doctest::Approx(want).epsilon(1e-9));
  // Rank-one matrices: the kink piece floors the constant at 2.
  CHECK(kappa_schatten(1, 9, kInf) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("schatten kappa agrees with the dense grid") {
  for (std::int64_t m : {2, 5, 30}) {
    for (double p : {2.0, 3.0, 8.0, kInf}) {
      const double mine = kappa_schatten(m, m + 2, p);
      const double grid = grid_min(static_cast<double>(m), p, true);
      CHECK(std::abs(mine - grid) / grid <= 1e-6);
    }
  }
}

TEST_CASE("product and sum combination rules") {
  CHECK(kappa_product(1.0, 4, kInf, false) ==
        doctest::Approx(7.536677541454882).epsilon(1e-9));
  CHECK(kappa_product_detail(1.0, 4, kInf, false).rho_opt ==
        doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-6));
  CHECK(kappa_product(1.0, 16, kInf, false) ==
        doctest::Approx(15.073355082909762).epsilon(1e-9));
  CHECK(kappa_product(1.0, 4, kInf, true) ==
        doctest::Approx(2.0 * 7.536677541454882).epsilon(1e-9));
  // At p = 2 the dimension factor vanishes and only the additive lead
  // kappa_f + rho - 1 remains (evaluated at rho = 2).
  CHECK(kappa_product(1.0, 10, 2.0, false) == doctest::Approx(2.0));
  CHECK(kappa_product_detail(1.0, 10, 2.0, false).rho_opt == 2.0);

  CHECK(kappa_sum(1.5, 3, false) == doctest::Approx(4.5));
  CHECK(kappa_sum(1.5, 3, true) == doctest::Approx(9.0));
}

TEST_CASE("space certificates") {
  const auto euclid = kappa_space(parse_space("euclidean:n=50"));
  CHECK(euclid.kappa == 1.0);
  CHECK(euclid.kappa_plus == 1.0);
  CHECK(euclid.rho == 2.0);
  CHECK(euclid.is_smooth());

  const auto lp = kappa_space(parse_space("lp:n=10,p=inf"));
  CHECK(lp.kappa == doctest::Approx(9.275905634371734).epsilon(1e-9));
  CHECK(lp.kappa_plus ==
        doctest::Approx(3.137287402466952 - 1.0).epsilon(1e-6));
  CHECK_FALSE(lp.is_smooth());

  const auto lp3 = kappa_space(parse_space("lp:n=100,p=3"));
  CHECK(lp3.kappa == doctest::Approx(2.0));
  CHECK(lp3.kappa_plus == doctest::Approx(2.0));
  CHECK(lp3.is_smooth());  // rho = p: the norm is its own witness

  const auto block = kappa_space(parse_space(
      "block:p=inf,children=(euclidean:n=1|euclidean:n=1|euclidean:n=1|"
      "euclidean:n=1)"));
  CHECK(block.kappa == doctest::Approx(7.536677541454882).epsilon(1e-9));

  // kappa_lp(4,3) bottoms out at rho = 2 (value 4^(1/3)), so the child is
  // merely regular and the sum rule doubles: 2 * m * kappa_factor.
  const double child = std::pow(4.0, 1.0 / 3.0);
  CHECK(kappa_lp(4, 3.0) == doctest::Approx(child).epsilon(1e-9));
  const auto sum = kappa_space(parse_space("sum:children=(lp:n=4,p=3|lp:n=4,p=3)"));
  CHECK(sum.kappa == doctest::Approx(4.0 * child).epsilon(1e-9));
  CHECK(sum.kappa_plus == doctest::Approx(child).epsilon(1e-9));
  CHECK(sum.rho == doctest::Approx(2.0));
}

TEST_CASE("display bounds and the dimension fallback") {
  // The schatten display bound genuinely dominates the minimized constant.
  for (std::int64_t b : {2, 5, 20, 50})
    for (double p : {2.0, 3.0, 8.0, kInf}) {
      CHECK(kappa_schatten(b, b, p) <=
            display_bound_schatten(b, b, p) * (1.0 + 1e-12));
    }
  // The lp display min(p-1, 2 ln n) is informational: it can undershoot.
  CHECK(display_bound_lp(10, kInf) == doctest::Approx(2.0 * std::log(10.0)));
  CHECK(display_bound_lp(10, kInf) < kappa_lp(10, kInf));

  const auto fb = dimension_fallback_certificate(parse_space("lp:n=7,p=4"));
  CHECK(fb.kappa == 7.0);
  CHECK(fb.kappa_plus == 1.0);
  CHECK(fb.rho == 2.0);
}

TEST_CASE("smoothness sampling accepts true certificates") {
  // Euclidean: equality in the parallelogram expansion, ratio exactly 1.
  const auto re = verify_smoothness(parse_space("euclidean:n=4"), 20000, 1);
  CHECK(re.passed);
  CHECK(re.empirical_kappa == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(re.worst_violation_ratio == re.empirical_kappa);

  for (const char* text : {"lp:n=2,p=2", "lp:n=10,p=3", "lp:n=10,p=8",
                           "lp:n=100,p=4"}) {
    const auto rep = verify_smoothness(parse_space(text), 20000, 1);
    CHECK_MESSAGE(rep.passed, text);
    CHECK(rep.empirical_kappa <= rep.claimed_kappa * (1 + 1e-7));
  }

  // Regular (non-smooth) spaces exercise the surrogate witness norm.
  for (const char* text : {"lp:n=10,p=inf", "schatten:m=3,n=4,p=inf",
                           "sum:children=(lp:n=4,p=3|lp:n=4,p=3)"}) {
    const auto rep = verify_smoothness(parse_space(text), 20000, 2);
    CHECK_MESSAGE(rep.passed, text);
    CHECK(rep.sandwich_worst <= 1.0 + 1e-9);
  }

  // Schatten with its certificate (kappa_plus = max(2, rho-1)).
  const auto rs = verify_smoothness(parse_space("schatten:m=5,n=7,p=4"),
                                    5000, 3);
  CHECK(rs.passed);
}

TEST_CASE("smoothness sampling refutes false certificates") {
  // l4 is exactly 3-smooth; claiming 2 must fail on sign-pattern pairs.
  const RegularityCertificate lie{2.0, 2.0, 4.0};
  const auto rep = verify_smoothness(parse_space("lp:n=4,p=4"), lie, 20000, 1);
  CHECK_FALSE(rep.passed);
  CHECK(rep.empirical_kappa > 2.0 * (1 + 1e-7));
  CHECK(rep.empirical_kappa <= 3.0 * (1 + 1e-6));

  CHECK_THROWS_AS(
      verify_smoothness(parse_space("lp:n=4,p=4"),
                        RegularityCertificate{0.5, 0.5, 4.0}, 100, 1),
      std::invalid_argument);
}

TEST_CASE("gradient characterizations of smoothness") {
  // Euclidean with kappa 1: both ratios are exactly 1 (equality case).
  const auto re = char_check(parse_space("euclidean:n=5"), 1.0, 20000, 1);
  CHECK(re.passed);
  CHECK(re.worst_monotone_ratio == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(re.worst_lipschitz_ratio == doctest::Approx(1.0).epsilon(1e-9));

  const auto r3 = char_check(parse_space("lp:n=6,p=3"), 2.0, 20000, 1);
  CHECK(r3.passed);
  CHECK(r3.worst_monotone_ratio <= 2.0 * (1 + 1e-7));
  CHECK(r3.worst_lipschitz_ratio <= 2.0 * (1 + 1e-7));

  // A claimed constant below the true one is refuted.
  const auto lie = char_check(parse_space("lp:n=6,p=3"), 1.5, 20000, 1);
  CHECK_FALSE(lie.passed);
  CHECK(sub(lie.witness_x, lie.witness_y).vec().cwiseAbs().maxCoeff() > 0.0);
}

}  // TEST_SUITE
