#include <doctest.h>

#include "normtail/rng.hpp"
#include "normtail/space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

using namespace normtail;

TEST_SUITE("space") {

TEST_CASE("descriptor text round trips") {
  for (const char* text : {
           "euclidean:n=5",
           "lp:n=10,p=inf",
           "lp:n=3,p=2.5",
           "schatten:m=5,n=7,p=3",
           "block:p=inf,children=(euclidean:n=2|lp:n=3,p=4)",
           "block:p=2,children=(schatten:m=2,n=2,p=inf|euclidean:n=1)",
           "sum:children=(lp:n=4,p=3|lp:n=4,p=8)",
       }) {
    const SpaceDescriptor s = parse_space(text);
    CHECK(format_space(s) == text);
    CHECK(format_space(parse_space(format_space(s))) == text);
  }
}

TEST_CASE("descriptor validation rejects bad input") {
  CHECK_THROWS_AS(parse_space("lp:n=10,p=1.5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_space("lp:n=0,p=2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_space("lp:n=10"), std::invalid_argument);
  CHECK_THROWS_AS(parse_space("banana:n=3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_space("block:p=2,children=()"), std::invalid_argument);
  // Sum children must share one ambient shape.
  CHECK_THROWS_AS(parse_space("sum:children=(lp:n=4,p=3|lp:n=5,p=3)"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_space("schatten:m=2,n=2,p=0.5"),
                  std::invalid_argument);
}

TEST_CASE("dimension and shape signatures") {
  CHECK(space_dim(parse_space("euclidean:n=5")) == 5);
  CHECK(space_dim(parse_space("schatten:m=5,n=7,p=3")) == 35);
  CHECK(space_dim(parse_space(
            "block:p=inf,children=(euclidean:n=2|lp:n=3,p=4)")) == 5);
  CHECK(space_dim(parse_space("sum:children=(lp:n=4,p=3|lp:n=4,p=8)")) == 4);

  CHECK(shape_signature(parse_space("lp:n=5,p=2")) == "v5");
  CHECK(shape_signature(parse_space("schatten:m=3,n=4,p=2")) == "m3x4");
  CHECK(shape_signature(parse_space(
            "block:p=2,children=(euclidean:n=2|schatten:m=2,n=2,p=2)")) ==
        "(v2|m2x2)");
  CHECK(shape_signature(parse_space("sum:children=(lp:n=4,p=3|lp:n=4,p=8)")) ==
        "v4");
}

TEST_CASE("point shape checking") {
  const auto vec_space = parse_space("lp:n=3,p=2");
  const auto mat_space = parse_space("schatten:m=2,n=3,p=2");
  CHECK_NOTHROW(check_point(vec_space, Point(Eigen::VectorXd(Eigen::VectorXd::Zero(3)))));
  CHECK_THROWS_AS(check_point(vec_space, Point(Eigen::VectorXd(Eigen::VectorXd::Zero(4)))),
                  std::invalid_argument);
  CHECK_THROWS_AS(check_point(vec_space, Point(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 3)))),
                  std::invalid_argument);
  CHECK_NOTHROW(check_point(mat_space, Point(Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 3)))));
  CHECK_THROWS_AS(check_point(mat_space, Point(Eigen::MatrixXd(Eigen::MatrixXd::Zero(3, 2)))),
                  std::invalid_argument);
}

TEST_CASE("arithmetic on tuple points") {
  const auto space =
      parse_space("block:p=2,children=(euclidean:n=2|euclidean:n=2)");
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 2.0;
  b << -3.0, 5.0;
  const Point x(std::vector<Point>{Point(a), Point(b)});
  const Point y = scale(2.0, x);
  CHECK(y.children()[0].vec()[1] == 4.0);
  const Point z = add(x, y);
  CHECK(z.children()[1].vec()[0] == -9.0);
  const Point w = sub(z, x);
  CHECK(w.children()[1].vec()[1] == 10.0);
  CHECK(inner(x, x) == doctest::Approx(1 + 4 + 9 + 25).epsilon(1e-14));

  Point acc = zero_point(space);
  add_in_place(acc, x);
  add_in_place(acc, x);
  CHECK(inner(acc, acc) == doctest::Approx(4.0 * inner(x, x)).epsilon(1e-14));
}

TEST_CASE("gaussian points are deterministic in the seed") {
  const auto space = parse_space("block:p=2,children=(lp:n=3,p=4|schatten:m=2,n=2,p=3)");
  CounterRng r1(42, 7), r2(42, 7), r3(43, 7);
  const Point a = gaussian_point(space, r1);
  const Point b = gaussian_point(space, r2);
  const Point c = gaussian_point(space, r3);
  CHECK(inner(a, a) == inner(b, b));
  CHECK(sub(a, b).children()[0].vec().cwiseAbs().maxCoeff() == 0.0);
  CHECK(inner(a, a) != inner(c, c));
}

TEST_CASE("point text io round trips") {
  const auto space = parse_space("block:p=2,children=(lp:n=3,p=4|schatten:m=2,n=2,p=3)");
  CounterRng rng(5, 1);
  const Point x = gaussian_point(space, rng);
  std::stringstream ss;
  write_point(ss, x);
  const Point y = read_point(ss, space);
  CHECK(inner(sub(x, y), sub(x, y)) == 0.0);

  // Sum points carry the child shape.
  const auto sum_space = parse_space("sum:children=(lp:n=4,p=3|lp:n=4,p=8)");
  CounterRng rng2(6, 1);
  const Point sx = gaussian_point(sum_space, rng2);
  CHECK(sx.is_vector());
  CHECK(sx.vec().size() == 4);
  std::stringstream s2;
  write_point(s2, sx);
  const Point sy = read_point(s2, sum_space);
  CHECK((sx.vec() - sy.vec()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("counter rng basics") {
  CounterRng r(1, 2, 3);
  const double u = r.uniform();
  CHECK(u >= 0.0);
  CHECK(u < 1.0);
  CounterRng r2(1, 2, 3);
  CHECK(r2.uniform() == u);
  // uniform_pos never returns 0 (safe for logs and Box-Muller).
  CounterRng r3(9, 9, 9);
  for (int i = 0; i < 1000; ++i) CHECK(r3.uniform_pos() > 0.0);
  // signs are +/-1 only
  CounterRng r4(4, 4);
  for (int i = 0; i < 100; ++i) {
    const double s = r4.sign();
    CHECK(std::abs(s) == 1.0);
  }
  // normals have plausible first moments under a fixed seed
  CounterRng r5(7, 0);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double z = r5.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(std::abs(sum2 / n - 1.0) < 0.03);
}

}  // TEST_SUITE
