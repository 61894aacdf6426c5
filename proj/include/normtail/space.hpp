// normtail/space.hpp
//
// Normed-space descriptors and the points that live in them.
//
// A space is one of:
//   Euclidean{n}                 R^n with the l2 norm
//   Lp{n, p}, p in [2, inf]      R^n with the l_p norm
//   Schatten{m, n, p}            m x n real matrices, Schatten-p norm
//   BlockLp{p, children}         product space, l_p combination of child norms
//   SumOfNorms{children}         one ambient space, sum of several norms on it
//
// Points are vectors, matrices, or (for BlockLp) tuples of child points.
// A SumOfNorms point has the shape of its children's common ambient space.

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace normtail {

struct Euclidean {
  int n = 0;
};

struct Lp {
  int n = 0;
  double p = 2.0;  // in [2, inf]
};

struct Schatten {
  int m = 0;
  int n = 0;
  double p = 2.0;  // in [2, inf]
};

struct BlockLp;
struct SumOfNorms;

using SpaceDescriptor =
    std::variant<Euclidean, Lp, Schatten, BlockLp, SumOfNorms>;

struct BlockLp {
  double p = 2.0;  // in [2, inf]
  std::vector<SpaceDescriptor> children;
};

struct SumOfNorms {
  std::vector<SpaceDescriptor> children;  // all on the same ambient space
};

// A point in a space: vector, matrix, or tuple of child points.
struct Point {
  std::variant<Eigen::VectorXd, Eigen::MatrixXd, std::vector<Point>> value;

  Point() : value(Eigen::VectorXd()) {}
  explicit Point(Eigen::VectorXd v) : value(std::move(v)) {}
  explicit Point(Eigen::MatrixXd m) : value(std::move(m)) {}
  explicit Point(std::vector<Point> c) : value(std::move(c)) {}

  bool is_vector() const { return value.index() == 0; }
  bool is_matrix() const { return value.index() == 1; }
  bool is_tuple() const { return value.index() == 2; }

  const Eigen::VectorXd& vec() const { return std::get<Eigen::VectorXd>(value); }
  Eigen::VectorXd& vec() { return std::get<Eigen::VectorXd>(value); }
  const Eigen::MatrixXd& mat() const { return std::get<Eigen::MatrixXd>(value); }
  Eigen::MatrixXd& mat() { return std::get<Eigen::MatrixXd>(value); }
  const std::vector<Point>& children() const {
    return std::get<std::vector<Point>>(value);
  }
  std::vector<Point>& children() { return std::get<std::vector<Point>>(value); }
};

// --- validation and shape -------------------------------------------------

// Throws std::invalid_argument when the descriptor is malformed
// (non-positive dimensions, p outside [2, inf], empty child list,
// SumOfNorms children on different ambient spaces).
void validate_space(const SpaceDescriptor& space);

// Total real dimension of the space.
std::int64_t space_dim(const SpaceDescriptor& space);

// Structural shape signature ("v5", "m3x4", "(v2|m2x2)", ...); SumOfNorms
// children must share one signature, which is also the signature of the sum.
std::string shape_signature(const SpaceDescriptor& space);

// Throws std::invalid_argument when the point does not match the space.
void check_point(const SpaceDescriptor& space, const Point& x);

// --- point construction and arithmetic ------------------------------------

Point zero_point(const SpaceDescriptor& space);

// Coordinate-wise linear algebra on congruent points.
Point add(const Point& a, const Point& b);
Point sub(const Point& a, const Point& b);
Point scale(double c, const Point& a);
void add_in_place(Point& a, const Point& b);

// Euclidean inner product of coordinates (Frobenius for matrices,
// recursive sum for tuples).
double inner(const Point& a, const Point& b);

// i.i.d. standard normal coordinates in the shape of the space.
class CounterRng;
Point gaussian_point(const SpaceDescriptor& space, CounterRng& rng);

// --- descriptor text format -----------------------------------------------
//
//   euclidean:n=5
//   lp:n=10,p=inf
//   schatten:m=3,n=4,p=2
//   block:p=2,children=(lp:n=3,p=4|euclidean:n=2)
//   sum:children=(lp:n=3,p=2|lp:n=3,p=4)
//
// format_space(parse_space(s)) round-trips canonically.

SpaceDescriptor parse_space(const std::string& text);
std::string format_space(const SpaceDescriptor& space);

// --- point I/O --------------------------------------------------------------
//
// Vectors: whitespace-separated decimals.  Matrices: an "m n" header followed
// by m*n row-major values.  Tuples: the children in declaration order.

Point read_point(std::istream& in, const SpaceDescriptor& space);
void write_point(std::ostream& out, const Point& x);

}  // namespace normtail
