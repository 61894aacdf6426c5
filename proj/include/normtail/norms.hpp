// normtail/norms.hpp
//
// Norm evaluation, dual norms, gradients of squared norms, the symmetric
// embedding of rectangular matrices, and the Huber regularization of a norm.

#pragma once

#include "normtail/space.hpp"

namespace normtail {

// ||x|| in the space's norm.  Throws on shape mismatch.
double norm(const SpaceDescriptor& space, const Point& x);

// The dual norm ||x||_* (l_{p*} for l_p, Schatten-p* for Schatten-p,
// block-l_{p*} of child duals for BlockLp, self-dual for Euclidean).
// SumOfNorms supports only identical children (dual = child dual / m).
double dual_norm(const SpaceDescriptor& space, const Point& x);

// Gradient of x -> ||x||^2.  Defined (and smooth) for p < inf; p = inf and
// SumOfNorms throw std::invalid_argument.  grad_sq_norm(0) = 0.
Point grad_sq_norm(const SpaceDescriptor& space, const Point& x);

// S(X) = [[0, X], [X^T, 0]], the (m+n) x (m+n) symmetric embedding.
// Schatten norms transfer as |X|_p = 2^(-1/p) |S(X)|_p.
Eigen::MatrixXd embed_symmetric(const Eigen::MatrixXd& X);

// Huber regularization of the norm: with r = ||xi||,
//   V_beta(xi) = r^2 / (2 beta)     if r <= beta,
//                r - beta / 2       otherwise.
// Requires beta > 0.
double huber(const SpaceDescriptor& space, double beta, const Point& xi);

// Gradient of V_beta: grad_sq_norm(xi)/(2 beta) on the quadratic branch,
// grad_sq_norm(xi)/(2 ||xi||) on the linear branch.  Needs a smooth norm.
Point huber_grad(const SpaceDescriptor& space, double beta, const Point& xi);

namespace detail {

// l_p norm of a vector for any p >= 1 (internal: public descriptors require
// p >= 2, but dual norms and the l1 walk witness need the full range).
// Scales by the max coordinate so arbitrarily large p stays stable.
double lp_norm(const Eigen::VectorXd& v, double p);

// Singular values of X (descending).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& X);

}  // namespace detail

}  // namespace normtail
