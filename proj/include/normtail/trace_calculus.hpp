// normtail/trace_calculus.hpp
//
// Differential calculus of spectral trace functions F(X) = Tr f(X) on
// symmetric matrices whose spectrum lies in an open interval (lo, hi).
//
// Each TraceFunction carries divided-difference constants
// (theta_minus, theta_plus, mu_minus, mu_plus) satisfying, for a, b in the
// domain,
//   theta_- (f''(a)+f''(b))/2 + mu_-  <=  (f'(a)-f'(b))/(a-b)
//                                     <=  theta_+ (f''(a)+f''(b))/2 + mu_+ ,
// which is validated on a dense grid at construction.  The constants give a
// two-sided matrix bound on the second differential:
//   theta_- Tr(H f''(X) H) + mu_- Tr(H^2)  <=  D^2F(X)[H,H]
//                                          <=  theta_+ Tr(H f''(X) H) + mu_+ Tr(H^2).

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

namespace normtail {

struct TraceFunction {
  std::string name;
  double lo = 0.0;  // open domain interval (lo, hi), finite
  double hi = 0.0;
  double theta_minus = 0.0;
  double theta_plus = 0.0;
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  std::function<double(double)> f, df, d2f;
};

// Shipped functions: "t3" (t^3), "t4" (t^4), "exp" (e^t), each on (lo, hi).
// The divided-difference constants are
//   t3:  theta = 1, 1;   mu = 0, 0   (exact identity)
//   t4:  theta = 1/3, 1; mu = 0, 0
//   exp: theta = tanh(w/2)/(w/2), 1 with w = hi - lo; mu = 0, 0
// Construction validates the bounds on a dense grid over (lo, hi)^2 and
// throws std::domain_error when they fail.
TraceFunction make_trace_function(const std::string& name, double lo,
                                  double hi);

// Revalidates the divided-difference constants on a grid_points^2 grid;
// returns the worst signed slack (negative = violation) and throws nothing.
double divided_difference_slack(const TraceFunction& tf, int grid_points);

// Tr f(X).  X must be symmetric with spectrum strictly inside (lo, hi);
// violations throw std::domain_error.
double trace_value(const TraceFunction& tf, const Eigen::MatrixXd& X);

// Gradient of X -> Tr f(X), namely f'(X) as a symmetric matrix.
Eigen::MatrixXd trace_grad(const TraceFunction& tf, const Eigen::MatrixXd& X);

// Second differential D^2F(X)[H, H] = sum_{s,t} Gamma_st Hhat_st^2 with
// Gamma the divided-difference table of f' (f'' on near-equal eigenvalue
// pairs, threshold 1e-8 * spectral radius) and Hhat = U^T H U.
double trace_hessian_form(const TraceFunction& tf, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& H);

// The two-sided bound around the second differential:
//   {theta_- Tr(H f''(X) H) + mu_- Tr(H^2),
//    theta_+ Tr(H f''(X) H) + mu_+ Tr(H^2)}.
std::pair<double, double> trace_hessian_bounds(const TraceFunction& tf,
                                               const Eigen::MatrixXd& X,
                                               const Eigen::MatrixXd& H);

}  // namespace normtail
