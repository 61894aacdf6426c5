#include "normtail/norms.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace normtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Conjugate exponent p* = p/(p-1), with 1 <-> inf.
double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

[[noreturn]] void throw_nonsmooth(const SpaceDescriptor& space,
                                  const char* what) {
  throw std::invalid_argument(std::string(what) +
                              ": norm is not differentiable for " +
                              format_space(space));
}

}  // namespace

namespace detail {

double lp_norm(const Eigen::VectorXd& v, double p) {
  if (v.size() == 0) return 0.0;
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  if (p == 1.0) return v.cwiseAbs().sum();
  if (p == 2.0) return v.norm();
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  // Scale by the largest coordinate so huge finite p cannot overflow.
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    s += std::pow(std::abs(v[i]) / m, p);
  return m * std::pow(s, 1.0 / p);
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& X) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X);
  return svd.singularValues();
}

}  // namespace detail

double norm(const SpaceDescriptor& space, const Point& x) {
  check_point(space, x);
  return std::visit(
      [&x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          return x.vec().norm();
        } else if constexpr (std::is_same_v<T, Lp>) {
          return detail::lp_norm(x.vec(), s.p);
        } else if constexpr (std::is_same_v<T, Schatten>) {
          if (s.p == 2.0) return x.mat().norm();
          return detail::lp_norm(detail::singular_values(x.mat()), s.p);
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          Eigen::VectorXd block_norms(
              static_cast<Eigen::Index>(s.children.size()));
          for (size_t i = 0; i < s.children.size(); ++i)
            block_norms[static_cast<Eigen::Index>(i)] =
                norm(s.children[i], x.children()[i]);
          return detail::lp_norm(block_norms, s.p);
        } else {
          double total = 0.0;
          for (const auto& c : s.children) total += norm(c, x);
          return total;
        }
      },
      space);
}

double dual_norm(const SpaceDescriptor& space, const Point& x) {
  check_point(space, x);
  return std::visit(
      [&x](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          return x.vec().norm();
        } else if constexpr (std::is_same_v<T, Lp>) {
          return detail::lp_norm(x.vec(), conjugate_exponent(s.p));
        } else if constexpr (std::is_same_v<T, Schatten>) {
          if (s.p == 2.0) return x.mat().norm();
          return detail::lp_norm(detail::singular_values(x.mat()),
                                 conjugate_exponent(s.p));
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          Eigen::VectorXd block_duals(
              static_cast<Eigen::Index>(s.children.size()));
          for (size_t i = 0; i < s.children.size(); ++i)
            block_duals[static_cast<Eigen::Index>(i)] =
                dual_norm(s.children[i], x.children()[i]);
          return detail::lp_norm(block_duals, conjugate_exponent(s.p));
        } else {
          // Sum of m identical norms = m * child norm, so the dual is
          // child dual / m.  Heterogeneous sums have no closed-form dual.
          const std::string first = format_space(s.children.front());
          for (const auto& c : s.children) {
            if (format_space(c) != first)
              throw std::invalid_argument(
                  "dual_norm: sum-of-norms dual is only defined for "
                  "identical children (the general dual is an infimal "
                  "convolution with no closed form)");
          }
          return dual_norm(s.children.front(), x) /
                 static_cast<double>(s.children.size());
        }
      },
      space);
}

Point grad_sq_norm(const SpaceDescriptor& space, const Point& x) {
  check_point(space, x);
  return std::visit(
      [&x, &space](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          return Point((2.0 * x.vec()).eval());
        } else if constexpr (std::is_same_v<T, Lp>) {
          if (std::isinf(s.p)) throw_nonsmooth(space, "grad_sq_norm");
          if (s.p == 2.0) return Point((2.0 * x.vec()).eval());
          const double N = detail::lp_norm(x.vec(), s.p);
          Eigen::VectorXd g = Eigen::VectorXd::Zero(s.n);
          if (N == 0.0) return Point(std::move(g));
          for (int i = 0; i < s.n; ++i) {
            const double a = std::abs(x.vec()[i]);
            if (a == 0.0) continue;
            g[i] = 2.0 * N * std::pow(a / N, s.p - 1.0) *
                   (x.vec()[i] > 0 ? 1.0 : -1.0);
          }
          return Point(std::move(g));
        } else if constexpr (std::is_same_v<T, Schatten>) {
          if (std::isinf(s.p)) throw_nonsmooth(space, "grad_sq_norm");
          if (s.p == 2.0) return Point((2.0 * x.mat()).eval());
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(
              x.mat(), Eigen::ComputeThinU | Eigen::ComputeThinV);
          const Eigen::VectorXd& sv = svd.singularValues();
          const double N = detail::lp_norm(sv, s.p);
          if (N == 0.0)
            return Point(Eigen::MatrixXd::Zero(s.m, s.n).eval());
          const double cutoff = 1e-12 * sv[0];
          Eigen::VectorXd d(sv.size());
          for (Eigen::Index i = 0; i < sv.size(); ++i)
            d[i] = sv[i] <= cutoff
                       ? 0.0
                       : 2.0 * N * std::pow(sv[i] / N, s.p - 1.0);
          Eigen::MatrixXd g =
              svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
          return Point(std::move(g));
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          if (std::isinf(s.p)) throw_nonsmooth(space, "grad_sq_norm");
          const double N = norm(space, x);
          std::vector<Point> out;
          out.reserve(s.children.size());
          for (size_t i = 0; i < s.children.size(); ++i) {
            Point gi = grad_sq_norm(s.children[i], x.children()[i]);
            double ci;
            if (s.p == 2.0) {
              ci = 1.0;
            } else if (N == 0.0) {
              ci = 0.0;
            } else {
              const double Ni = norm(s.children[i], x.children()[i]);
              ci = std::pow(Ni / N, s.p - 2.0);
            }
            out.push_back(scale(ci, gi));
          }
          return Point(std::move(out));
        } else {
          throw std::invalid_argument(
              "grad_sq_norm: a sum of norms is not differentiable; no "
              "gradient is exposed for sum spaces");
        }
      },
      space);
}

Eigen::MatrixXd embed_symmetric(const Eigen::MatrixXd& X) {
  const Eigen::Index m = X.rows(), n = X.cols();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m + n, m + n);
  S.topRightCorner(m, n) = X;
  S.bottomLeftCorner(n, m) = X.transpose();
  return S;
}

double huber(const SpaceDescriptor& space, double beta, const Point& xi) {
  if (!(beta > 0.0))
    throw std::invalid_argument("huber: beta must be positive");
  const double r = norm(space, xi);
  return r <= beta ? r * r / (2.0 * beta) : r - beta / 2.0;
}

Point huber_grad(const SpaceDescriptor& space, double beta, const Point& xi) {
  if (!(beta > 0.0))
    throw std::invalid_argument("huber_grad: beta must be positive");
  const double r = norm(space, xi);
  Point g = grad_sq_norm(space, xi);
  return r <= beta ? scale(1.0 / (2.0 * beta), g) : scale(1.0 / (2.0 * r), g);
}

}  // namespace normtail
