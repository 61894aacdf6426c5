#include "normtail/trace_calculus.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace normtail {

namespace {

void check_symmetric(const Eigen::MatrixXd& X, const char* who) {
  if (X.rows() != X.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square");
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument(std::string(who) +
                                ": matrix must be symmetric");
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> decompose(
    const TraceFunction& tf, const Eigen::MatrixXd& X, const char* who) {
  check_symmetric(X, who);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
  const Eigen::VectorXd& ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (!(ev[i] > tf.lo && ev[i] < tf.hi))
      throw std::domain_error(
          std::string(who) + ": eigenvalue " + std::to_string(ev[i]) +
          " outside the domain (" + std::to_string(tf.lo) + ", " +
          std::to_string(tf.hi) + ") of " + tf.name);
  }
  return es;
}

}  // namespace

double divided_difference_slack(const TraceFunction& tf, int grid_points) {
  if (grid_points < 2)
    throw std::invalid_argument("divided_difference_slack: need >= 2 points");
  const double w = tf.hi - tf.lo;
  const double step = w / (grid_points + 1);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid_points; ++i) {
    const double a = tf.lo + step * i;
    for (int j = i + 1; j <= grid_points; ++j) {
      const double b = tf.lo + step * j;
      const double dd = (tf.df(a) - tf.df(b)) / (a - b);
      const double avg = 0.5 * (tf.d2f(a) + tf.d2f(b));
      const double upper = tf.theta_plus * avg + tf.mu_plus;
      const double lower = tf.theta_minus * avg + tf.mu_minus;
      const double scale =
          std::max({1.0, std::abs(dd), std::abs(avg)});
      worst = std::min(worst, (upper - dd) / scale);
      worst = std::min(worst, (dd - lower) / scale);
    }
  }
  return worst;
}

TraceFunction make_trace_function(const std::string& name, double lo,
                                  double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument(
        "make_trace_function: need a finite interval lo < hi");
  TraceFunction tf;
  tf.name = name;
  tf.lo = lo;
  tf.hi = hi;
  if (name == "t3") {
    tf.f = [](double t) { return t * t * t; };
    tf.df = [](double t) { return 3.0 * t * t; };
    tf.d2f = [](double t) { return 6.0 * t; };
    tf.theta_minus = 1.0;
    tf.theta_plus = 1.0;
  } else if (name == "t4") {
    tf.f = [](double t) { return t * t * t * t; };
    tf.df = [](double t) { return 4.0 * t * t * t; };
    tf.d2f = [](double t) { return 12.0 * t * t; };
    tf.theta_minus = 1.0 / 3.0;
    tf.theta_plus = 1.0;
  } else if (name == "exp") {
    tf.f = [](double t) { return std::exp(t); };
    tf.df = [](double t) { return std::exp(t); };
    tf.d2f = [](double t) { return std::exp(t); };
    const double half_w = 0.5 * (hi - lo);
    tf.theta_minus = std::tanh(half_w) / half_w;
    tf.theta_plus = 1.0;
  } else {
    throw std::invalid_argument(
        "make_trace_function: unknown function '" + name +
        "' (expected t3, t4, or exp)");
  }
  // The declared constants must survive a dense divided-difference audit.
  if (divided_difference_slack(tf, 200) < -1e-9)
    throw std::domain_error(
        "make_trace_function: divided-difference constants fail on " + name);
  return tf;
}

double trace_value(const TraceFunction& tf, const Eigen::MatrixXd& X) {
  const auto es = decompose(tf, X, "trace_value");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    s += tf.f(es.eigenvalues()[i]);
  return s;
}

Eigen::MatrixXd trace_grad(const TraceFunction& tf, const Eigen::MatrixXd& X) {
  const auto es = decompose(tf, X, "trace_grad");
  Eigen::VectorXd d(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < d.size(); ++i)
    d[i] = tf.df(es.eigenvalues()[i]);
  Eigen::MatrixXd g =
      es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
  return g;
}

double trace_hessian_form(const TraceFunction& tf, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& H) {
  check_symmetric(H, "trace_hessian_form (H)");
  const auto es = decompose(tf, X, "trace_hessian_form");
  if (H.rows() != X.rows())
    throw std::invalid_argument("trace_hessian_form: H and X sizes differ");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd Hhat =
      es.eigenvectors().transpose() * H * es.eigenvectors();
  const double spectral_radius = ev.cwiseAbs().maxCoeff();
  const double near_equal = 1e-8 * spectral_radius;
  double out = 0.0;
  for (Eigen::Index s = 0; s < ev.size(); ++s) {
    for (Eigen::Index t = 0; t < ev.size(); ++t) {
      const double gap = ev[s] - ev[t];
      const double gamma = std::abs(gap) <= near_equal
                               ? tf.d2f(ev[s])
                               : (tf.df(ev[s]) - tf.df(ev[t])) / gap;
      out += gamma * Hhat(s, t) * Hhat(s, t);
    }
  }
  return out;
}

std::pair<double, double> trace_hessian_bounds(const TraceFunction& tf,
                                               const Eigen::MatrixXd& X,
                                               const Eigen::MatrixXd& H) {
  check_symmetric(H, "trace_hessian_bounds (H)");
  const auto es = decompose(tf, X, "trace_hessian_bounds");
  if (H.rows() != X.rows())
    throw std::invalid_argument("trace_hessian_bounds: H and X sizes differ");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd Hhat =
      es.eigenvectors().transpose() * H * es.eigenvectors();
  // Tr(H f''(X) H) = sum_{s,t} f''(lambda_s) Hhat_st^2 in the eigenbasis.
  double quad = 0.0, frob = 0.0;
  for (Eigen::Index s = 0; s < ev.size(); ++s) {
    const double c = tf.d2f(ev[s]);
    for (Eigen::Index t = 0; t < ev.size(); ++t) {
      quad += c * Hhat(s, t) * Hhat(s, t);
      frob += Hhat(s, t) * Hhat(s, t);
    }
  }
  return {tf.theta_minus * quad + tf.mu_minus * frob,
          tf.theta_plus * quad + tf.mu_plus * frob};
}

}  // namespace normtail
