// Python bindings for the normtail core library (module normtail._core).
//
// Spaces are addressed by their text descriptors ("lp:n=10,p=inf", ...);
// points are numpy vectors, numpy matrices, or nested lists matching the
// space's shape.  Reports come back as plain dicts.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "normtail/deviation.hpp"
#include "normtail/norms.hpp"
#include "normtail/rng.hpp"
#include "normtail/simulate.hpp"
#include "normtail/smoothness.hpp"
#include "normtail/space.hpp"
#include "normtail/trace_calculus.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace py = pybind11;
using namespace normtail;

namespace {

Point to_point(const SpaceDescriptor& space, py::handle obj) {
  return std::visit(
      [&](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean> || std::is_same_v<T, Lp>) {
          return Point(obj.cast<Eigen::VectorXd>());
        } else if constexpr (std::is_same_v<T, Schatten>) {
          return Point(obj.cast<Eigen::MatrixXd>());
        } else {
          auto seq = py::reinterpret_borrow<py::sequence>(obj);
          if (static_cast<size_t>(seq.size()) != s.children.size())
            throw py::value_error("point tuple length does not match space");
          std::vector<Point> kids;
          kids.reserve(s.children.size());
          if constexpr (std::is_same_v<T, BlockLp>) {
            for (size_t i = 0; i < s.children.size(); ++i)
              kids.push_back(to_point(s.children[i], seq[i]));
          } else {
            for (size_t i = 0; i < s.children.size(); ++i)
              kids.push_back(to_point(s.children[i], seq[i]));
          }
          return Point(std::move(kids));
        }
      },
      space);
}

py::object from_point(const Point& p) {
  if (p.is_vector()) return py::cast(p.vec());
  if (p.is_matrix()) return py::cast(p.mat());
  py::list out;
  for (const auto& c : p.children()) out.append(from_point(c));
  return out;
}

SigmaProfile to_profile(const std::vector<double>& values) {
  return SigmaProfile(values);
}

py::dict cert_dict(const RegularityCertificate& cert) {
  py::dict d;
  d["kappa"] = cert.kappa;
  d["kappa_plus"] = cert.kappa_plus;
  d["rho"] = cert.rho;
  d["smooth"] = cert.is_smooth();
  return d;
}

py::dict tail_dict(const TailResult& res) {
  py::dict d;
  d["threshold"] = res.threshold;
  d["prob_bound"] = res.prob_bound;
  d["gamma_star"] = res.gamma_star;
  d["regime"] = to_string(res.regime);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "smooth/regular norm machinery, martingale tail bounds, and a seeded "
      "Monte Carlo harness";

  m.def(
      "kappa",
      [](const std::string& space_text) {
        return cert_dict(kappa_space(parse_space(space_text)));
      },
      py::arg("space"),
      "Smoothness/regularity certificate {kappa, kappa_plus, rho, smooth} "
      "of a space descriptor.");

  m.def(
      "space_dim",
      [](const std::string& space_text) {
        return space_dim(parse_space(space_text));
      },
      py::arg("space"));

  m.def(
      "norm",
      [](const std::string& space_text, py::handle x) {
        const auto space = parse_space(space_text);
        return norm(space, to_point(space, x));
      },
      py::arg("space"), py::arg("x"));

  m.def(
      "dual_norm",
      [](const std::string& space_text, py::handle x) {
        const auto space = parse_space(space_text);
        return dual_norm(space, to_point(space, x));
      },
      py::arg("space"), py::arg("x"));

  m.def(
      "grad_sq_norm",
      [](const std::string& space_text, py::handle x) {
        const auto space = parse_space(space_text);
        return from_point(grad_sq_norm(space, to_point(space, x)));
      },
      py::arg("space"), py::arg("x"),
      "Gradient of x -> ||x||^2 (throws for nonsmooth norms).");

  m.def(
      "embed_symmetric",
      [](const Eigen::MatrixXd& x) { return embed_symmetric(x); },
      py::arg("x"), "S(X) = [[0, X], [X^T, 0]].");

  m.def(
      "huber",
      [](const std::string& space_text, double beta, py::handle xi) {
        const auto space = parse_space(space_text);
        return huber(space, beta, to_point(space, xi));
      },
      py::arg("space"), py::arg("beta"), py::arg("xi"));

  m.def(
      "huber_grad",
      [](const std::string& space_text, double beta, py::handle xi) {
        const auto space = parse_space(space_text);
        return from_point(huber_grad(space, beta, to_point(space, xi)));
      },
      py::arg("space"), py::arg("beta"), py::arg("xi"));

  m.def(
      "gamma_star",
      [](double alpha, const std::vector<double>& sigma) {
        return gamma_star(alpha, to_profile(sigma));
      },
      py::arg("alpha"), py::arg("sigma"),
      "Quadratic/alpha-tail regime crossover of a sigma profile.");

  m.def(
      "tail_bound",
      [](const std::string& variant, double alpha, double kappa,
         const std::vector<double>& sigma, double gamma) {
        return tail_dict(tail_bound({tail_variant_from_string(variant), alpha,
                                     kappa, to_profile(sigma), gamma}));
      },
      py::arg("variant"), py::arg("alpha"), py::arg("kappa"), py::arg("sigma"),
      py::arg("gamma"),
      "P(||S_N|| >= threshold(gamma)) bound: {threshold, prob_bound, "
      "gamma_star, regime}.");

  m.def(
      "invert_gamma",
      [](const std::string& variant, double alpha, double kappa,
         const std::vector<double>& sigma, double target_eps) {
        return invert_gamma(tail_variant_from_string(variant), alpha, kappa,
                            to_profile(sigma), target_eps);
      },
      py::arg("variant"), py::arg("alpha"), py::arg("kappa"), py::arg("sigma"),
      py::arg("target_eps"));

  m.def(
      "mgf_envelope",
      [](const std::string& variant, double alpha, double nu,
         double mean_bound, double t) {
        MgfVariant v;
        if (variant == "light_tail") v = MgfVariant::light_tail;
        else if (variant == "subgauss") v = MgfVariant::subgauss;
        else if (variant == "bounded") v = MgfVariant::bounded;
        else throw py::value_error("mgf variant: light_tail|subgauss|bounded");
        return mgf_envelope(v, alpha, nu, mean_bound, t);
      },
      py::arg("variant"), py::arg("alpha"), py::arg("nu"),
      py::arg("mean_bound"), py::arg("t"));

  m.def(
      "second_moment_bound",
      [](double kappa, const std::vector<double>& sigma) {
        return second_moment_bound(kappa, to_profile(sigma));
      },
      py::arg("kappa"), py::arg("sigma"));

  m.def(
      "binomial_upper_ci",
      [](std::int64_t hits, std::int64_t trials, double level) {
        return binomial_upper_ci(hits, trials, level);
      },
      py::arg("hits"), py::arg("trials"), py::arg("level") = 0.999,
      "Exact one-sided binomial upper confidence limit.");

  m.def(
      "verify_smoothness",
      [](const std::string& space_text, std::int64_t trials,
         std::uint64_t seed) {
        const auto space = parse_space(space_text);
        const auto rep = verify_smoothness(space, trials, seed);
        py::dict d;
        d["trials"] = rep.trials;
        d["worst_violation_ratio"] = rep.worst_violation_ratio;
        d["empirical_kappa"] = rep.empirical_kappa;
        d["claimed_kappa"] = rep.claimed_kappa;
        d["sandwich_worst"] = rep.sandwich_worst;
        d["passed"] = rep.passed;
        return d;
      },
      py::arg("space"), py::arg("trials") = 100000, py::arg("seed") = 1);

  m.def(
      "char_check",
      [](const std::string& space_text, double kappa, std::int64_t trials,
         std::uint64_t seed) {
        const auto space = parse_space(space_text);
        const auto rep = char_check(space, kappa, trials, seed);
        py::dict d;
        d["passed"] = rep.passed;
        d["claimed_kappa"] = rep.claimed_kappa;
        d["worst_monotone_ratio"] = rep.worst_monotone_ratio;
        d["worst_lipschitz_ratio"] = rep.worst_lipschitz_ratio;
        d["trials"] = rep.trials;
        return d;
      },
      py::arg("space"), py::arg("kappa"), py::arg("trials") = 100000,
      py::arg("seed") = 1);

  m.def(
      "simulate",
      [](const std::string& scheme, std::int64_t N, std::int64_t trials,
         const std::vector<double>& gammas,
         const std::optional<std::string>& space,
         const std::optional<std::string>& variant,
         const std::optional<double>& kappa,
         const std::optional<double>& alpha,
         const std::optional<std::vector<double>>& sigma,
         const std::optional<bool>& bounded, std::uint64_t seed, int threads) {
        SimConfig config;
        if (space.has_value()) config.space = parse_space(*space);
        config.scheme = parse_scheme(scheme, config.space, std::nullopt);
        config.N = N;
        config.trials = trials;
        config.gammas = gammas;
        if (variant.has_value())
          config.variant = tail_variant_from_string(*variant);
        config.kappa_override = kappa;
        config.alpha_override = alpha;
        config.sigma_override = sigma;
        config.bounded_override = bounded;
        config.seed = seed;
        config.threads = threads;
        const SimReport rep = run(config);
        py::dict d;
        d["scheme"] = rep.scheme_text;
        d["space"] = rep.space_text;
        d["variant"] = rep.variant;
        d["alpha"] = rep.alpha;
        d["kappa"] = rep.kappa;
        d["N"] = rep.N;
        d["trials"] = rep.trials;
        d["seed"] = rep.seed;
        d["ci_level"] = rep.ci_level;
        d["sigma_l2"] = rep.sigma_l2;
        d["certified"] = rep.certified;
        d["mean_sq_norm"] = rep.mean_sq_norm;
        d["mean_sq_stderr"] = rep.mean_sq_stderr;
        d["second_moment_bound"] = rep.second_moment_bound;
        d["norm_min"] = rep.norm_min;
        d["norm_max"] = rep.norm_max;
        py::list rows;
        for (const auto& row : rep.rows) {
          py::dict r;
          r["gamma"] = row.gamma;
          r["threshold"] = row.threshold;
          r["hits"] = row.hits;
          r["trials"] = rep.trials;
          r["freq"] = row.freq;
          r["freq_upper_conf"] = row.freq_upper_conf;
          r["bound"] = row.analytic_bound;
          r["regime"] = to_string(row.regime);
          rows.append(r);
        }
        d["rows"] = rows;
        return d;
      },
      py::arg("scheme"), py::arg("N"), py::arg("trials"), py::arg("gammas"),
      py::arg("space") = std::nullopt, py::arg("variant") = std::nullopt,
      py::arg("kappa") = std::nullopt, py::arg("alpha") = std::nullopt,
      py::arg("sigma") = std::nullopt, py::arg("bounded") = std::nullopt,
      py::arg("seed") = 1, py::arg("threads") = 1,
      "Seeded Monte Carlo run; identical seeds give identical reports for "
      "any thread count.");
}
