#include "normtail/simulate.hpp"

#include "normtail/norms.hpp"
#include "normtail/smoothness.hpp"
#include "normtail/text_format.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace normtail {

namespace {

constexpr int kBlocks = 64;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Point ones_like(const SpaceDescriptor& space) {
  return std::visit(
      [](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean> || std::is_same_v<T, Lp>) {
          return Point(Eigen::VectorXd::Ones(s.n).eval());
        } else if constexpr (std::is_same_v<T, Schatten>) {
          return Point(Eigen::MatrixXd::Ones(s.m, s.n).eval());
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::vector<Point> c;
          c.reserve(s.children.size());
          for (const auto& ch : s.children) c.push_back(ones_like(ch));
          return Point(std::move(c));
        } else {
          return ones_like(s.children.front());
        }
      },
      space);
}

std::vector<std::pair<std::string, std::string>> parse_kv_flat(
    const std::string& body) {
  std::vector<std::pair<std::string, std::string>> out;
  if (body.empty()) return out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t eq = item.find('=');
    require(eq != std::string::npos && eq > 0,
            "scheme descriptor: expected key=value, got '" + item + "'");
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

double kv_double(const std::vector<std::pair<std::string, std::string>>& kv,
                 const std::string& key, double fallback, bool* found = nullptr) {
  for (const auto& [k, v] : kv) {
    if (k == key) {
      if (found) *found = true;
      try {
        return std::stod(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("scheme descriptor: bad value for " + key);
      }
    }
  }
  if (found) *found = false;
  return fallback;
}

}  // namespace

FixedDirectionRademacher make_fixed_rademacher(const SpaceDescriptor& space,
                                               const Point& direction,
                                               double sigma) {
  validate_space(space);
  check_point(space, direction);
  require(sigma > 0.0 && std::isfinite(sigma),
          "fixed-rademacher: sigma must be positive");
  const double n = norm(space, direction);
  require(n > 0.0, "fixed-rademacher: direction must be nonzero");
  return FixedDirectionRademacher{space, scale(1.0 / n, direction), sigma};
}

ConditionCertificate certify_condition(const Scheme& scheme, std::int64_t N) {
  require(N >= 1, "certify_condition: N must be >= 1");
  return std::visit(
      [N](const auto& s) -> ConditionCertificate {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RademacherBasis>) {
          require(N <= s.n,
                  "rademacher-basis: horizon N exceeds the dimension n");
          return {2.0, SigmaProfile::constant(1.0, N), true};
        } else if constexpr (std::is_same_v<T, FixedDirectionRademacher>) {
          return {2.0, SigmaProfile::constant(s.sigma, N), true};
        } else if constexpr (std::is_same_v<T, GaussianIso>) {
          // E exp(s ||g||^2) = (1 - 2s)^(-n/2) equals e exactly at
          // s = (1 - exp(-2/n))/2, so sigma = scale / sqrt(s) certifies the
          // alpha = 2 condition with equality.
          const double s_coef =
              0.5 * (1.0 - std::exp(-2.0 / static_cast<double>(s.n)));
          return {2.0,
                  SigmaProfile::constant(s.scale / std::sqrt(s_coef), N),
                  false};
        } else {
          return {2.0, SigmaProfile::constant(s.sigma, N), true};
        }
      },
      scheme);
}

Point draw_increment(const Scheme& scheme, std::int64_t step, CounterRng& rng) {
  require(step >= 1, "draw_increment: steps are 1-based");
  return std::visit(
      [&](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RademacherBasis>) {
          require(step <= s.n,
                  "rademacher-basis: step beyond the dimension n");
          Eigen::VectorXd v = Eigen::VectorXd::Zero(s.n);
          v[step - 1] = rng.sign();
          return Point(std::move(v));
        } else if constexpr (std::is_same_v<T, FixedDirectionRademacher>) {
          return scale(rng.sign() * s.sigma, s.direction);
        } else if constexpr (std::is_same_v<T, GaussianIso>) {
          Eigen::VectorXd v(s.n);
          for (int i = 0; i < s.n; ++i) v[i] = s.scale * rng.normal();
          return Point(std::move(v));
        } else {
          for (;;) {
            Point g = gaussian_point(s.space, rng);
            const double n = norm(s.space, g);
            if (n > 0.0) return scale(rng.sign() * s.sigma / n, g);
          }
        }
      },
      scheme);
}

double binomial_upper_ci(std::int64_t hits, std::int64_t trials,
                         double level) {
  require(trials >= 1, "binomial_upper_ci: trials must be >= 1");
  require(hits >= 0 && hits <= trials,
          "binomial_upper_ci: hits must lie in [0, trials]");
  require(level > 0.0 && level < 1.0,
          "binomial_upper_ci: level must lie in (0, 1)");
  if (hits == trials) return 1.0;
  return boost::math::ibeta_inv(static_cast<double>(hits + 1),
                                static_cast<double>(trials - hits), level);
}

Scheme parse_scheme(const std::string& text,
                    const std::optional<SpaceDescriptor>& space,
                    const std::optional<Point>& direction) {
  const size_t colon = text.find(':');
  const std::string kind =
      colon == std::string::npos ? text : text.substr(0, colon);
  const auto kv = parse_kv_flat(
      colon == std::string::npos ? "" : text.substr(colon + 1));

  if (kind == "rademacher-basis") {
    const double n = kv_double(kv, "n", 0.0);
    require(n >= 1.0 && n == std::floor(n) && n <= (1 << 30),
            "rademacher-basis: needs an integer n >= 1");
    return RademacherBasis{static_cast<int>(n)};
  }
  if (kind == "fixed-rademacher") {
    require(space.has_value(),
            "fixed-rademacher: needs a --space to live in");
    const double sigma = kv_double(kv, "sigma", 1.0);
    Point dir = direction.has_value() ? *direction : ones_like(*space);
    return make_fixed_rademacher(*space, dir, sigma);
  }
  if (kind == "gaussian-iso") {
    const double n = kv_double(kv, "n", 0.0);
    require(n >= 1.0 && n == std::floor(n) && n <= (1 << 30),
            "gaussian-iso: needs an integer n >= 1");
    const double scale = kv_double(kv, "scale", 1.0);
    require(scale > 0.0, "gaussian-iso: scale must be positive");
    return GaussianIso{static_cast<int>(n), scale};
  }
  if (kind == "bounded-sphere") {
    require(space.has_value(), "bounded-sphere: needs a --space to live in");
    const double sigma = kv_double(kv, "sigma", 1.0);
    require(sigma > 0.0, "bounded-sphere: sigma must be positive");
    return BoundedSphere{*space, sigma};
  }
  throw std::invalid_argument(
      "unknown scheme '" + kind +
      "' (expected rademacher-basis, fixed-rademacher, gaussian-iso, or "
      "bounded-sphere)");
}

std::string format_scheme(const Scheme& scheme) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RademacherBasis>) {
          return "rademacher-basis:n=" + std::to_string(s.n);
        } else if constexpr (std::is_same_v<T, FixedDirectionRademacher>) {
          return "fixed-rademacher:sigma=" + fmt12(s.sigma);
        } else if constexpr (std::is_same_v<T, GaussianIso>) {
          std::string out = "gaussian-iso:n=" + std::to_string(s.n);
          if (s.scale != 1.0) out += ",scale=" + fmt12(s.scale);
          return out;
        } else {
          return "bounded-sphere:sigma=" + fmt12(s.sigma);
        }
      },
      scheme);
}

namespace {

struct EvalPlan {
  std::function<double(const Point&)> norm_fn;
  std::string space_text;
  double kappa = 1.0;
  TailVariant variant = TailVariant::smooth_iii;
};

TailVariant pick_variant(const RegularityCertificate& cert, bool bounded) {
  if (bounded)
    return cert.is_smooth() ? TailVariant::smooth_iii
                            : TailVariant::regular_iii;
  return cert.is_smooth() ? TailVariant::smooth_ii : TailVariant::regular_ii;
}

void require_vector_space(const SpaceDescriptor& space, int n,
                          const char* who) {
  const bool ok = std::holds_alternative<Euclidean>(space) ||
                  std::holds_alternative<Lp>(space);
  require(ok && space_dim(space) == n,
          std::string(who) +
              ": evaluation space must be a vector space of dimension " +
              std::to_string(n));
}

EvalPlan make_plan(const SimConfig& config, bool bounded) {
  EvalPlan plan;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RademacherBasis>) {
          if (config.space.has_value()) {
            require_vector_space(*config.space, s.n, "rademacher-basis");
            const SpaceDescriptor sp = *config.space;
            const RegularityCertificate cert = kappa_space(sp);
            plan.norm_fn = [sp](const Point& x) { return norm(sp, x); };
            plan.space_text = format_space(sp);
            plan.kappa = cert.kappa;
            plan.variant = pick_variant(cert, bounded);
          } else {
            plan.norm_fn = [](const Point& x) {
              return detail::lp_norm(x.vec(), 1.0);
            };
            plan.space_text = "l1:n=" + std::to_string(s.n);
            // l1 has no dimension-free smoothness constant; the dimension
            // fallback (every n-dim norm is n-regular) is the honest default.
            plan.kappa = static_cast<double>(s.n);
            plan.variant = bounded ? TailVariant::regular_iii
                                   : TailVariant::regular_ii;
          }
        } else if constexpr (std::is_same_v<T, FixedDirectionRademacher> ||
                             std::is_same_v<T, BoundedSphere>) {
          if (config.space.has_value())
            require(format_space(*config.space) == format_space(s.space),
                    "simulate: --space must match the scheme's own space");
          const SpaceDescriptor sp = s.space;
          const RegularityCertificate cert = kappa_space(sp);
          plan.norm_fn = [sp](const Point& x) { return norm(sp, x); };
          plan.space_text = format_space(sp);
          plan.kappa = cert.kappa;
          plan.variant = pick_variant(cert, bounded);
        } else {
          SpaceDescriptor sp = Euclidean{s.n};
          if (config.space.has_value()) {
            require_vector_space(*config.space, s.n, "gaussian-iso");
            sp = *config.space;
          }
          const RegularityCertificate cert = kappa_space(sp);
          plan.norm_fn = [sp](const Point& x) { return norm(sp, x); };
          plan.space_text = format_space(sp);
          plan.kappa = cert.kappa;
          plan.variant = pick_variant(cert, bounded);
        }
      },
      config.scheme);
  return plan;
}

struct BlockStats {
  std::vector<std::int64_t> hits;
  double sum2 = 0.0;
  double sum4 = 0.0;
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
};

}  // namespace

SimReport run(const SimConfig& config) {
  const auto t_start = std::chrono::steady_clock::now();
  require(config.trials >= 1, "simulate: trials must be >= 1");
  require(config.N >= 1, "simulate: N must be >= 1");
  require(!config.gammas.empty(), "simulate: needs at least one gamma");
  for (double g : config.gammas)
    require(g >= 0.0, "simulate: gammas must be >= 0");
  require(config.threads >= 1, "simulate: threads must be >= 1");
  require(config.ci_level > 0.0 && config.ci_level < 1.0,
          "simulate: ci_level must lie in (0, 1)");

  // Certificate, then user overrides (any override -> uncertified).
  ConditionCertificate cert = certify_condition(config.scheme, config.N);
  bool certified = true;
  double alpha = cert.alpha;
  bool bounded = cert.bounded;
  SigmaProfile sigma = cert.sigma;
  if (config.alpha_override.has_value()) {
    alpha = *config.alpha_override;
    certified = false;
  }
  if (config.sigma_override.has_value()) {
    require(static_cast<std::int64_t>(config.sigma_override->size()) ==
                config.N,
            "simulate: sigma override must have length N");
    sigma = SigmaProfile(*config.sigma_override);
    certified = false;
  }
  if (config.bounded_override.has_value()) {
    bounded = *config.bounded_override;
    certified = false;
  }

  EvalPlan plan = make_plan(config, bounded);
  if (config.kappa_override.has_value()) {
    require(*config.kappa_override >= 1.0, "simulate: kappa must be >= 1");
    plan.kappa = *config.kappa_override;
    certified = false;
  }
  const TailVariant variant = config.variant.value_or(plan.variant);
  if (variant == TailVariant::regular_iii ||
      variant == TailVariant::smooth_iii)
    require(bounded, "simulate: " + to_string(variant) +
                         " requires bounded increments, and this scheme "
                         "is not certified bounded");

  SimReport report;
  report.scheme_text = format_scheme(config.scheme);
  report.space_text = plan.space_text;
  report.variant = to_string(variant);
  report.alpha = alpha;
  report.kappa = plan.kappa;
  report.N = config.N;
  report.trials = config.trials;
  report.seed = config.seed;
  report.ci_level = config.ci_level;
  report.sigma_l2 = sigma.l2();
  report.certified = certified;
  report.second_moment_bound = second_moment_bound(plan.kappa, sigma);

  report.rows.reserve(config.gammas.size());
  for (double g : config.gammas) {
    const TailResult tr = tail_bound({variant, alpha, plan.kappa, sigma, g});
    GammaRow row;
    row.gamma = g;
    row.threshold = tr.threshold;
    row.analytic_bound = tr.prob_bound;
    row.regime = tr.regime;
    report.rows.push_back(row);
  }

  // Monte Carlo over a fixed 64-block partition of the trial range; blocks
  // are combined in block order, so any thread count yields identical output.
  const std::int64_t T = config.trials;
  const size_t G = config.gammas.size();
  std::vector<BlockStats> blocks(kBlocks);
  std::atomic<int> next_block{0};

  const auto worker = [&]() {
    for (;;) {
      const int b = next_block.fetch_add(1);
      if (b >= kBlocks) return;
      BlockStats& st = blocks[static_cast<size_t>(b)];
      st.hits.assign(G, 0);
      const std::int64_t lo = T * b / kBlocks;
      const std::int64_t hi = T * (b + 1) / kBlocks;
      for (std::int64_t t = lo; t < hi; ++t) {
        Point s;
        bool first = true;
        for (std::int64_t i = 1; i <= config.N; ++i) {
          CounterRng rng(config.seed, static_cast<std::uint64_t>(t) + 1,
                         static_cast<std::uint64_t>(i));
          Point inc = draw_increment(config.scheme, i, rng);
          if (first) {
            s = std::move(inc);
            first = false;
          } else {
            add_in_place(s, inc);
          }
        }
        const double v = plan.norm_fn(s);
        const double v2 = v * v;
        st.sum2 += v2;
        st.sum4 += v2 * v2;
        st.vmin = std::min(st.vmin, v);
        st.vmax = std::max(st.vmax, v);
        for (size_t j = 0; j < G; ++j)
          if (v >= report.rows[j].threshold) ++st.hits[j];
      }
    }
  };

  const int n_threads = static_cast<int>(
      std::min<std::int64_t>({config.threads, kBlocks, T}));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  double sum2 = 0.0, sum4 = 0.0;
  double vmin = std::numeric_limits<double>::infinity();
  double vmax = -std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> hits(G, 0);
  for (const BlockStats& st : blocks) {
    if (st.hits.empty()) continue;  // empty block (T < 64)
    sum2 += st.sum2;
    sum4 += st.sum4;
    vmin = std::min(vmin, st.vmin);
    vmax = std::max(vmax, st.vmax);
    for (size_t j = 0; j < G; ++j) hits[j] += st.hits[j];
  }

  const double dT = static_cast<double>(T);
  report.mean_sq_norm = sum2 / dT;
  const double var_sq =
      std::max(0.0, sum4 / dT - report.mean_sq_norm * report.mean_sq_norm);
  report.mean_sq_stderr = std::sqrt(var_sq / dT);
  report.norm_min = vmin;
  report.norm_max = vmax;
  for (size_t j = 0; j < G; ++j) {
    report.rows[j].hits = hits[j];
    report.rows[j].freq = static_cast<double>(hits[j]) / dT;
    report.rows[j].freq_upper_conf =
        binomial_upper_ci(hits[j], T, config.ci_level);
  }

  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return report;
}

}  // namespace normtail
