// normtail command-line front end.
//
// Subcommands: kappa, gamma-star, bound, invert, verify-smooth, char-check,
// trace-check, huber-check, simulate.  Every subcommand renders one report in
// one of three formats (--format table|csv|structured):
//
//   table       flat key=value lines (plus an aligned per-gamma table for
//               simulate) — the default, meant for eyes;
//   csv         a header line plus value rows, meant for plotting;
//   structured  a JSON object with sorted keys, 12-significant-digit numbers
//               (infinities as the string "inf"), meant for machines.
//
// Exit codes: 0 success, 2 usage/validation error, 3 numeric failure.
// Identical invocations with identical seeds produce byte-identical output.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "normtail/blend.hpp"
#include "normtail/deviation.hpp"
#include "normtail/norms.hpp"
#include "normtail/rng.hpp"
#include "normtail/simulate.hpp"
#include "normtail/smoothness.hpp"
#include "normtail/space.hpp"
#include "normtail/text_format.hpp"
#include "normtail/trace_calculus.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace {

using normtail::fmt12;
using normtail::round12;
using json = nlohmann::json;

using Cell = std::variant<std::string, double, std::int64_t, std::uint64_t, bool>;

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, double>) return fmt12(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else return std::to_string(v);
      },
      c);
}

json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
          return json(round12(v));
        } else {
          return json(v);
        }
      },
      c);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// One report: ordered scalars plus an optional row table.
struct Report {
  std::vector<std::pair<std::string, Cell>> scalars;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string rows_key = "rows";

  void put(const std::string& key, Cell value) {
    scalars.emplace_back(key, std::move(value));
  }
};

std::string render_table(const Report& r) {
  std::string out;
  for (const auto& [k, c] : r.scalars) out += k + "=" + cell_text(c) + "\n";
  if (!r.columns.empty()) {
    std::vector<size_t> width(r.columns.size());
    std::vector<std::vector<std::string>> cells;
    cells.reserve(r.rows.size());
    for (size_t j = 0; j < r.columns.size(); ++j)
      width[j] = r.columns[j].size();
    for (const auto& row : r.rows) {
      std::vector<std::string> line;
      line.reserve(row.size());
      for (size_t j = 0; j < row.size(); ++j) {
        line.push_back(cell_text(row[j]));
        width[j] = std::max(width[j], line.back().size());
      }
      cells.push_back(std::move(line));
    }
    out += "\n";
    auto emit = [&](const std::vector<std::string>& line) {
      for (size_t j = 0; j < line.size(); ++j) {
        if (j) out += "  ";
        out += line[j];
        if (j + 1 < line.size())
          out.append(width[j] - line[j].size(), ' ');
      }
      out += "\n";
    };
    emit(r.columns);
    for (const auto& line : cells) emit(line);
  }
  return out;
}

std::string render_csv(const Report& r) {
  std::string out;
  if (!r.columns.empty()) {
    // Row-structured reports export the rows only (one line per gamma).
    for (size_t j = 0; j < r.columns.size(); ++j) {
      if (j) out += ",";
      out += csv_escape(r.columns[j]);
    }
    out += "\n";
    for (const auto& row : r.rows) {
      for (size_t j = 0; j < row.size(); ++j) {
        if (j) out += ",";
        out += csv_escape(cell_text(row[j]));
      }
      out += "\n";
    }
    return out;
  }
  std::string header, values;
  for (size_t i = 0; i < r.scalars.size(); ++i) {
    if (i) {
      header += ",";
      values += ",";
    }
    header += csv_escape(r.scalars[i].first);
    values += csv_escape(cell_text(r.scalars[i].second));
  }
  return header + "\n" + values + "\n";
}

std::string render_structured(const Report& r) {
  json obj;
  for (const auto& [k, c] : r.scalars) obj[k] = cell_json(c);
  if (!r.columns.empty()) {
    json arr = json::array();
    for (const auto& row : r.rows) {
      json jr;
      for (size_t j = 0; j < row.size(); ++j) jr[r.columns[j]] = cell_json(row[j]);
      arr.push_back(std::move(jr));
    }
    obj[r.rows_key] = std::move(arr);
  }
  return obj.dump(2) + "\n";
}

std::string render(const Report& r, const std::string& format) {
  if (format == "table") return render_table(r);
  if (format == "csv") return render_csv(r);
  if (format == "structured") return render_structured(r);
  throw std::invalid_argument("unknown --format '" + format +
                              "' (expected table, csv, or structured)");
}

void emit(const Report& r, const std::string& format,
          const std::string& out_path) {
  const std::string text = render(r, format);
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open --out file: " + out_path);
  os << text;
  if (!os.flush()) throw std::runtime_error("failed writing: " + out_path);
}

// --- flag value parsers ------------------------------------------------------

double parse_real(const std::string& text, const std::string& what) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": bad number '" + text + "'");
  }
}

// const:<v>x<N> or file:<path> (one value per line).
std::vector<double> parse_profile(const std::string& text,
                                  const std::string& what, bool positive) {
  auto check = [&](double v) {
    if (!std::isfinite(v))
      throw std::invalid_argument(what + ": values must be finite");
    if (positive && v <= 0.0)
      throw std::invalid_argument(what + ": values must be positive");
  };
  if (text.rfind("const:", 0) == 0) {
    const std::string rest = text.substr(6);
    const size_t x = rest.rfind('x');
    if (x == std::string::npos || x == 0 || x + 1 == rest.size())
      throw std::invalid_argument(what + ": expected const:<value>x<count>");
    const double v = parse_real(rest.substr(0, x), what);
    check(v);
    std::int64_t n = 0;
    try {
      size_t pos = 0;
      n = std::stoll(rest.substr(x + 1), &pos);
      if (pos != rest.size() - x - 1) throw std::invalid_argument(rest);
    } catch (const std::exception&) {
      throw std::invalid_argument(what + ": bad count in const:<value>x<count>");
    }
    if (n < 1) throw std::invalid_argument(what + ": count must be >= 1");
    return std::vector<double>(static_cast<size_t>(n), v);
  }
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    std::ifstream is(path);
    if (!is) throw std::invalid_argument(what + ": cannot open file " + path);
    std::vector<double> out;
    std::string line;
    while (std::getline(is, line)) {
      const size_t a = line.find_first_not_of(" \t\r");
      if (a == std::string::npos) continue;
      const size_t b = line.find_last_not_of(" \t\r");
      const double v = parse_real(line.substr(a, b - a + 1), what);
      check(v);
      out.push_back(v);
    }
    if (out.empty())
      throw std::invalid_argument(what + ": file holds no values: " + path);
    return out;
  }
  throw std::invalid_argument(what +
                              ": expected const:<value>x<count> or file:<path>");
}

std::vector<double> parse_gammas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double g = parse_real(item, "--gammas");
    if (!(g >= 0.0))
      throw std::invalid_argument("--gammas: values must be >= 0");
    out.push_back(g);
  }
  if (out.empty()) throw std::invalid_argument("--gammas: empty list");
  return out;
}

normtail::Point read_point_file(const std::string& path,
                                const normtail::SpaceDescriptor& space) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open point file: " + path);
  return normtail::read_point(is, space);
}

// --- subcommand bodies -------------------------------------------------------

Report run_kappa(const std::string& space_text) {
  const auto space = normtail::parse_space(space_text);
  const auto cert = normtail::kappa_space(space);
  Report r;
  r.put("space", normtail::format_space(space));
  r.put("dim", normtail::space_dim(space));
  r.put("kappa", cert.kappa);
  r.put("kappa_plus", cert.kappa_plus);
  r.put("rho_opt", cert.rho);
  r.put("smooth", cert.is_smooth());
  if (const auto* lp = std::get_if<normtail::Lp>(&space))
    r.put("display_bound", normtail::display_bound_lp(lp->n, lp->p));
  else if (const auto* sc = std::get_if<normtail::Schatten>(&space))
    r.put("display_bound",
          normtail::display_bound_schatten(sc->m, sc->n, sc->p));
  return r;
}

Report run_gamma_star(double alpha, const std::string& sigma_text) {
  const normtail::SigmaProfile sigma(parse_profile(sigma_text, "--sigma", true));
  Report r;
  r.put("alpha", alpha);
  r.put("N", sigma.size());
  r.put("sigma_l2", sigma.l2());
  r.put("gamma_star", normtail::gamma_star(alpha, sigma));
  return r;
}

bool is_scalar_variant(const std::string& v) {
  return v == "scalar_i" || v == "scalar_subgauss" || v == "scalar_bounded";
}

normtail::ScalarVariant scalar_variant_from_string(const std::string& v) {
  if (v == "scalar_i") return normtail::ScalarVariant::general;
  if (v == "scalar_subgauss") return normtail::ScalarVariant::subgauss;
  return normtail::ScalarVariant::bounded;
}

Report run_bound(const std::string& variant_text, double alpha, double kappa,
                 bool kappa_given, const std::string& sigma_text,
                 const std::string& mu_text, bool mu_given, double gamma) {
  Report r;
  if (is_scalar_variant(variant_text)) {
    if (kappa_given)
      throw std::invalid_argument(
          "bound: scalar variants take no --kappa (the bound is norm-free)");
    const std::vector<double> nu = parse_profile(sigma_text, "--sigma", true);
    std::vector<double> mu(nu.size(), 0.0);
    if (mu_given) {
      mu = parse_profile(mu_text, "--mu", false);
      if (mu.size() != nu.size())
        throw std::invalid_argument("bound: --mu and --sigma lengths differ");
    }
    const auto sv = scalar_variant_from_string(variant_text);
    const normtail::SigmaProfile nu_prof(nu);
    const double gs = sv == normtail::ScalarVariant::general
                          ? normtail::gamma_star(alpha, nu_prof)
                          : std::numeric_limits<double>::infinity();
    const auto regime =
        sv == normtail::ScalarVariant::general
            ? (gamma <= gs ? normtail::Regime::quadratic
                           : normtail::Regime::alpha_tail)
            : normtail::Regime::not_applicable;
    double mu_sum = 0.0;
    for (double m : mu) mu_sum += m;
    r.put("variant", variant_text);
    r.put("alpha", alpha);
    r.put("gamma", gamma);
    r.put("mu_sum", mu_sum);
    r.put("N", static_cast<std::int64_t>(nu.size()));
    r.put("threshold", normtail::scalar_deviation_level(mu, nu, gamma));
    r.put("bound", normtail::scalar_bound(sv, alpha, mu, nu, gamma));
    r.put("gamma_star", gs);
    r.put("regime", normtail::to_string(regime));
    return r;
  }
  if (mu_given)
    throw std::invalid_argument("bound: --mu applies to scalar variants only");
  const auto variant = normtail::tail_variant_from_string(variant_text);
  const normtail::SigmaProfile sigma(parse_profile(sigma_text, "--sigma", true));
  const auto res = normtail::tail_bound({variant, alpha, kappa, sigma, gamma});
  r.put("variant", variant_text);
  r.put("alpha", alpha);
  r.put("gamma", gamma);
  r.put("kappa", kappa);
  r.put("N", sigma.size());
  r.put("threshold", res.threshold);
  r.put("bound", res.prob_bound);
  r.put("gamma_star", res.gamma_star);
  r.put("regime", normtail::to_string(res.regime));
  return r;
}

Report run_invert(const std::string& variant_text, double alpha, double kappa,
                  const std::string& sigma_text, double eps) {
  const auto variant = normtail::tail_variant_from_string(variant_text);
  const normtail::SigmaProfile sigma(parse_profile(sigma_text, "--sigma", true));
  const double gamma =
      normtail::invert_gamma(variant, alpha, kappa, sigma, eps);
  const auto res = normtail::tail_bound({variant, alpha, kappa, sigma, gamma});
  Report r;
  r.put("variant", variant_text);
  r.put("alpha", alpha);
  r.put("kappa", kappa);
  r.put("N", sigma.size());
  r.put("target_eps", eps);
  r.put("gamma", gamma);
  r.put("threshold", res.threshold);
  r.put("bound", res.prob_bound);
  r.put("gamma_star", res.gamma_star);
  r.put("regime", normtail::to_string(res.regime));
  return r;
}

Report run_verify_smooth(const std::string& space_text, std::int64_t trials,
                         std::uint64_t seed, bool cert_given, double kappa,
                         double kappa_plus, double rho) {
  const auto space = normtail::parse_space(space_text);
  const normtail::RegularityCertificate cert =
      cert_given ? normtail::RegularityCertificate{kappa, kappa_plus, rho}
                 : normtail::kappa_space(space);
  const auto rep = normtail::verify_smoothness(space, cert, trials, seed);
  Report r;
  r.put("space", normtail::format_space(space));
  r.put("trials", rep.trials);
  r.put("seed", seed);
  r.put("kappa", cert.kappa);
  r.put("kappa_plus", cert.kappa_plus);
  r.put("rho", cert.rho);
  r.put("claimed_kappa", rep.claimed_kappa);
  r.put("empirical_kappa", rep.empirical_kappa);
  r.put("worst_violation_ratio", rep.worst_violation_ratio);
  r.put("sandwich_worst", rep.sandwich_worst);
  r.put("passed", rep.passed);
  return r;
}

Report run_char_check(const std::string& space_text, double kappa,
                      std::int64_t trials, std::uint64_t seed) {
  const auto space = normtail::parse_space(space_text);
  const auto rep = normtail::char_check(space, kappa, trials, seed);
  Report r;
  r.put("space", normtail::format_space(space));
  r.put("kappa", rep.claimed_kappa);
  r.put("trials", rep.trials);
  r.put("seed", seed);
  r.put("worst_monotone_ratio", rep.worst_monotone_ratio);
  r.put("worst_lipschitz_ratio", rep.worst_lipschitz_ratio);
  r.put("passed", rep.passed);
  return r;
}

Report run_trace_check(const std::string& f_name, double lo, double hi,
                       int dim, std::int64_t trials, std::uint64_t seed) {
  if (dim < 2 || dim > 64)
    throw std::invalid_argument("trace-check: --dim must lie in [2, 64]");
  if (trials < 1)
    throw std::invalid_argument("trace-check: --trials must be >= 1");
  const auto tf = normtail::make_trace_function(f_name, lo, hi);
  const double grid_slack = normtail::divided_difference_slack(tf, 200);

  normtail::CounterRng rng(seed, 0x74726163);
  const double margin = 0.05 * (hi - lo);
  const double fd_h = 5e-4;
  double worst_rel = 0.0;
  double worst_lower = std::numeric_limits<double>::infinity();
  double worst_upper = std::numeric_limits<double>::infinity();
  for (std::int64_t t = 0; t < trials; ++t) {
    Eigen::MatrixXd a(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) a(i, j) = rng.normal();
    Eigen::MatrixXd sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd lam = es.eigenvalues();
    const double lmin = lam.minCoeff(), lmax = lam.maxCoeff();
    Eigen::VectorXd mapped(dim);
    for (int i = 0; i < dim; ++i) {
      const double u =
          lmax > lmin ? (lam[i] - lmin) / (lmax - lmin) : 0.5;
      mapped[i] = lo + margin + u * (hi - lo - 2.0 * margin);
    }
    Eigen::MatrixXd x = es.eigenvectors() * mapped.asDiagonal() *
                        es.eigenvectors().transpose();
    Eigen::MatrixXd h(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) h(i, j) = rng.normal();
    h = 0.5 * (h + h.transpose()).eval();
    h /= h.norm();

    const double form = normtail::trace_hessian_form(tf, x, h);
    const double fp = normtail::trace_value(tf, x + fd_h * h);
    const double f0 = normtail::trace_value(tf, x);
    const double fm = normtail::trace_value(tf, x - fd_h * h);
    const double fd = (fp - 2.0 * f0 + fm) / (fd_h * fd_h);
    worst_rel = std::max(worst_rel,
                         std::abs(form - fd) / std::max(1.0, std::abs(form)));
    const auto [low, high] = normtail::trace_hessian_bounds(tf, x, h);
    const double scale = std::max(1.0, std::abs(form));
    worst_lower = std::min(worst_lower, (form - low) / scale);
    worst_upper = std::min(worst_upper, (high - form) / scale);
  }
  const bool passed = grid_slack >= -1e-9 && worst_rel <= 1e-5 &&
                      worst_lower >= -1e-9 && worst_upper >= -1e-9;
  Report r;
  r.put("f", tf.name);
  r.put("lo", lo);
  r.put("hi", hi);
  r.put("theta_minus", tf.theta_minus);
  r.put("theta_plus", tf.theta_plus);
  r.put("mu_minus", tf.mu_minus);
  r.put("mu_plus", tf.mu_plus);
  r.put("grid_slack", grid_slack);
  r.put("dim", static_cast<std::int64_t>(dim));
  r.put("trials", trials);
  r.put("seed", seed);
  r.put("worst_fd_rel_error", worst_rel);
  r.put("worst_lower_slack", worst_lower);
  r.put("worst_upper_slack", worst_upper);
  r.put("passed", passed);
  return r;
}

Report run_huber_check(const std::string& space_text, double beta,
                       std::int64_t trials, std::uint64_t seed) {
  if (trials < 1)
    throw std::invalid_argument("huber-check: --trials must be >= 1");
  const auto space = normtail::parse_space(space_text);
  normtail::CounterRng rng(seed, 0x68756265);
  constexpr double kScales[3] = {1.0, 0.1, 10.0};
  double worst_step = -std::numeric_limits<double>::infinity();
  double worst_pairing = -std::numeric_limits<double>::infinity();
  for (std::int64_t t = 0; t < trials; ++t) {
    const normtail::Point xi = normtail::scale(
        kScales[t % 3], normtail::gaussian_point(space, rng));
    const normtail::Point eta = normtail::scale(
        kScales[(t / 3) % 3], normtail::gaussian_point(space, rng));
    const double step =
        std::abs(normtail::huber(space, beta, normtail::add(xi, eta)) -
                 normtail::huber(space, beta, xi)) -
        normtail::norm(space, eta);
    worst_step = std::max(worst_step, step);
    normtail::Point x = normtail::gaussian_point(space, rng);
    const double dn = normtail::dual_norm(space, x);
    if (dn > 1e-12) {
      x = normtail::scale(1.0 / dn, x);
      const double pairing = normtail::inner(x, xi) - 0.5 * beta -
                             normtail::huber(space, beta, xi);
      worst_pairing = std::max(worst_pairing, pairing);
    }
  }
  const bool passed = worst_step <= 1e-10 && worst_pairing <= 1e-10;
  Report r;
  r.put("space", normtail::format_space(space));
  r.put("beta", beta);
  r.put("trials", trials);
  r.put("seed", seed);
  r.put("worst_step_slack", worst_step);
  r.put("worst_pairing_slack", worst_pairing);
  r.put("passed", passed);
  return r;
}

Report run_simulate(const normtail::SimConfig& config) {
  const auto rep = normtail::run(config);
  Report r;
  r.put("scheme", rep.scheme_text);
  r.put("space", rep.space_text);
  r.put("variant", rep.variant);
  r.put("alpha", rep.alpha);
  r.put("kappa", rep.kappa);
  r.put("N", rep.N);
  r.put("trials", rep.trials);
  r.put("seed", rep.seed);
  r.put("ci_level", rep.ci_level);
  r.put("sigma_l2", rep.sigma_l2);
  r.put("certified", rep.certified);
  r.put("mean_sq_norm", rep.mean_sq_norm);
  r.put("mean_sq_stderr", rep.mean_sq_stderr);
  r.put("second_moment_bound", rep.second_moment_bound);
  r.put("norm_min", rep.norm_min);
  r.put("norm_max", rep.norm_max);
  r.columns = {"gamma",          "threshold", "hits",  "trials",
               "freq",           "freq_upper_conf",    "bound", "regime"};
  for (const auto& row : rep.rows)
    r.rows.push_back({row.gamma, row.threshold, row.hits, rep.trials,
                      row.freq, row.freq_upper_conf, row.analytic_bound,
                      normtail::to_string(row.regime)});
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smooth-norm machinery and martingale tail bounds"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string out_path;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format,
                    "output format: table, csv, or structured")
        ->capture_default_str();
    cmd->add_option("--out", out_path, "write the report to a file");
  };

  std::uint64_t seed = 1;
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed (echoed into the report)")
        ->capture_default_str();
  };

  // kappa
  auto* c_kappa = app.add_subcommand(
      "kappa", "smoothness/regularity certificate of a space");
  std::string space_text;
  c_kappa->add_option("--space", space_text, "space descriptor")->required();
  add_common(c_kappa);

  // gamma-star
  auto* c_gs = app.add_subcommand(
      "gamma-star", "quadratic/alpha-tail regime crossover of a profile");
  double gs_alpha = 2.0;
  std::string gs_sigma;
  c_gs->add_option("--alpha", gs_alpha, "light-tail exponent in [1, 2]")
      ->required();
  c_gs->add_option("--sigma", gs_sigma, "const:<v>x<N> or file:<path>")
      ->required();
  add_common(c_gs);

  // bound
  auto* c_bound =
      app.add_subcommand("bound", "tail probability bound at a given gamma");
  std::string b_variant;
  double b_alpha = 2.0, b_kappa = 1.0, b_gamma = 0.0;
  std::string b_sigma, b_mu;
  c_bound
      ->add_option("--variant", b_variant,
                   "regular_i|regular_ii|regular_iii|smooth_i|smooth_ii|"
                   "smooth_iii|scalar_i|scalar_subgauss|scalar_bounded")
      ->required();
  c_bound->add_option("--alpha", b_alpha, "light-tail exponent in [1, 2]")
      ->capture_default_str();
  auto* b_kappa_opt =
      c_bound->add_option("--kappa", b_kappa, "smoothness/regularity constant")
          ->capture_default_str();
  c_bound->add_option("--sigma", b_sigma, "const:<v>x<N> or file:<path>")
      ->required();
  auto* b_mu_opt = c_bound->add_option(
      "--mu", b_mu, "per-step mean bounds (scalar variants only)");
  c_bound->add_option("--gamma", b_gamma, "deviation level >= 0")->required();
  add_common(c_bound);

  // invert
  auto* c_inv = app.add_subcommand(
      "invert", "smallest gamma whose bound is below a target");
  std::string i_variant, i_sigma;
  double i_alpha = 2.0, i_kappa = 1.0, i_eps = 0.0;
  c_inv
      ->add_option("--variant", i_variant,
                   "regular_i|regular_ii|regular_iii|smooth_i|smooth_ii|"
                   "smooth_iii")
      ->required();
  c_inv->add_option("--alpha", i_alpha, "light-tail exponent in [1, 2]")
      ->capture_default_str();
  c_inv->add_option("--kappa", i_kappa, "smoothness/regularity constant")
      ->capture_default_str();
  c_inv->add_option("--sigma", i_sigma, "const:<v>x<N> or file:<path>")
      ->required();
  c_inv->add_option("--eps", i_eps, "target probability bound")->required();
  add_common(c_inv);

  // verify-smooth
  auto* c_vs = app.add_subcommand(
      "verify-smooth", "sampled check of the smoothness inequality");
  std::string vs_space;
  std::int64_t vs_trials = 100000;
  double vs_kappa = 0.0, vs_kappa_plus = 0.0, vs_rho = 0.0;
  c_vs->add_option("--space", vs_space, "space descriptor")->required();
  c_vs->add_option("--trials", vs_trials, "sampled pairs")
      ->capture_default_str();
  auto* vs_k = c_vs->add_option("--kappa", vs_kappa,
                                "certificate kappa (default: computed)");
  auto* vs_kp = c_vs->add_option("--kappa-plus", vs_kappa_plus,
                                 "certificate kappa_plus");
  auto* vs_r = c_vs->add_option("--rho", vs_rho, "certificate exponent rho");
  add_seed(c_vs);
  add_common(c_vs);

  // char-check
  auto* c_cc = app.add_subcommand(
      "char-check", "gradient-difference characterizations of smoothness");
  std::string cc_space;
  double cc_kappa = 1.0;
  std::int64_t cc_trials = 100000;
  c_cc->add_option("--space", cc_space, "space descriptor")->required();
  c_cc->add_option("--kappa", cc_kappa, "claimed smoothness constant")
      ->required();
  c_cc->add_option("--trials", cc_trials, "sampled pairs")
      ->capture_default_str();
  add_seed(c_cc);
  add_common(c_cc);

  // trace-check
  auto* c_tc = app.add_subcommand(
      "trace-check",
      "second differential of Tr f(X) vs finite differences and its "
      "divided-difference sandwich");
  std::string tc_f;
  double tc_lo = 0.0, tc_hi = 0.0;
  int tc_dim = 5;
  std::int64_t tc_trials = 100;
  c_tc->add_option("--f", tc_f, "t3, t4, or exp")->required();
  c_tc->add_option("--lo", tc_lo, "domain lower end")->required();
  c_tc->add_option("--hi", tc_hi, "domain upper end")->required();
  c_tc->add_option("--dim", tc_dim, "matrix dimension")->capture_default_str();
  c_tc->add_option("--trials", tc_trials, "sampled matrices")
      ->capture_default_str();
  add_seed(c_tc);
  add_common(c_tc);

  // huber-check
  auto* c_hc = app.add_subcommand(
      "huber-check", "Huber smoothing: 1-Lipschitz steps and the pairing "
                     "inequality <x, xi> <= beta/2 + V_beta(xi)");
  std::string hc_space;
  double hc_beta = 1.0;
  std::int64_t hc_trials = 10000;
  c_hc->add_option("--space", hc_space, "space descriptor")->required();
  c_hc->add_option("--beta", hc_beta, "Huber parameter > 0")->required();
  c_hc->add_option("--trials", hc_trials, "sampled points")
      ->capture_default_str();
  add_seed(c_hc);
  add_common(c_hc);

  // simulate
  auto* c_sim = app.add_subcommand(
      "simulate", "Monte Carlo martingale tails vs the analytic bounds");
  std::string sim_scheme, sim_space, sim_dir_file, sim_variant, sim_sigma,
      sim_bounded;
  std::int64_t sim_N = 1, sim_trials = 1;
  std::string sim_gammas;
  double sim_kappa = 0.0, sim_alpha = 0.0;
  int sim_threads = 1;
  c_sim->add_option("--scheme", sim_scheme,
                    "rademacher-basis:n=..., fixed-rademacher:sigma=..., "
                    "gaussian-iso:n=...[,scale=...], bounded-sphere:sigma=...")
      ->required();
  c_sim->add_option("--space", sim_space,
                    "evaluation space (required by fixed-rademacher and "
                    "bounded-sphere)");
  c_sim->add_option("--direction-file", sim_dir_file,
                    "point file with the fixed-rademacher direction");
  c_sim->add_option("--N", sim_N, "number of martingale steps")->required();
  c_sim->add_option("--trials", sim_trials, "Monte Carlo trials")->required();
  c_sim->add_option("--gammas", sim_gammas, "comma-separated deviation levels")
      ->required();
  c_sim->add_option("--variant", sim_variant,
                    "tail variant (default: the certified one)");
  auto* sim_k = c_sim->add_option("--kappa", sim_kappa,
                                  "override kappa (marks report uncertified)");
  auto* sim_a = c_sim->add_option("--alpha", sim_alpha,
                                  "override alpha (marks report uncertified)");
  auto* sim_s = c_sim->add_option(
      "--sigma", sim_sigma, "override sigma profile (marks report uncertified)");
  auto* sim_b = c_sim->add_option(
      "--bounded", sim_bounded,
      "override boundedness, true|false (marks report uncertified)");
  c_sim->add_option("--threads", sim_threads, "worker threads")
      ->capture_default_str();
  add_seed(c_sim);
  add_common(c_sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    Report report;
    if (app.got_subcommand(c_kappa)) {
      report = run_kappa(space_text);
    } else if (app.got_subcommand(c_gs)) {
      report = run_gamma_star(gs_alpha, gs_sigma);
    } else if (app.got_subcommand(c_bound)) {
      report = run_bound(b_variant, b_alpha, b_kappa, b_kappa_opt->count() > 0,
                         b_sigma, b_mu, b_mu_opt->count() > 0, b_gamma);
    } else if (app.got_subcommand(c_inv)) {
      report = run_invert(i_variant, i_alpha, i_kappa, i_sigma, i_eps);
    } else if (app.got_subcommand(c_vs)) {
      const int given = (vs_k->count() > 0) + (vs_kp->count() > 0) +
                        (vs_r->count() > 0);
      if (given != 0 && given != 3)
        throw std::invalid_argument(
            "verify-smooth: give all of --kappa/--kappa-plus/--rho or none");
      report = run_verify_smooth(vs_space, vs_trials, seed, given == 3,
                                 vs_kappa, vs_kappa_plus, vs_rho);
    } else if (app.got_subcommand(c_cc)) {
      report = run_char_check(cc_space, cc_kappa, cc_trials, seed);
    } else if (app.got_subcommand(c_tc)) {
      report = run_trace_check(tc_f, tc_lo, tc_hi, tc_dim, tc_trials, seed);
    } else if (app.got_subcommand(c_hc)) {
      report = run_huber_check(hc_space, hc_beta, hc_trials, seed);
    } else if (app.got_subcommand(c_sim)) {
      normtail::SimConfig config;
      if (!sim_space.empty()) config.space = normtail::parse_space(sim_space);
      std::optional<normtail::Point> direction;
      if (!sim_dir_file.empty()) {
        if (!config.space.has_value())
          throw std::invalid_argument(
              "simulate: --direction-file needs a --space");
        direction = read_point_file(sim_dir_file, *config.space);
      }
      config.scheme = normtail::parse_scheme(sim_scheme, config.space, direction);
      config.trials = sim_trials;
      config.N = sim_N;
      config.gammas = parse_gammas(sim_gammas);
      if (!sim_variant.empty())
        config.variant = normtail::tail_variant_from_string(sim_variant);
      if (sim_k->count() > 0) config.kappa_override = sim_kappa;
      if (sim_a->count() > 0) config.alpha_override = sim_alpha;
      if (sim_s->count() > 0)
        config.sigma_override = parse_profile(sim_sigma, "--sigma", true);
      if (sim_b->count() > 0) {
        if (sim_bounded == "true" || sim_bounded == "1")
          config.bounded_override = true;
        else if (sim_bounded == "false" || sim_bounded == "0")
          config.bounded_override = false;
        else
          throw std::invalid_argument("simulate: --bounded takes true|false");
      }
      config.seed = seed;
      config.threads = sim_threads;
      report = run_simulate(config);
    }
    emit(report, format, out_path);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
