#include "normtail/space.hpp"

#include "normtail/rng.hpp"
#include "normtail/text_format.hpp"

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace normtail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_exponent(double p, const std::string& where) {
  require(p >= 2.0, where + ": exponent p must lie in [2, inf], got " +
                        fmt12(p));
}

// Splits `s` on `delim` at parenthesis depth zero.
std::vector<std::string> split_top(const std::string& s, char delim) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == delim && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_exponent(const std::string& v) {
  if (v == "inf" || v == "Inf" || v == "INF") return kInf;
  size_t pos = 0;
  double p;
  try {
    p = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("space descriptor: bad exponent '" + v + "'");
  }
  require(pos == v.size(), "space descriptor: bad exponent '" + v + "'");
  return p;
}

int parse_dim(const std::string& v, const std::string& key) {
  size_t pos = 0;
  long n;
  try {
    n = std::stol(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("space descriptor: bad value for " + key +
                                ": '" + v + "'");
  }
  require(pos == v.size() && n >= 1 && n <= (1L << 30),
          "space descriptor: bad value for " + key + ": '" + v + "'");
  return static_cast<int>(n);
}

struct KvList {
  std::vector<std::pair<std::string, std::string>> items;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : items)
      if (k == key) return &v;
    return nullptr;
  }

  const std::string& need(const std::string& key,
                          const std::string& kind) const {
    const std::string* v = find(key);
    require(v != nullptr,
            "space descriptor: " + kind + " requires " + key + "=...");
    return *v;
  }
};

KvList parse_kv(const std::string& body, const std::string& kind) {
  KvList kv;
  if (strip(body).empty()) return kv;
  for (const std::string& part : split_top(body, ',')) {
    std::string item = strip(part);
    size_t eq = item.find('=');
    require(eq != std::string::npos && eq > 0,
            "space descriptor: expected key=value in '" + item + "' (" + kind +
                ")");
    kv.items.emplace_back(strip(item.substr(0, eq)),
                          strip(item.substr(eq + 1)));
  }
  return kv;
}

std::vector<SpaceDescriptor> parse_children(const std::string& v,
                                            const std::string& kind) {
  require(v.size() >= 2 && v.front() == '(' && v.back() == ')',
          "space descriptor: " + kind + " children must be parenthesized");
  std::string inner = v.substr(1, v.size() - 2);
  require(!strip(inner).empty(), "space descriptor: empty child list");
  std::vector<SpaceDescriptor> children;
  for (const std::string& part : split_top(inner, '|'))
    children.push_back(parse_space(strip(part)));
  return children;
}

}  // namespace

void validate_space(const SpaceDescriptor& space) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          require(s.n >= 1, "euclidean: dimension must be >= 1");
        } else if constexpr (std::is_same_v<T, Lp>) {
          require(s.n >= 1, "lp: dimension must be >= 1");
          check_exponent(s.p, "lp");
        } else if constexpr (std::is_same_v<T, Schatten>) {
          require(s.m >= 1 && s.n >= 1, "schatten: dimensions must be >= 1");
          check_exponent(s.p, "schatten");
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          check_exponent(s.p, "block");
          require(!s.children.empty(), "block: needs at least one child");
          for (const auto& c : s.children) validate_space(c);
        } else {
          require(!s.children.empty(), "sum: needs at least one child");
          for (const auto& c : s.children) validate_space(c);
          const std::string sig = shape_signature(s.children.front());
          for (const auto& c : s.children)
            require(shape_signature(c) == sig,
                    "sum: children must share one ambient space (got " + sig +
                        " vs " + shape_signature(c) + ")");
        }
      },
      space);
}

std::int64_t space_dim(const SpaceDescriptor& space) {
  return std::visit(
      [](const auto& s) -> std::int64_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          return s.n;
        } else if constexpr (std::is_same_v<T, Lp>) {
          return s.n;
        } else if constexpr (std::is_same_v<T, Schatten>) {
          return static_cast<std::int64_t>(s.m) * s.n;
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::int64_t d = 0;
          for (const auto& c : s.children) d += space_dim(c);
          return d;
        } else {
          return space_dim(s.children.front());
        }
      },
      space);
}

std::string shape_signature(const SpaceDescriptor& space) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          return "v" + std::to_string(s.n);
        } else if constexpr (std::is_same_v<T, Lp>) {
          return "v" + std::to_string(s.n);
        } else if constexpr (std::is_same_v<T, Schatten>) {
          return "m" + std::to_string(s.m) + "x" + std::to_string(s.n);
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::string sig = "(";
          for (size_t i = 0; i < s.children.size(); ++i) {
            if (i) sig += "|";
            sig += shape_signature(s.children[i]);
          }
          return sig + ")";
        } else {
          return shape_signature(s.children.front());
        }
      },
      space);
}

void check_point(const SpaceDescriptor& space, const Point& x) {
  std::visit(
      [&x](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean> || std::is_same_v<T, Lp>) {
          require(x.is_vector(), "point: expected a vector for " +
                                     shape_signature(SpaceDescriptor(s)));
          require(x.vec().size() == s.n,
                  "point: expected dimension " + std::to_string(s.n) +
                      ", got " + std::to_string(x.vec().size()));
        } else if constexpr (std::is_same_v<T, Schatten>) {
          require(x.is_matrix(), "point: expected a matrix");
          require(x.mat().rows() == s.m && x.mat().cols() == s.n,
                  "point: expected a " + std::to_string(s.m) + "x" +
                      std::to_string(s.n) + " matrix, got " +
                      std::to_string(x.mat().rows()) + "x" +
                      std::to_string(x.mat().cols()));
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          require(x.is_tuple(), "point: expected a tuple of child points");
          require(x.children().size() == s.children.size(),
                  "point: expected " + std::to_string(s.children.size()) +
                      " children, got " + std::to_string(x.children().size()));
          for (size_t i = 0; i < s.children.size(); ++i)
            check_point(s.children[i], x.children()[i]);
        } else {
          check_point(s.children.front(), x);
        }
      },
      space);
}

Point zero_point(const SpaceDescriptor& space) {
  return std::visit(
      [](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean> || std::is_same_v<T, Lp>) {
          return Point(Eigen::VectorXd::Zero(s.n).eval());
        } else if constexpr (std::is_same_v<T, Schatten>) {
          return Point(Eigen::MatrixXd::Zero(s.m, s.n).eval());
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::vector<Point> c;
          c.reserve(s.children.size());
          for (const auto& ch : s.children) c.push_back(zero_point(ch));
          return Point(std::move(c));
        } else {
          return zero_point(s.children.front());
        }
      },
      space);
}

namespace {

void require_congruent(const Point& a, const Point& b) {
  require(a.value.index() == b.value.index(),
          "point arithmetic: mismatched point kinds");
  if (a.is_vector()) {
    require(a.vec().size() == b.vec().size(),
            "point arithmetic: mismatched vector sizes");
  } else if (a.is_matrix()) {
    require(a.mat().rows() == b.mat().rows() && a.mat().cols() == b.mat().cols(),
            "point arithmetic: mismatched matrix shapes");
  } else {
    require(a.children().size() == b.children().size(),
            "point arithmetic: mismatched tuple arities");
  }
}

}  // namespace

Point add(const Point& a, const Point& b) {
  require_congruent(a, b);
  if (a.is_vector()) return Point((a.vec() + b.vec()).eval());
  if (a.is_matrix()) return Point((a.mat() + b.mat()).eval());
  std::vector<Point> c;
  c.reserve(a.children().size());
  for (size_t i = 0; i < a.children().size(); ++i)
    c.push_back(add(a.children()[i], b.children()[i]));
  return Point(std::move(c));
}

Point sub(const Point& a, const Point& b) {
  require_congruent(a, b);
  if (a.is_vector()) return Point((a.vec() - b.vec()).eval());
  if (a.is_matrix()) return Point((a.mat() - b.mat()).eval());
  std::vector<Point> c;
  c.reserve(a.children().size());
  for (size_t i = 0; i < a.children().size(); ++i)
    c.push_back(sub(a.children()[i], b.children()[i]));
  return Point(std::move(c));
}

Point scale(double c, const Point& a) {
  if (a.is_vector()) return Point((c * a.vec()).eval());
  if (a.is_matrix()) return Point((c * a.mat()).eval());
  std::vector<Point> out;
  out.reserve(a.children().size());
  for (const auto& ch : a.children()) out.push_back(scale(c, ch));
  return Point(std::move(out));
}

void add_in_place(Point& a, const Point& b) {
  require_congruent(a, b);
  if (a.is_vector()) {
    a.vec() += b.vec();
  } else if (a.is_matrix()) {
    a.mat() += b.mat();
  } else {
    for (size_t i = 0; i < a.children().size(); ++i)
      add_in_place(a.children()[i], b.children()[i]);
  }
}

double inner(const Point& a, const Point& b) {
  require_congruent(a, b);
  if (a.is_vector()) return a.vec().dot(b.vec());
  if (a.is_matrix()) return (a.mat().array() * b.mat().array()).sum();
  double s = 0.0;
  for (size_t i = 0; i < a.children().size(); ++i)
    s += inner(a.children()[i], b.children()[i]);
  return s;
}

Point gaussian_point(const SpaceDescriptor& space, CounterRng& rng) {
  return std::visit(
      [&rng](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean> || std::is_same_v<T, Lp>) {
          Eigen::VectorXd v(s.n);
          for (int i = 0; i < s.n; ++i) v[i] = rng.normal();
          return Point(std::move(v));
        } else if constexpr (std::is_same_v<T, Schatten>) {
          Eigen::MatrixXd m(s.m, s.n);
          for (int i = 0; i < s.m; ++i)
            for (int j = 0; j < s.n; ++j) m(i, j) = rng.normal();
          return Point(std::move(m));
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::vector<Point> c;
          c.reserve(s.children.size());
          for (const auto& ch : s.children)
            c.push_back(gaussian_point(ch, rng));
          return Point(std::move(c));
        } else {
          return gaussian_point(s.children.front(), rng);
        }
      },
      space);
}

SpaceDescriptor parse_space(const std::string& text) {
  const std::string t = strip(text);
  size_t colon = t.find(':');
  const std::string kind = colon == std::string::npos ? t : t.substr(0, colon);
  const std::string body =
      colon == std::string::npos ? "" : t.substr(colon + 1);

  SpaceDescriptor out;
  if (kind == "euclidean") {
    KvList kv = parse_kv(body, kind);
    out = Euclidean{parse_dim(kv.need("n", kind), "n")};
  } else if (kind == "lp") {
    KvList kv = parse_kv(body, kind);
    out = Lp{parse_dim(kv.need("n", kind), "n"),
             parse_exponent(kv.need("p", kind))};
  } else if (kind == "schatten") {
    KvList kv = parse_kv(body, kind);
    out = Schatten{parse_dim(kv.need("m", kind), "m"),
                   parse_dim(kv.need("n", kind), "n"),
                   parse_exponent(kv.need("p", kind))};
  } else if (kind == "block") {
    KvList kv = parse_kv(body, kind);
    out = BlockLp{parse_exponent(kv.need("p", kind)),
                  parse_children(kv.need("children", kind), kind)};
  } else if (kind == "sum") {
    KvList kv = parse_kv(body, kind);
    out = SumOfNorms{parse_children(kv.need("children", kind), kind)};
  } else {
    throw std::invalid_argument(
        "space descriptor: unknown kind '" + kind +
        "' (expected euclidean, lp, schatten, block, or sum)");
  }
  validate_space(out);
  return out;
}

std::string format_space(const SpaceDescriptor& space) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean>) {
          return "euclidean:n=" + std::to_string(s.n);
        } else if constexpr (std::is_same_v<T, Lp>) {
          return "lp:n=" + std::to_string(s.n) + ",p=" + fmt12(s.p);
        } else if constexpr (std::is_same_v<T, Schatten>) {
          return "schatten:m=" + std::to_string(s.m) +
                 ",n=" + std::to_string(s.n) + ",p=" + fmt12(s.p);
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::string out = "block:p=" + fmt12(s.p) + ",children=(";
          for (size_t i = 0; i < s.children.size(); ++i) {
            if (i) out += "|";
            out += format_space(s.children[i]);
          }
          return out + ")";
        } else {
          std::string out = "sum:children=(";
          for (size_t i = 0; i < s.children.size(); ++i) {
            if (i) out += "|";
            out += format_space(s.children[i]);
          }
          return out + ")";
        }
      },
      space);
}

namespace {

double read_double(std::istream& in) {
  double v;
  if (!(in >> v))
    throw std::invalid_argument("point input: expected a numeric value");
  return v;
}

}  // namespace

Point read_point(std::istream& in, const SpaceDescriptor& space) {
  return std::visit(
      [&in](const auto& s) -> Point {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Euclidean> || std::is_same_v<T, Lp>) {
          Eigen::VectorXd v(s.n);
          for (int i = 0; i < s.n; ++i) v[i] = read_double(in);
          return Point(std::move(v));
        } else if constexpr (std::is_same_v<T, Schatten>) {
          long m, n;
          if (!(in >> m >> n))
            throw std::invalid_argument("point input: expected 'm n' header");
          require(m == s.m && n == s.n,
                  "point input: header " + std::to_string(m) + " " +
                      std::to_string(n) + " does not match space " +
                      std::to_string(s.m) + "x" + std::to_string(s.n));
          Eigen::MatrixXd x(s.m, s.n);
          for (int i = 0; i < s.m; ++i)
            for (int j = 0; j < s.n; ++j) x(i, j) = read_double(in);
          return Point(std::move(x));
        } else if constexpr (std::is_same_v<T, BlockLp>) {
          std::vector<Point> c;
          c.reserve(s.children.size());
          for (const auto& ch : s.children) c.push_back(read_point(in, ch));
          return Point(std::move(c));
        } else {
          return read_point(in, s.children.front());
        }
      },
      space);
}

void write_point(std::ostream& out, const Point& x) {
  if (x.is_vector()) {
    const auto& v = x.vec();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (i) out << ' ';
      out << fmt17(v[i]);
    }
    out << '\n';
  } else if (x.is_matrix()) {
    const auto& m = x.mat();
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (j) out << ' ';
        out << fmt17(m(i, j));
      }
      out << '\n';
    }
  } else {
    for (const auto& c : x.children()) write_point(out, c);
  }
}

}  // namespace normtail
