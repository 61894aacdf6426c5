#include "normtail/text_format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace normtail {

std::string fmt_g(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
  return std::string(buf);
}

std::string fmt12(double v) { return fmt_g(v, 12); }

std::string fmt17(double v) { return fmt_g(v, 17); }

double round12(double v) {
  if (std::isnan(v) || std::isinf(v)) return v;
  return std::strtod(fmt12(v).c_str(), nullptr);
}

}  // namespace normtail
