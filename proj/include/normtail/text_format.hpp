// normtail/text_format.hpp
//
// Shared numeric text rendering.  All user-facing floats go through a
// %.12g-style formatter so table, CSV, and JSON output are byte-stable.

#pragma once

#include <string>

namespace normtail {

// printf("%.<precision>g") rendering; infinities render as "inf"/"-inf".
std::string fmt_g(double v, int precision);

// The 12-significant-digit rendering used by every CLI surface.
std::string fmt12(double v);

// Full-precision rendering that round-trips doubles exactly (%.17g).
std::string fmt17(double v);

// The double obtained by re-parsing fmt12(v): JSON emitters serialize this
// so structured output carries exactly the displayed precision.
double round12(double v);

}  // namespace normtail
