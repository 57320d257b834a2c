#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace obprm {

// All numbers leaving the library (CSV, SVG, JSON reports) go through these
// helpers: 12 significant digits, trailing zeros trimmed by %g, so repeated
// runs emit identical bytes.

inline std::string fmt_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// Round to the value that fmt_g12 prints, for fields stored as JSON numbers.
inline double round_g12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

}  // namespace obprm
