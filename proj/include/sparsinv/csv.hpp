#pragma once

#include <cstdio>
#include <string>

namespace sparsinv {

// Round-trippable decimal: 17 significant digits, "C" locale semantics
// (snprintf with %g never uses a locale-dependent grouping; the decimal point
// is fixed because the library never calls setlocale).
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace sparsinv
