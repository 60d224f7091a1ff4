#pragma once

#include <cstdio>
#include <string>

namespace zrsim {

// All floating-point output goes through this: 9 significant digits,
// matching the engine's tolerances and keeping outputs byte-stable.
inline std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace zrsim
