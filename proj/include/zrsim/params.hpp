#pragma once

#include <cmath>

#include "zrsim/types.hpp"
#include "zrsim/utility.hpp"

namespace zrsim {

// Exogenous quantities: user price p per unit data, capacity to consume c per
// billing cycle, Hotelling transport costs t1/t2 (user stickiness), and the
// CPs' ad-revenue rates a1/a2 per unit data. Defaults are the workhorse
// operating point p = 0.35, c = 4, t = 3.
struct ModelParams {
  double p = 0.35;
  double c = 4.0;
  double t1 = 3.0;
  double t2 = 3.0;
  double a1 = 1.0;
  double a2 = 1.0;
  Utility utility = Utility::log_one_plus();

  void validate() const {
    auto need = [](bool ok, const char* what) {
      if (!ok) throw InvalidParameter(what);
    };
    need(std::isfinite(p) && p > 0.0, "p must be > 0");
    need(std::isfinite(c) && c > 0.0, "c must be > 0");
    need(std::isfinite(t1) && t1 > 0.0, "t1 must be > 0");
    need(std::isfinite(t2) && t2 > 0.0, "t2 must be > 0");
    need(std::isfinite(a1) && a1 >= 0.0, "a1 must be >= 0");
    need(std::isfinite(a2) && a2 >= 0.0, "a2 must be >= 0");
    if (!utility.closed_form_log() && utility.domain_max() < c)
      throw InvalidParameter("custom utility domain does not cover [0, c]");
  }
};

}  // namespace zrsim
