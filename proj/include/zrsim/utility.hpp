#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "zrsim/types.hpp"

namespace zrsim {

// Per-CP consumption utility psi: nonnegative, strictly increasing, concave,
// continuously differentiable. The default is psi(z) = log(1 + z), for which
// the consumption problem has closed forms; a custom psi is handled
// numerically through its marginal.
class Utility {
 public:
  static Utility log_one_plus() { return Utility{}; }

  // Caller-supplied psi and psi'. psi' must be strictly positive and
  // non-increasing on [0, domain_max]; checked by sampling at construction,
  // a violation throws InvalidParameter.
  static Utility custom(std::function<double(double)> value,
                        std::function<double(double)> marginal,
                        double domain_max) {
    if (!value || !marginal)
      throw InvalidParameter("custom utility: psi and psi' must be callable");
    if (!(domain_max > 0.0) || !std::isfinite(domain_max))
      throw InvalidParameter("custom utility: domain_max must be positive and finite");
    if (value(0.0) < -1e-12)
      throw InvalidParameter("custom utility: psi(0) must be nonnegative");
    constexpr int kSamples = 128;
    double prev = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
      const double z = domain_max * i / kSamples;
      const double m = marginal(z);
      if (!(m > 0.0) || !std::isfinite(m))
        throw InvalidParameter("custom utility: psi' not strictly positive at z = " +
                               std::to_string(z));
      if (i > 0 && m > prev * (1.0 + 1e-9) + 1e-12)
        throw InvalidParameter("custom utility: psi' increases near z = " +
                               std::to_string(z) + "; psi is not concave");
      prev = m;
    }
    Utility u;
    u.log_form_ = false;
    u.value_ = std::move(value);
    u.marginal_ = std::move(marginal);
    u.domain_max_ = domain_max;
    return u;
  }

  double value(double z) const { return log_form_ ? std::log1p(z) : value_(z); }
  double marginal(double z) const {
    return log_form_ ? 1.0 / (1.0 + z) : marginal_(z);
  }
  bool closed_form_log() const { return log_form_; }
  double domain_max() const { return domain_max_; }

 private:
  Utility() = default;

  bool log_form_ = true;
  std::function<double(double)> value_;
  std::function<double(double)> marginal_;
  double domain_max_ = std::numeric_limits<double>::infinity();
};

}  // namespace zrsim
