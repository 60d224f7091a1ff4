#pragma once

#include <cmath>
#include <string>

#include "zrsim/types.hpp"

namespace zrsim {

// Hotelling split between the ISPs. The indifferent user at position x solves
//   u1 - t1 x = u2 - t2 (1 - x)   =>   x = (u1 - u2 + t2) / (t1 + t2),
// which reduces to (u1 - u2 + t) / (2 t) for t1 = t2 = t. Requires
// t1, t2 > |u1 - u2| so that x stays strictly inside (0, 1).
inline double market_share(double u1, double u2, double t1, double t2) {
  const double gap = std::abs(u1 - u2);
  auto reject = [&](const char* name, double t) {
    throw ModelDomainError(std::string("Hotelling validity violated: ") + name +
                           " = " + std::to_string(t) +
                           " <= |u1 - u2| = " + std::to_string(gap));
  };
  if (!(t1 > 0.0)) throw InvalidParameter("t1 must be > 0");
  if (!(t2 > 0.0)) throw InvalidParameter("t2 must be > 0");
  if (t1 <= gap) reject("t1", t1);
  if (t2 <= gap) reject("t2", t2);
  return (u1 - u2 + t2) / (t1 + t2);
}

// Mean user payoff: x u1 + (1-x) u2, minus the transport integrals
// t1 x^2 / 2 and t2 (1-x)^2 / 2 unless excluded.
inline double aggregate_user_surplus(double u1, double u2, double x, double t1,
                                     double t2, bool include_transport = true) {
  if (!(x >= 0.0 && x <= 1.0))
    throw InvalidParameter("market share x must lie in [0, 1]");
  double s = x * u1 + (1.0 - x) * u2;
  if (include_transport)
    s -= 0.5 * t1 * x * x + 0.5 * t2 * (1.0 - x) * (1.0 - x);
  return s;
}

// Duopoly (Hotelling split) or monopoly with an exogenously fixed share for
// ISP1; the monopoly benchmark freezes shares instead of taking t to
// infinity.
class MarketMode {
 public:
  static MarketMode duopoly() { return MarketMode{false, 0.5}; }

  static MarketMode monopoly(double fixed_share) {
    if (!(fixed_share >= 0.0 && fixed_share <= 1.0))
      throw InvalidParameter("monopoly fixed_share must lie in [0, 1]");
    return MarketMode{true, fixed_share};
  }

  bool is_monopoly() const { return monopoly_; }
  double fixed_share() const { return share_; }

  double share1(double u1, double u2, double t1, double t2) const {
    return monopoly_ ? share_ : market_share(u1, u2, t1, t2);
  }

 private:
  MarketMode(bool monopoly, double share) : monopoly_(monopoly), share_(share) {}

  bool monopoly_;
  double share_;
};

}  // namespace zrsim
