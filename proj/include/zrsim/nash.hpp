#pragma once

#include <cmath>

#include "zrsim/scenario.hpp"

namespace zrsim {

// Boundary coefficients of the CP game on the focal ISP for a fixed rival
// configuration. alpha: CP1's NN<->SN boundary, beta: CP2's NN<->NS,
// gamma: CP1's NS<->SS, delta: CP2's SN<->SS. The *1 coefficients multiply
// the deviating CP's own revenue rate; the *2 coefficients multiply the
// rival ISP's charge and carry the indicator that the CP sponsors there.
// All eight lie in [0, 1].
struct NashCoefficients {
  double alpha1 = 0.0, alpha2 = 0.0;
  double beta1 = 0.0, beta2 = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0;
  double delta1 = 0.0, delta2 = 0.0;
  Config opposing = Config::NN;
  bool degenerate = false;  // a zero-consumption denominator was resolved to 1
};

inline NashCoefficients nash_coefficients(const Scenario& sc, Config m_other,
                                          int focal_isp = 1) {
  if (focal_isp != 1 && focal_isp != 2)
    throw InvalidParameter("focal_isp must be 1 or 2");
  auto x = [&](Config own) { return sc.own_share(focal_isp, own, m_other); };
  auto th = [&](int cp, Config m) { return sc.theta.theta(cp, m); };

  NashCoefficients k;
  k.opposing = m_other;
  // Each pair comes from CP `cp` comparing the focal configurations hi
  // (sponsoring) and lo (not); the rival-side consumption theta_cp^{m_other}
  // enters through the share swing x(hi) - x(lo).
  auto fill = [&](Config hi, Config lo, int cp, double& c1, double& c2) {
    const double denom = x(hi) * th(cp, hi);
    const double swing = (x(hi) - x(lo)) * th(cp, m_other);
    if (!(denom > 0.0)) {
      c1 = 1.0;
      c2 = 0.0;
      k.degenerate = true;
      return;
    }
    c1 = 1.0 - (swing + x(lo) * th(cp, lo)) / denom;
    c2 = sponsors(m_other, cp) ? swing / denom : 0.0;
  };
  fill(Config::SN, Config::NN, 1, k.alpha1, k.alpha2);
  fill(Config::NS, Config::NN, 2, k.beta1, k.beta2);
  fill(Config::SS, Config::NS, 1, k.gamma1, k.gamma2);
  fill(Config::SS, Config::SN, 2, k.delta1, k.delta2);
  return k;
}

// The four equilibrium boundaries in the focal ISP's charge.
struct NeThresholds {
  double cp1_solo;   // a1 alpha1 + q_other alpha2   (NN <-> SN)
  double cp2_solo;   // a2 beta1  + q_other beta2    (NN <-> NS)
  double cp1_joint;  // a1 gamma1 + q_other gamma2   (NS <-> SS)
  double cp2_joint;  // a2 delta1 + q_other delta2   (SN <-> SS)
};

inline NeThresholds ne_thresholds(const NashCoefficients& k, double a1,
                                  double a2, double q_other) {
  return {a1 * k.alpha1 + q_other * k.alpha2,
          a2 * k.beta1 + q_other * k.beta2,
          a1 * k.gamma1 + q_other * k.gamma2,
          a2 * k.delta1 + q_other * k.delta2};
}

// Configurations that are Nash equilibria between the CPs on the focal ISP
// at charge q_own, given (q_other, m_other) on the rival:
//   NN iff q >= max(cp1_solo, cp2_solo)
//   SN iff cp2_joint <= q <= cp1_solo
//   NS iff cp1_joint <= q <= cp2_solo
//   SS iff q <= min(cp1_joint, cp2_joint)
// Boundaries are inclusive, so equilibria may coexist; the result is never
// empty. `slack` widens the boundary comparisons; callers checking states
// that are themselves only kQTol-accurate pass a matching slack.
inline ConfigSet equilibrium_configs(const Scenario& sc, double q_own,
                                     double q_other, Config m_other,
                                     int focal_isp = 1,
                                     double slack = kFeasSlack) {
  if (q_own < 0.0 || q_other < 0.0)
    throw InvalidParameter("sponsorship charges must be >= 0");
  const auto t = ne_thresholds(nash_coefficients(sc, m_other, focal_isp),
                               sc.params.a1, sc.params.a2, q_other);
  auto le = [slack](double a, double b) {
    return a <= b + slack * (1.0 + std::abs(b));
  };
  ConfigSet out;
  if (le(t.cp1_solo, q_own) && le(t.cp2_solo, q_own)) out.add(Config::NN);
  if (le(t.cp2_joint, q_own) && le(q_own, t.cp1_solo)) out.add(Config::SN);
  if (le(t.cp1_joint, q_own) && le(q_own, t.cp2_solo)) out.add(Config::NS);
  if (le(q_own, t.cp1_joint) && le(q_own, t.cp2_joint)) out.add(Config::SS);
  return out;
}

struct CpSurplusReport {
  double cp1 = 0.0;
  double cp2 = 0.0;
  double get(int cp) const { return cp == 1 ? cp1 : cp2; }
};

// CP i's surplus across both platforms in the full state (q1, m1, q2, m2):
//   x (a_i - q1 1{i sponsors on 1}) theta_i^{m1}
//   + (1 - x)(a_i - q2 1{i sponsors on 2}) theta_i^{m2}.
inline CpSurplusReport cp_surplus(const Scenario& sc, double q1, Config m1,
                                  double q2, Config m2) {
  const double x = sc.share1(m1, m2);
  auto one = [&](int cp) {
    const double a = cp == 1 ? sc.params.a1 : sc.params.a2;
    const double pay1 = sponsors(m1, cp) ? q1 : 0.0;
    const double pay2 = sponsors(m2, cp) ? q2 : 0.0;
    return x * (a - pay1) * sc.theta.theta(cp, m1) +
           (1.0 - x) * (a - pay2) * sc.theta.theta(cp, m2);
  };
  return {one(1), one(2)};
}

}  // namespace zrsim
