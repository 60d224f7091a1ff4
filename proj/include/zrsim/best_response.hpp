#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "zrsim/nash.hpp"

namespace zrsim {

// One ISP's revenue in the full state: own share times (q on sponsored
// consumption plus p on non-sponsored consumption) per subscriber.
inline double isp_surplus(const Scenario& sc, double q1, Config m1, double q2,
                          Config m2, int isp) {
  if (isp != 1 && isp != 2) throw InvalidParameter("isp must be 1 or 2");
  const double x = sc.share1(m1, m2);
  const double share = isp == 1 ? x : 1.0 - x;
  const Config own = isp == 1 ? m1 : m2;
  const double q = isp == 1 ? q1 : q2;
  double per_user = 0.0;
  for (int cp : {1, 2})
    per_user += (sponsors(own, cp) ? q : sc.params.p) * sc.theta.theta(cp, own);
  return share * per_user;
}

struct ConfigOption {
  double q = std::numeric_limits<double>::quiet_NaN();
  double profit = -std::numeric_limits<double>::infinity();
  bool feasible = false;
};

struct BestResponse {
  Config config = Config::NN;
  double q = 0.0;
  double profit = 0.0;
  std::array<ConfigOption, 4> options{};  // indexed by Config
};

// A concrete charge that enforces NN: strictly above the Lemma lower bound,
// with a fixed margin so repeated dynamics states hash identically.
inline double nn_enforcement_price(const NeThresholds& t) {
  return std::max(t.cp1_solo, t.cp2_solo) * (1.0 + 1e-6) + 1e-9;
}

// Best response of the focal ISP to the rival's (q_other, m_other). Per
// target configuration, the revenue-maximal charge that keeps it a CP
// equilibrium:
//   NN: any q above max(cp1_solo, cp2_solo); profit is q-independent
//   SN: q = cp1_solo, feasible iff cp1_solo >= cp2_joint
//   NS: q = cp2_solo, feasible iff cp2_solo >= cp1_joint
//   SS: q = min(cp1_joint, cp2_joint)
// then the profit-maximal feasible configuration, ties at kObjTol resolved
// in the order NN > SN > NS > SS.
inline BestResponse best_response(const Scenario& sc, double q_other,
                                  Config m_other, int isp) {
  const auto k = nash_coefficients(sc, m_other, isp);
  const auto t = ne_thresholds(k, sc.params.a1, sc.params.a2, q_other);
  auto share = [&](Config own) { return sc.own_share(isp, own, m_other); };
  auto th = [&](int cp, Config m) { return sc.theta.theta(cp, m); };
  auto ge = [](double a, double b) {
    return a >= b - kFeasSlack * (1.0 + std::abs(b));
  };
  const double p = sc.params.p;

  BestResponse br;
  auto& o = br.options;
  {
    auto& nn = o[index(Config::NN)];
    nn.q = nn_enforcement_price(t);
    nn.profit = share(Config::NN) * p *
                (th(1, Config::NN) + th(2, Config::NN));
    nn.feasible = true;
  }
  {
    auto& sn = o[index(Config::SN)];
    sn.q = t.cp1_solo;
    sn.feasible = ge(t.cp1_solo, t.cp2_joint);
    sn.profit = share(Config::SN) *
                (sn.q * th(1, Config::SN) + p * th(2, Config::SN));
  }
  {
    auto& ns = o[index(Config::NS)];
    ns.q = t.cp2_solo;
    ns.feasible = ge(t.cp2_solo, t.cp1_joint);
    ns.profit = share(Config::NS) *
                (ns.q * th(2, Config::NS) + p * th(1, Config::NS));
  }
  {
    auto& ss = o[index(Config::SS)];
    ss.q = std::min(t.cp1_joint, t.cp2_joint);
    ss.feasible = true;
    ss.profit = share(Config::SS) * ss.q *
                (th(1, Config::SS) + th(2, Config::SS));
  }

  br.config = Config::NN;
  br.q = o[index(Config::NN)].q;
  br.profit = o[index(Config::NN)].profit;
  for (Config m : {Config::SN, Config::NS, Config::SS}) {
    const auto& c = o[index(m)];
    if (c.feasible && c.profit > br.profit + kObjTol) {
      br.config = m;
      br.q = c.q;
      br.profit = c.profit;
    }
  }
  return br;
}

// Threshold report for the growing-rates ray (a1, a2) = (a, rho a).
struct ThresholdReport {
  double a_s = 0.0;      // least a at which the focal ISP stops enforcing NN
  Config branch = Config::SN;  // SN or SS, whichever crossing binds
  double a_prime = 0.0;        // NN -> SN profit crossing (inf when absent)
  double a_double_prime = 0.0; // NN -> SS profit crossing (inf when absent)
  bool found = false;          // false: no sponsorship below a_max
  double a_max = 0.0;

  // Closed forms attached to the symmetric equilibria (sufficient bounds,
  // not tight; independent of t):
  double a_sn_sym = 0.0;   // p theta1^SN / (theta1^SN - theta1^NN)
  double rho_sn_sym = 0.0; // (theta1^SN - theta1^NN) / (2 x_SS^SN c)
  double rho_ss_sym = 0.0; // alpha1/(1-alpha2) * (c/2)/((c/2) - theta2^SN), at SS
};

namespace detail {

inline BestResponse best_response_at(const Scenario& sc, double a, double rho,
                                     double q_other, Config m_other) {
  return best_response(sc.with_rates(a, rho * a), q_other, m_other, 1);
}

}  // namespace detail

// Least a along (a, rho a) at which ISP1's best response against
// (q_other, m_other) stops being NN. The per-configuration profits are
// affine in a (NN constant), so the crossings a' (SN branch) and a'' (SS
// branch) are closed-form; a scan-plus-bisection fallback covers degenerate
// coefficient sets. The a-independent appendix closed forms for the
// symmetric equilibria are reported alongside.
inline ThresholdReport sponsorship_threshold(const Scenario& sc, double rho,
                                             Config m_other,
                                             double q_other = 0.0,
                                             double a_max = 1000.0) {
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidParameter("rho must lie in (0, 1)");
  if (q_other < 0.0) throw InvalidParameter("q_other must be >= 0");
  if (!(a_max > 0.0)) throw InvalidParameter("a_max must be > 0");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const auto k = nash_coefficients(sc, m_other, 1);
  auto share = [&](Config own) { return sc.own_share(1, own, m_other); };
  auto th = [&](int cp, Config m) { return sc.theta.theta(cp, m); };
  const double p = sc.params.p;
  const double r_nn =
      share(Config::NN) * p * (th(1, Config::NN) + th(2, Config::NN));

  ThresholdReport rep;
  rep.a_max = a_max;
  rep.a_prime = kInf;
  rep.a_double_prime = kInf;

  // SN branch: r(a) = x_SN ((a alpha1 + q2 alpha2) th1SN + p th2SN),
  // feasible while a alpha1 + q2 alpha2 >= a rho delta1 + q2 delta2.
  {
    const double slope = share(Config::SN) * k.alpha1 * th(1, Config::SN);
    const double icept = share(Config::SN) * (q_other * k.alpha2 * th(1, Config::SN) +
                                              p * th(2, Config::SN));
    if (slope > 1e-300) {
      const double cand = std::max(0.0, (r_nn - icept) / slope);
      const double upper = cand * k.alpha1 + q_other * k.alpha2;
      const double lower = cand * rho * k.delta1 + q_other * k.delta2;
      if (cand <= a_max && upper >= lower - kFeasSlack * (1.0 + std::abs(lower)))
        rep.a_prime = cand;
    }
  }
  // SS branch: r(a) = x_SS (th1SS + th2SS) min(a gamma1 + q2 gamma2,
  // a rho delta1 + q2 delta2); solve each affine piece and keep crossings
  // where that piece is the active minimum.
  {
    const double cap = share(Config::SS) *
                       (th(1, Config::SS) + th(2, Config::SS));
    const double slopes[2] = {k.gamma1, rho * k.delta1};
    const double icepts[2] = {q_other * k.gamma2, q_other * k.delta2};
    for (int piece = 0; piece < 2; ++piece) {
      if (!(cap * slopes[piece] > 1e-300)) continue;
      const double cand =
          std::max(0.0, (r_nn / cap - icepts[piece]) / slopes[piece]);
      const double self = slopes[piece] * cand + icepts[piece];
      const double other = slopes[1 - piece] * cand + icepts[1 - piece];
      if (cand <= a_max && self <= other + kFeasSlack * (1.0 + std::abs(other)))
        rep.a_double_prime = std::min(rep.a_double_prime, cand);
    }
  }

  if (std::min(rep.a_prime, rep.a_double_prime) <= a_max) {
    rep.found = true;
    rep.a_s = std::min(rep.a_prime, rep.a_double_prime);
    rep.branch = rep.a_prime <= rep.a_double_prime ? Config::SN : Config::SS;
  } else {
    // Degenerate coefficients: locate the switch by scanning and bisecting
    // on the induced configuration.
    constexpr int kScan = 512;
    double lo = 0.0, hi = kInf;
    for (int i = 1; i <= kScan; ++i) {
      const double a = a_max * i / kScan;
      if (detail::best_response_at(sc, a, rho, q_other, m_other).config !=
          Config::NN) {
        hi = a;
        break;
      }
      lo = a;
    }
    if (std::isfinite(hi)) {
      while (hi - lo > kArgTol * (1.0 + hi)) {
        const double mid = 0.5 * (lo + hi);
        if (detail::best_response_at(sc, mid, rho, q_other, m_other).config ==
            Config::NN)
          lo = mid;
        else
          hi = mid;
      }
      rep.found = true;
      rep.a_s = 0.5 * (lo + hi);
      const Config induced =
          detail::best_response_at(sc, hi, rho, q_other, m_other).config;
      rep.branch = induced == Config::SS ? Config::SS : Config::SN;
    } else {
      rep.a_s = kInf;
    }
  }

  const double d_sn = th(1, Config::SN) - th(1, Config::NN);
  rep.a_sn_sym = d_sn > 0.0 ? p * th(1, Config::SN) / d_sn : kInf;
  const double x_ss_sn = sc.share1(Config::SS, Config::SN);
  rep.rho_sn_sym =
      x_ss_sn > 0.0 ? 0.5 * d_sn / (x_ss_sn * sc.params.c) : kInf;
  const auto kss = nash_coefficients(sc, Config::SS, 1);
  const double half = 0.5 * sc.params.c;
  const double room = half - th(2, Config::SN);
  rep.rho_ss_sym = (kss.alpha2 < 1.0 && room > 0.0)
                       ? kss.alpha1 / (1.0 - kss.alpha2) * half / room
                       : kInf;
  return rep;
}

}  // namespace zrsim
