#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "zrsim/best_response.hpp"

namespace zrsim {

// Full market state (q1, M1, q2, M2) with the derived share and the five
// surpluses. `users` includes transportation cost.
struct SystemState {
  double q1 = 0.0;
  Config m1 = Config::NN;
  double q2 = 0.0;
  Config m2 = Config::NN;
  double x = 0.5;
  double isp1 = 0.0;
  double isp2 = 0.0;
  double cp1 = 0.0;
  double cp2 = 0.0;
  double users = 0.0;
};

inline SystemState make_system_state(const Scenario& sc, double q1, Config m1,
                                     double q2, Config m2) {
  SystemState s;
  s.q1 = q1;
  s.m1 = m1;
  s.q2 = q2;
  s.m2 = m2;
  s.x = sc.share1(m1, m2);
  s.isp1 = isp_surplus(sc, q1, m1, q2, m2, 1);
  s.isp2 = isp_surplus(sc, q1, m1, q2, m2, 2);
  const auto cps = cp_surplus(sc, q1, m1, q2, m2);
  s.cp1 = cps.cp1;
  s.cp2 = cps.cp2;
  s.users = aggregate_user_surplus(sc.theta.surplus(m1), sc.theta.surplus(m2),
                                   s.x, sc.params.t1, sc.params.t2, true);
  return s;
}

enum class DynamicsKind { Converged, Oscillating, MaxRoundsExceeded };

inline const char* to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::Converged: return "converged";
    case DynamicsKind::Oscillating: return "oscillating";
    case DynamicsKind::MaxRoundsExceeded: return "max-rounds-exceeded";
  }
  return "??";
}

struct DynamicsOutcome {
  DynamicsKind kind = DynamicsKind::MaxRoundsExceeded;
  SystemState final_state;
  int rounds = 0;   // rounds to reach the fixed state (Converged), else rounds run
  int period = 0;   // cycle length when Oscillating
  std::vector<SystemState> cycle;    // one period of the cycle
  std::vector<SystemState> history;  // state after each full round
};

// Default opening charge for ISP2 in configuration `initial`: the charge it
// would use to induce that configuration against an NN rival. For NN this is
// the enforcement price (the paper starts ISP2 "in NN" without one).
inline double default_initial_charge(const Scenario& sc, Config initial) {
  return best_response(sc, 0.0, Config::NN, 2).options[index(initial)].q;
}

// Alternating best-response dynamics, ISP1 moving first against
// (initial_q2, initial_m2). One round = one move by each ISP; the state is
// recorded after each full round. A round that leaves the state unchanged
// (prices compared at kQTol) means convergence; a recurrence of an earlier
// state (configs plus prices rounded to kQTol) means oscillation.
inline DynamicsOutcome run_dynamics(const Scenario& sc, Config initial_m2,
                                    std::optional<double> initial_q2 = {},
                                    int max_rounds = 100) {
  if (max_rounds < 2) throw InvalidParameter("max_rounds must be >= 2");
  double q2 = initial_q2 ? *initial_q2 : default_initial_charge(sc, initial_m2);
  if (q2 < 0.0) throw InvalidParameter("initial_q2 must be >= 0");
  Config m2 = initial_m2;
  double q1 = 0.0;
  Config m1 = Config::NN;

  DynamicsOutcome out;
  using Key = std::tuple<int, int, long long, long long>;
  auto key_of = [](const SystemState& s) {
    return Key{index(s.m1), index(s.m2),
               static_cast<long long>(std::llround(s.q1 / kQTol)),
               static_cast<long long>(std::llround(s.q2 / kQTol))};
  };
  std::map<Key, int> seen;

  for (int r = 1; r <= max_rounds; ++r) {
    const auto br1 = best_response(sc, q2, m2, 1);
    q1 = br1.q;
    m1 = br1.config;
    const auto br2 = best_response(sc, q1, m1, 2);
    q2 = br2.q;
    m2 = br2.config;
    const SystemState st = make_system_state(sc, q1, m1, q2, m2);
    out.history.push_back(st);

    if (r >= 2) {
      const SystemState& prev = out.history[r - 2];
      if (prev.m1 == m1 && prev.m2 == m2 && std::abs(prev.q1 - q1) <= kQTol &&
          std::abs(prev.q2 - q2) <= kQTol) {
        out.kind = DynamicsKind::Converged;
        out.rounds = r - 1;
        out.final_state = st;
        return out;
      }
    }
    const auto [it, fresh] = seen.try_emplace(key_of(st), r);
    if (!fresh) {
      const int r0 = it->second;
      if (r0 == r - 1) {  // rounding landed a converged pair in one bin
        out.kind = DynamicsKind::Converged;
        out.rounds = r0;
        out.final_state = st;
        return out;
      }
      out.kind = DynamicsKind::Oscillating;
      out.period = r - r0;
      out.rounds = r;
      out.cycle.assign(out.history.begin() + (r0 - 1),
                       out.history.begin() + (r - 1));
      out.final_state = st;
      return out;
    }
  }
  out.kind = DynamicsKind::MaxRoundsExceeded;
  out.rounds = max_rounds;
  out.final_state = out.history.back();
  return out;
}

// The three system-equilibrium checks with witnesses:
//   (i)  each ISP's (q, M) is a best response to the rival's state,
//   (ii) each M_j is a CP Nash equilibrium at (q1, q2),
//   (iii) no CP gains by reversing its sponsorship decision on both
//         platforms simultaneously (market split and consumption recomputed).
struct EquilibriumReport {
  std::array<bool, 2> isp_best{};
  std::array<bool, 2> cp_equilibrium{};
  std::array<bool, 2> cp_no_double_flip{};
  std::array<BestResponse, 2> responses{};   // witnesses for (i)
  std::array<double, 2> double_flip_gain{};  // witnesses for (iii)

  bool all() const {
    return isp_best[0] && isp_best[1] && cp_equilibrium[0] &&
           cp_equilibrium[1] && cp_no_double_flip[0] && cp_no_double_flip[1];
  }
};

inline EquilibriumReport verify_system_equilibrium(const Scenario& sc,
                                                   const SystemState& st) {
  EquilibriumReport rep;
  for (int j : {1, 2}) {
    const Config own = j == 1 ? st.m1 : st.m2;
    const double q = j == 1 ? st.q1 : st.q2;
    const Config other = j == 1 ? st.m2 : st.m1;
    const double q_other = j == 1 ? st.q2 : st.q1;
    const auto br = best_response(sc, q_other, other, j);
    bool ok = br.config == own;
    if (ok) {
      if (own == Config::NN) {
        // Any charge above the enforcement bound is equally optimal.
        const auto t = ne_thresholds(nash_coefficients(sc, other, j),
                                     sc.params.a1, sc.params.a2, q_other);
        const double bound = std::max(t.cp1_solo, t.cp2_solo);
        ok = q >= bound - kFeasSlack * (1.0 + std::abs(bound));
      } else {
        ok = std::abs(br.q - q) <= kQTol * (1.0 + std::abs(q));
      }
    }
    rep.isp_best[j - 1] = ok;
    rep.responses[j - 1] = br;
    // Converged charges are only kQTol-accurate, so the membership test gets
    // a matching boundary slack.
    rep.cp_equilibrium[j - 1] =
        equilibrium_configs(sc, q, q_other, other, j, kQTol).contains(own);
  }
  const auto base = cp_surplus(sc, st.q1, st.m1, st.q2, st.m2);
  for (int i : {1, 2}) {
    const auto flipped =
        cp_surplus(sc, st.q1, flip(st.m1, i), st.q2, flip(st.m2, i));
    const double gain = flipped.get(i) - base.get(i);
    rep.double_flip_gain[i - 1] = gain;
    rep.cp_no_double_flip[i - 1] =
        gain <= kObjTol * (1.0 + std::abs(base.get(i)));
  }
  return rep;
}

}  // namespace zrsim
