#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "zrsim/dynamics.hpp"
#include "zrsim/format.hpp"

namespace zrsim {

// Uniform grid on (lo, hi]: steps values, lo exclusive, hi inclusive.
struct GridSpec {
  double lo = 0.0;
  double hi = 10.0;
  int steps = 60;

  void validate() const {
    if (!(steps >= 2)) throw InvalidParameter("grid steps must be >= 2");
    if (!(lo >= 0.0) || !(hi > lo))
      throw InvalidParameter("grid range must satisfy 0 <= lo < hi");
  }
  double value(int k) const { return lo + (hi - lo) * (k + 1) / steps; }
};

struct SweepSpec {
  ModelParams base;       // a1/a2 are overwritten per grid point
  GridSpec a1;            // region-map axis 1
  GridSpec a2;            // region-map axis 2
  GridSpec a;             // ray axis
  int max_rounds = 100;

  void validate() const { base.validate(); }
};

// ISP1's frozen share for the monopoly benchmark: the NN-NN duopoly split.
inline double monopoly_benchmark_share(const ModelParams& pr) {
  return pr.t2 / (pr.t1 + pr.t2);
}

namespace detail {

inline int sweep_thread_cap() {
  if (const char* env = std::getenv("ZRSIM_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1 << 16;
}

// Index-parallel loop; results must be written by index so that assembly is
// order-deterministic regardless of the worker count.
template <class F>
void parallel_for(int n, F&& f) {
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      std::min({n, int(hw ? hw : 1), sweep_thread_cap()});
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        f(i);
      } catch (...) {
        std::scoped_lock lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

// One cell of the limiting-configuration map. The label reports ISP1's
// limiting configuration; config2 is kept so symmetry checks need not rerun
// the dynamics.
struct RegionCell {
  double a1 = 0.0;
  double a2 = 0.0;
  DynamicsKind kind = DynamicsKind::MaxRoundsExceeded;
  Config config = Config::NN;   // limiting configuration on ISP1
  Config config2 = Config::NN;  // limiting configuration on ISP2
  int rounds = 0;
  double q1 = 0.0;
  double q2 = 0.0;

  std::string label() const {
    switch (kind) {
      case DynamicsKind::Converged: return to_string(config);
      case DynamicsKind::Oscillating: return "OSC";
      case DynamicsKind::MaxRoundsExceeded: return "MAX";
    }
    return "??";
  }
};

// Limiting sponsorship configurations of the best-response dynamics over the
// a1 x a2 grid. Cells are independent and evaluated concurrently (capped by
// ZRSIM_THREADS); assembly is ordered by grid index, a2 fastest.
inline std::vector<RegionCell> sweep_region_map(
    const SweepSpec& spec, MarketMode mode = MarketMode::duopoly()) {
  spec.validate();
  spec.a1.validate();
  spec.a2.validate();
  const Scenario base = Scenario::make(spec.base, mode);
  std::vector<RegionCell> cells(size_t(spec.a1.steps) * spec.a2.steps);
  detail::parallel_for(int(cells.size()), [&](int i) {
    const int i1 = i / spec.a2.steps;
    const int i2 = i % spec.a2.steps;
    RegionCell cell;
    cell.a1 = spec.a1.value(i1);
    cell.a2 = spec.a2.value(i2);
    const auto out = run_dynamics(base.with_rates(cell.a1, cell.a2),
                                  Config::NN, {}, spec.max_rounds);
    cell.kind = out.kind;
    cell.config = out.final_state.m1;
    cell.config2 = out.final_state.m2;
    cell.rounds = out.rounds;
    cell.q1 = out.final_state.q1;
    cell.q2 = out.final_state.q2;
    cells[i] = cell;
  });
  return cells;
}

inline void write_region_csv(std::ostream& os,
                             const std::vector<RegionCell>& cells) {
  os << "a1,a2,label,rounds,q1,q2\n";
  for (const auto& c : cells)
    os << fmt_g9(c.a1) << ',' << fmt_g9(c.a2) << ',' << c.label() << ','
       << c.rounds << ',' << fmt_g9(c.q1) << ',' << fmt_g9(c.q2) << '\n';
}

// One emitted ray point. `mode` is duopoly, monopoly, no-zero-rating or
// single-isp; config columns carry OSC/MAX for non-converged duopoly points,
// whose numeric columns are then cycle (or tail-state) averages.
struct SurplusRow {
  double a = 0.0;
  std::string mode;
  std::string config1, config2;
  double q1 = 0.0, q2 = 0.0, x = 0.5;
  double isp1 = 0.0, isp2 = 0.0, cp1 = 0.0, cp2 = 0.0;
  double users_with_transport = 0.0;
  double users_without_transport = 0.0;
};

namespace detail {

inline SurplusRow row_from_state(const Scenario& sc, const SystemState& st,
                                 double a, std::string mode) {
  SurplusRow r;
  r.a = a;
  r.mode = std::move(mode);
  r.config1 = to_string(st.m1);
  r.config2 = to_string(st.m2);
  r.q1 = st.q1;
  r.q2 = st.q2;
  r.x = st.x;
  r.isp1 = st.isp1;
  r.isp2 = st.isp2;
  r.cp1 = st.cp1;
  r.cp2 = st.cp2;
  r.users_with_transport = st.users;
  r.users_without_transport =
      aggregate_user_surplus(sc.theta.surplus(st.m1), sc.theta.surplus(st.m2),
                             st.x, sc.params.t1, sc.params.t2, false);
  return r;
}

inline SurplusRow duopoly_row(const Scenario& sc, const DynamicsOutcome& out,
                              double a) {
  if (out.kind == DynamicsKind::Converged)
    return row_from_state(sc, out.final_state, a, "duopoly");
  const auto& states =
      out.kind == DynamicsKind::Oscillating ? out.cycle : out.history;
  SurplusRow acc = row_from_state(sc, states.front(), a, "duopoly");
  for (size_t i = 1; i < states.size(); ++i) {
    const SurplusRow r = row_from_state(sc, states[i], a, "duopoly");
    acc.q1 += r.q1;
    acc.q2 += r.q2;
    acc.x += r.x;
    acc.isp1 += r.isp1;
    acc.isp2 += r.isp2;
    acc.cp1 += r.cp1;
    acc.cp2 += r.cp2;
    acc.users_with_transport += r.users_with_transport;
    acc.users_without_transport += r.users_without_transport;
  }
  const double n = double(states.size());
  acc.q1 /= n;
  acc.q2 /= n;
  acc.x /= n;
  acc.isp1 /= n;
  acc.isp2 /= n;
  acc.cp1 /= n;
  acc.cp2 /= n;
  acc.users_with_transport /= n;
  acc.users_without_transport /= n;
  const char* tag =
      out.kind == DynamicsKind::Oscillating ? "OSC" : "MAX";
  acc.config1 = tag;
  acc.config2 = tag;
  return acc;
}

}  // namespace detail

// Equilibrium surpluses along the ray (a1, a2) = (a, rho a): the duopoly
// limit of the dynamics, the fixed-share monopoly benchmark, and the
// no-zero-rating benchmark (both ISPs pinned at NN). Three rows per a.
inline std::vector<SurplusRow> sweep_surplus_ray(const SweepSpec& spec,
                                                 double rho) {
  spec.validate();
  spec.a.validate();
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidParameter("rho must lie in (0, 1)");
  const Scenario duo = Scenario::make(spec.base, MarketMode::duopoly());
  const Scenario mono = Scenario::make(
      spec.base, MarketMode::monopoly(monopoly_benchmark_share(spec.base)));
  std::vector<SurplusRow> rows(size_t(spec.a.steps) * 3);
  detail::parallel_for(spec.a.steps, [&](int k) {
    const double a = spec.a.value(k);
    const Scenario duo_a = duo.with_rates(a, rho * a);
    const Scenario mono_a = mono.with_rates(a, rho * a);
    rows[size_t(k) * 3] = detail::duopoly_row(
        duo_a, run_dynamics(duo_a, Config::NN, {}, spec.max_rounds), a);
    const auto mono_out = run_dynamics(mono_a, Config::NN, {}, spec.max_rounds);
    rows[size_t(k) * 3 + 1] =
        detail::row_from_state(mono_a, mono_out.final_state, a, "monopoly");
    rows[size_t(k) * 3 + 2] = detail::row_from_state(
        duo_a, make_system_state(duo_a, 0.0, Config::NN, 0.0, Config::NN), a,
        "no-zero-rating");
  });
  return rows;
}

// ISP1's one-shot best response along the ray with ISP2 pinned at NN at its
// enforcement price (the single-zero-rating-platform experiment).
inline std::vector<SurplusRow> sweep_single_isp(const SweepSpec& spec,
                                                double rho) {
  spec.validate();
  spec.a.validate();
  if (!(rho > 0.0 && rho < 1.0))
    throw InvalidParameter("rho must lie in (0, 1)");
  const Scenario base = Scenario::make(spec.base, MarketMode::duopoly());
  std::vector<SurplusRow> rows(spec.a.steps);
  detail::parallel_for(spec.a.steps, [&](int k) {
    const double a = spec.a.value(k);
    const Scenario sc = base.with_rates(a, rho * a);
    const double q2 = default_initial_charge(sc, Config::NN);
    const auto br = best_response(sc, q2, Config::NN, 1);
    rows[k] = detail::row_from_state(
        sc, make_system_state(sc, br.q, br.config, q2, Config::NN), a,
        "single-isp");
  });
  return rows;
}

inline void write_ray_csv(std::ostream& os,
                          const std::vector<SurplusRow>& rows) {
  os << "a,mode,config1,config2,q1,q2,x,isp1,isp2,cp1,cp2,"
        "users_with_transport,users_without_transport\n";
  for (const auto& r : rows)
    os << fmt_g9(r.a) << ',' << r.mode << ',' << r.config1 << ',' << r.config2
       << ',' << fmt_g9(r.q1) << ',' << fmt_g9(r.q2) << ',' << fmt_g9(r.x)
       << ',' << fmt_g9(r.isp1) << ',' << fmt_g9(r.isp2) << ','
       << fmt_g9(r.cp1) << ',' << fmt_g9(r.cp2) << ','
       << fmt_g9(r.users_with_transport) << ','
       << fmt_g9(r.users_without_transport) << '\n';
}

}  // namespace zrsim
