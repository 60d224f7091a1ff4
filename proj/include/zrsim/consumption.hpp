#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "zrsim/params.hpp"

namespace zrsim {

// Per-subscriber consumption (theta1, theta2) and attained surplus u for one
// ISP's sponsorship configuration.
struct ConsumptionProfile {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double surplus = 0.0;
};

namespace detail {

// Objective of the subscriber's problem: utility minus payment for
// non-sponsored consumption.
inline double consumption_objective(const ModelParams& pr, Config m, double z1,
                                    double z2) {
  const double paid = (sponsors(m, 1) ? 0.0 : z1) + (sponsors(m, 2) ? 0.0 : z2);
  return pr.utility.value(z1) + pr.utility.value(z2) - pr.p * paid;
}

// Bisection for f with f(lo) > 0 >= f(hi), to kArgTol on the argument.
template <class F>
double bisect_decreasing(F&& f, double lo, double hi) {
  while (hi - lo > kArgTol) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Sponsored-side coordinate under SN (theta1; NS is the mirror image).
// Free content fills any residual capacity, so the capacity constraint
// binds and the problem is max f(x) = psi(x) + psi(c-x) - p (c-x) on [0, c].
// f'(x) = psi'(x) - psi'(c-x) + p with f'(0) > 0 always, so only the x = c
// corner needs a check. For the log utility the first-order condition is
//   p x^2 + (2 - p c) x - (c + p + p c) = 0
// and the positive root, clamped to c, is the maximizer.
inline double solve_sponsored_coordinate(const ModelParams& pr) {
  const double p = pr.p, c = pr.c;
  if (pr.utility.closed_form_log()) {
    const double b = 2.0 - p * c;
    const double root =
        (-b + std::sqrt(b * b + 4.0 * p * (c + p + p * c))) / (2.0 * p);
    return std::clamp(root, 0.0, c);
  }
  auto foc = [&](double x) {
    return pr.utility.marginal(x) - pr.utility.marginal(c - x) + p;
  };
  if (foc(c) >= 0.0) return c;
  double x = bisect_decreasing(foc, 0.0, c);
  // Guard against marginally concave custom utilities: keep the better of
  // the stationary point and the high corner.
  auto val = [&](double z) { return consumption_objective(pr, Config::SN, z, c - z); };
  if (val(c) > val(x) + kObjTol) x = c;
  return x;
}

// Per-CP coordinate under NN: min(psi'^{-1}(p), c/2), or 0 when users are
// priced out (psi'(0) <= p).
inline double solve_unsponsored_coordinate(const ModelParams& pr) {
  const double p = pr.p, half = 0.5 * pr.c;
  if (pr.utility.closed_form_log())
    return p >= 1.0 ? 0.0 : std::min(1.0 / p - 1.0, half);
  if (pr.utility.marginal(0.0) <= p) return 0.0;
  if (pr.utility.marginal(half) >= p) return half;
  return bisect_decreasing(
      [&](double z) { return pr.utility.marginal(z) - p; }, 0.0, half);
}

}  // namespace detail

// Maximizer of sum_i psi(z_i) - p sum_{i non-sponsored} z_i subject to
// z1 + z2 <= c, z >= 0.
inline ConsumptionProfile solve_consumption(const ModelParams& pr, Config m) {
  pr.validate();
  double th1 = 0.0, th2 = 0.0;
  switch (m) {
    case Config::SS:
      th1 = th2 = 0.5 * pr.c;  // everything free: symmetric split of capacity
      break;
    case Config::NN:
      th1 = th2 = detail::solve_unsponsored_coordinate(pr);
      break;
    case Config::SN:
      th1 = detail::solve_sponsored_coordinate(pr);
      th2 = pr.c - th1;
      break;
    case Config::NS:
      th2 = detail::solve_sponsored_coordinate(pr);
      th1 = pr.c - th2;
      break;
  }
  return {th1, th2, detail::consumption_objective(pr, m, th1, th2)};
}

// Exhaustive search of the feasible simplex on a uniform grid. Verification
// oracle; accuracy O(c / grid_points) per coordinate.
inline ConsumptionProfile consumption_oracle(const ModelParams& pr, Config m,
                                             int grid_points) {
  pr.validate();
  if (grid_points < 100)
    throw InvalidParameter("consumption_oracle: grid_points must be >= 100");
  const int n = grid_points;
  const double h = pr.c / (n - 1);
  const double w1 = sponsors(m, 1) ? 0.0 : pr.p;
  const double w2 = sponsors(m, 2) ? 0.0 : pr.p;
  std::vector<double> g1(n), g2(n);
  for (int i = 0; i < n; ++i) {
    const double z = i * h;
    const double psi = pr.utility.value(z);
    g1[i] = psi - w1 * z;
    g2[i] = psi - w2 * z;
  }
  ConsumptionProfile best{0.0, 0.0, -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j + i < n; ++j) {
      const double v = g1[i] + g2[j];
      if (v > best.surplus) best = {i * h, j * h, v};
    }
  }
  return best;
}

// All four configurations at once. Consumption depends only on (p, c, psi),
// so one table serves every point of an (a1, a2, t) sweep.
struct ConsumptionTable {
  std::array<ConsumptionProfile, 4> by_config{};

  static ConsumptionTable compute(const ModelParams& pr) {
    ConsumptionTable t;
    for (Config m : kConfigs) t.by_config[index(m)] = solve_consumption(pr, m);
    return t;
  }

  const ConsumptionProfile& operator[](Config m) const {
    return by_config[index(m)];
  }
  double theta(int cp, Config m) const {
    const auto& pr = by_config[index(m)];
    return cp == 1 ? pr.theta1 : pr.theta2;
  }
  double surplus(Config m) const { return by_config[index(m)].surplus; }
};

}  // namespace zrsim
