#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "zrsim/zrsim.hpp"

using namespace zrsim;

namespace {

Scenario scenario_with_rates(double a1, double a2) {
  ModelParams pr;
  pr.a1 = a1;
  pr.a2 = a2;
  return Scenario::make(pr);
}

}  // namespace

TEST_CASE("ISP surplus closed forms") {
  const auto sc = scenario_with_rates(5.0, 4.0);
  const auto& th = sc.theta;

  SECTION("NN against NN: half of p times NN consumption") {
    const double expect =
        0.5 * 0.35 * (th.theta(1, Config::NN) + th.theta(2, Config::NN));
    REQUIRE_THAT(isp_surplus(sc, 0.2, Config::NN, 0.8, Config::NN, 1),
                 Catch::Matchers::WithinAbs(expect, 1e-12));
    REQUIRE_THAT(expect, Catch::Matchers::WithinAbs(0.65, 1e-9));
    REQUIRE_THAT(isp_surplus(sc, 0.2, Config::NN, 0.8, Config::NN, 2),
                 Catch::Matchers::WithinAbs(expect, 1e-12));
  }
  SECTION("symmetric SN-SN at q(a)") {
    const double a = 5.0;
    const double q = a * (1.0 - th.theta(1, Config::NN) / th.theta(1, Config::SN));
    const double expect =
        0.5 * (a * (th.theta(1, Config::SN) - th.theta(1, Config::NN)) +
               0.35 * (4.0 - th.theta(1, Config::SN)));
    REQUIRE_THAT(isp_surplus(sc, q, Config::SN, q, Config::SN, 1),
                 Catch::Matchers::WithinAbs(expect, 1e-12));
  }
  SECTION("symmetric SS-SS at q(a, rho)") {
    const double a = 5.0, rho = 0.8;
    const double q = a * rho * (1.0 - th.theta(2, Config::SN) / 2.0);
    const double expect = 0.5 * 4.0 * a * rho * (1.0 - th.theta(2, Config::SN) / 2.0);
    REQUIRE_THAT(isp_surplus(sc, q, Config::SS, q, Config::SS, 1),
                 Catch::Matchers::WithinAbs(expect, 1e-12));
  }
}

TEST_CASE("zero revenue rates leave the ISP enforcing NN") {
  const auto sc = scenario_with_rates(0.0, 0.0);
  const auto br = best_response(sc, 0.0, Config::NN, 1);
  REQUIRE(br.config == Config::NN);
  REQUIRE(br.q > 0.0);
  REQUIRE_THAT(br.profit, Catch::Matchers::WithinAbs(0.65, 1e-9));
}

TEST_CASE("rate ray against NN walks through NN, SN, SS (rho = 0.7)") {
  const double rho = 0.7;
  auto induced = [&](double a) {
    return best_response(scenario_with_rates(a, rho * a), 0.0, Config::NN, 1)
        .config;
  };
  REQUIRE(induced(0.3) == Config::NN);
  REQUIRE(induced(0.45) == Config::NN);
  REQUIRE(induced(0.56) == Config::SN);
  REQUIRE(induced(0.8) == Config::SS);
  REQUIRE(induced(5.0) == Config::SS);
}

TEST_CASE("analytic best response matches the charge grid search") {
  std::mt19937_64 rng(777);
  for (int draw = 0; draw < 12; ++draw) {
    const auto pr = oracles::random_params(rng);
    const auto sc = Scenario::make(pr);
    const Config m_other = kConfigs[draw % 4];
    const double q_other = oracles::uniform(rng, 0.0, 0.5 * (pr.a1 + pr.a2));
    const int focal = 1 + (draw & 1);
    const auto br = best_response(sc, q_other, m_other, focal);
    const double brute = oracles::grid_best_profit(
        sc, focal, q_other, m_other, pr.a1 + pr.a2 + q_other, 10000);
    INFO("p=" << pr.p << " c=" << pr.c << " m_other=" << to_string(m_other));
    REQUIRE_THAT(br.profit, Catch::Matchers::WithinRel(brute, 1e-3));
    REQUIRE(br.profit >= brute - 1e-6 * (1.0 + brute));
  }
}

TEST_CASE("best response reports per-configuration options") {
  const auto sc = scenario_with_rates(5.0, 0.5);
  const auto br = best_response(sc, 0.0, Config::NN, 1);
  REQUIRE(br.config == Config::SN);
  const auto& opts = br.options;
  REQUIRE(opts[index(Config::NN)].feasible);
  REQUIRE(opts[index(Config::SN)].feasible);
  // NS would require CP2's boundary to top CP1's joint bound; with a2 << a1
  // it cannot.
  REQUIRE_FALSE(opts[index(Config::NS)].feasible);
  REQUIRE(opts[index(Config::SS)].feasible);
  REQUIRE(br.profit >= opts[index(Config::NN)].profit);
  REQUIRE(br.profit >= opts[index(Config::SS)].profit - kObjTol);
}

TEST_CASE("an induced SN leaves CP1 at its no-sponsorship surplus") {
  // One-shot best response against an NN rival along the rho = 0.7 ray:
  // under SN the sponsored CP earns exactly what it would without
  // zero-rating on ISP1, and CP2 weakly less; under SS at least one CP is
  // weakly below that benchmark.
  ModelParams base;
  const auto sc0 = Scenario::make(base);
  const double q2 = default_initial_charge(sc0, Config::NN);
  for (int i = 1; i <= 30; ++i) {
    const double a = 3.0 * i / 30.0;
    const auto sc = sc0.with_rates(a, 0.7 * a);
    const auto br = best_response(sc, q2, Config::NN, 1);
    const auto cps = cp_surplus(sc, br.q, br.config, q2, Config::NN);
    const double nn1 = sc.params.a1 * sc.theta.theta(1, Config::NN);
    const double nn2 = sc.params.a2 * sc.theta.theta(2, Config::NN);
    INFO("a=" << a << " induced=" << to_string(br.config));
    if (br.config == Config::SN) {
      REQUIRE_THAT(cps.cp1, Catch::Matchers::WithinAbs(nn1, 1e-9 * (1.0 + nn1)));
      REQUIRE(cps.cp2 <= nn2 + 1e-9);
    } else if (br.config == Config::SS) {
      REQUIRE(std::min(cps.cp1 - nn1, cps.cp2 - nn2) <= 1e-9);
    }
  }
}

TEST_CASE("threshold report: structure around a_s and frozen SN closed form") {
  ModelParams pr;
  const auto sc = Scenario::make(pr);
  for (double rho : {0.1, 0.7, 0.8}) {
    const auto rep = sponsorship_threshold(sc, rho, Config::NN);
    REQUIRE(rep.found);
    REQUIRE(rep.a_s > 0.0);
    const auto below =
        best_response(sc.with_rates(rep.a_s * 0.999, rho * rep.a_s * 0.999),
                      0.0, Config::NN, 1);
    const auto above =
        best_response(sc.with_rates(rep.a_s * 1.001, rho * rep.a_s * 1.001),
                      0.0, Config::NN, 1);
    INFO("rho=" << rho << " a_s=" << rep.a_s);
    REQUIRE(below.config == Config::NN);
    REQUIRE((above.config == Config::SN || above.config == Config::SS));
    // Appendix closed form for the symmetric SN equilibrium:
    // p theta1^SN / (theta1^SN - theta1^NN) = 0.35 * (23/7) / (10/7) = 0.805.
    REQUIRE_THAT(rep.a_sn_sym, Catch::Matchers::WithinAbs(0.805, 1e-6));
  }
}

TEST_CASE("threshold rises with user stickiness") {
  std::vector<double> thresholds;
  for (double t : {3.0, 5.0, 10.0, 50.0}) {
    ModelParams pr;
    pr.t1 = pr.t2 = t;
    thresholds.push_back(
        sponsorship_threshold(Scenario::make(pr), 0.1, Config::NN).a_s);
  }
  for (size_t i = 1; i < thresholds.size(); ++i)
    REQUIRE(thresholds[i] > thresholds[i - 1]);
}

TEST_CASE("doubling the user price raises the threshold while NN revenue rises") {
  // NN revenue is 0.5 p c while capacity binds (p <= 1/(1 + c/2)) and 1 - p
  // once the NN solution is interior, so the threshold only rises with p on
  // the capacity-bound branch. Test the doubling there.
  ModelParams lo, hi;
  lo.p = 0.15;
  hi.p = 0.30;
  const double a_lo = sponsorship_threshold(Scenario::make(lo), 0.1, Config::NN).a_s;
  const double a_hi = sponsorship_threshold(Scenario::make(hi), 0.1, Config::NN).a_s;
  REQUIRE(a_hi > a_lo);
  // Past the interior transition larger p depresses NN revenue and the
  // threshold falls.
  ModelParams steep;
  steep.p = 0.7;
  const double a_steep =
      sponsorship_threshold(Scenario::make(steep), 0.1, Config::NN).a_s;
  ModelParams base;
  const double a_base =
      sponsorship_threshold(Scenario::make(base), 0.1, Config::NN).a_s;
  REQUIRE(a_steep < a_base);
}

TEST_CASE("best-response profit is flat below a_s, rising and convex above") {
  ModelParams pr;
  const auto sc = Scenario::make(pr);
  const double rho = 0.1;
  const auto rep = sponsorship_threshold(sc, rho, Config::NN);
  const double r_nn = best_response(sc.with_rates(1e-6, rho * 1e-6), 0.0,
                                    Config::NN, 1)
                          .profit;
  std::vector<double> as, rs;
  for (int i = 1; i <= 120; ++i) {
    const double a = 3.0 * i / 120.0;
    as.push_back(a);
    rs.push_back(best_response(sc.with_rates(a, rho * a), 0.0, Config::NN, 1).profit);
  }
  size_t first_above = as.size();
  for (size_t i = 0; i < as.size(); ++i) {
    if (as[i] < rep.a_s * (1.0 - 1e-9)) {
      REQUIRE_THAT(rs[i], Catch::Matchers::WithinAbs(r_nn, 1e-9));
    } else if (as[i] > rep.a_s * (1.0 + 1e-9)) {
      if (first_above == as.size()) first_above = i;
      if (i > first_above) REQUIRE(rs[i] > rs[i - 1]);
    }
  }
  REQUIRE(first_above + 2 < as.size());
  // super-linear growth: everything above a_s clears the affine lower bound
  // through the first two sampled points (profit is a max of affines).
  const double slope = (rs[first_above + 1] - rs[first_above]) /
                       (as[first_above + 1] - as[first_above]);
  REQUIRE(slope > 0.0);
  for (size_t i = first_above; i < as.size(); ++i)
    REQUIRE(rs[i] >= rs[first_above] + slope * (as[i] - as[first_above]) - 1e-9);
}

TEST_CASE("threshold falls back to bisection for degenerate rays") {
  // a2 = rho * a with rho -> 1 is fine; degenerate coefficients need a
  // contrived scenario, so exercise the fallback through a tiny a_max that
  // the closed-form candidates exceed.
  ModelParams pr;
  const auto sc = Scenario::make(pr);
  const auto rep = sponsorship_threshold(sc, 0.1, Config::NN, 0.0, 0.2);
  REQUIRE_FALSE(rep.found);
  REQUIRE(std::isinf(rep.a_s));
}
