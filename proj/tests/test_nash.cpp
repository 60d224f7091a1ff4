#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zrsim/zrsim.hpp"

using namespace zrsim;

namespace {

Scenario base_scenario() {
  ModelParams pr;  // p=0.35, c=4, t=3
  return Scenario::make(pr);
}

bool in_unit_interval(double v) { return v >= -1e-9 && v <= 1.0 + 1e-9; }

}  // namespace

TEST_CASE("indicator coefficients vanish unless the rival hosts the CP") {
  const auto sc = base_scenario();
  const auto k_nn = nash_coefficients(sc, Config::NN);
  REQUIRE(k_nn.alpha2 == 0.0);
  REQUIRE(k_nn.beta2 == 0.0);
  REQUIRE(k_nn.gamma2 == 0.0);
  REQUIRE(k_nn.delta2 == 0.0);
  const auto k_sn = nash_coefficients(sc, Config::SN);
  REQUIRE(k_sn.alpha2 > 0.0);   // CP1 sponsors on the rival under SN
  REQUIRE(k_sn.beta2 == 0.0);   // CP2 does not
  REQUIRE(k_sn.gamma2 > 0.0);
  REQUIRE(k_sn.delta2 == 0.0);
  const auto k_ns = nash_coefficients(sc, Config::NS);
  REQUIRE(k_ns.alpha2 == 0.0);
  REQUIRE(k_ns.beta2 > 0.0);
  REQUIRE(k_ns.delta2 > 0.0);
}

TEST_CASE("alpha1 against NN reduces to 1 - theta1^NN / theta1^SN") {
  const auto sc = base_scenario();
  const auto k = nash_coefficients(sc, Config::NN);
  // theta1^NN = 13/7, theta1^SN = 23/7 at the base point
  REQUIRE_THAT(k.alpha1, Catch::Matchers::WithinAbs(1.0 - 13.0 / 23.0, 1e-12));
  REQUIRE_THAT(k.alpha1, Catch::Matchers::WithinAbs(0.4348, 1e-4));
  REQUIRE_THAT(k.beta1, Catch::Matchers::WithinAbs(k.alpha1, 1e-12));
}

TEST_CASE("alpha1 boundary equals CP1's brute-force indifference charge") {
  ModelParams pr;
  pr.a1 = 2.0;
  pr.a2 = 0.2;
  const auto sc = Scenario::make(pr);
  for (Config m2 : {Config::NN, Config::SN, Config::SS}) {
    const double q_other = 0.6;
    const auto k = nash_coefficients(sc, m2);
    const double analytic = pr.a1 * k.alpha1 + q_other * k.alpha2;
    const double brute = oracles::cp1_indifference_charge(sc, q_other, m2, 10.0);
    REQUIRE_THAT(brute, Catch::Matchers::WithinAbs(analytic, 1e-6));
  }
}

TEST_CASE("symmetric rival state collapses gamma onto delta") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 40; ++i) {
    const auto sc = Scenario::make(oracles::random_params(rng));
    const auto k = nash_coefficients(sc, Config::SS);
    REQUIRE_THAT(k.gamma1, Catch::Matchers::WithinAbs(k.delta1, 1e-12));
    REQUIRE_THAT(k.gamma2, Catch::Matchers::WithinAbs(k.delta2, 1e-12));
  }
}

TEST_CASE("all eight coefficients stay inside [0, 1] (random draws)") {
  std::mt19937_64 rng(20240812);
  for (int i = 0; i < 120; ++i) {
    const auto sc = Scenario::make(oracles::random_params(rng));
    for (Config m2 : kConfigs) {
      for (int focal : {1, 2}) {
        const auto k = nash_coefficients(sc, m2, focal);
        INFO("p=" << sc.params.p << " c=" << sc.params.c << " t1=" << sc.params.t1
                  << " t2=" << sc.params.t2 << " m2=" << to_string(m2)
                  << " focal=" << focal);
        for (double v : {k.alpha1, k.alpha2, k.beta1, k.beta2, k.gamma1,
                         k.gamma2, k.delta1, k.delta2})
          REQUIRE(in_unit_interval(v));
        REQUIRE_FALSE(k.degenerate);
      }
    }
  }
}

TEST_CASE("equilibrium configuration set: spot cases") {
  ModelParams pr;
  pr.a1 = 2.0;
  pr.a2 = 0.2;
  const auto sc = Scenario::make(pr);

  SECTION("a huge charge forces NN only") {
    const auto set = equilibrium_configs(sc, pr.a1 + pr.a2 + 5.0, 1.0, Config::NN);
    REQUIRE(set.contains(Config::NN));
    REQUIRE(set.size() == 1);
  }
  SECTION("free sponsorship admits SS") {
    const auto set = equilibrium_configs(sc, 0.0, 0.0, Config::NN);
    REQUIRE(set.contains(Config::SS));
  }
  SECTION("the alpha boundary carries both NN and SN") {
    const auto k = nash_coefficients(sc, Config::NN);
    const auto set = equilibrium_configs(sc, pr.a1 * k.alpha1, 0.7, Config::NN);
    REQUIRE(set.contains(Config::SN));
    REQUIRE(set.contains(Config::NN));
  }
}

TEST_CASE("equilibrium set matches direct deviation comparisons") {
  std::mt19937_64 rng(555);
  for (int draw = 0; draw < 50; ++draw) {
    const auto pr = oracles::random_params(rng);
    const auto sc = Scenario::make(pr);
    for (int rep = 0; rep < 8; ++rep) {
      const double q1 = oracles::uniform(rng, 0.0, pr.a1 + pr.a2);
      const double q2 = oracles::uniform(rng, 0.0, pr.a1 + pr.a2);
      const Config m2 = kConfigs[rep % 4];
      const int focal = 1 + (rep & 1);
      const auto fast = equilibrium_configs(sc, q1, q2, m2, focal);
      const auto slow = oracles::ne_by_deviation(sc, q1, q2, m2, focal);
      INFO("q1=" << q1 << " q2=" << q2 << " m2=" << to_string(m2)
                 << " focal=" << focal);
      REQUIRE(fast == slow);
      REQUIRE_FALSE(fast.empty());
    }
  }
}

TEST_CASE("sponsorship count in the selected equilibria decreases in q1") {
  std::mt19937_64 rng(321);
  for (int draw = 0; draw < 30; ++draw) {
    const auto pr = oracles::random_params(rng);
    const auto sc = Scenario::make(pr);
    const Config m2 = kConfigs[draw % 4];
    const double q2 = oracles::uniform(rng, 0.0, pr.a1 + pr.a2);
    int prev = 2;
    for (int i = 0; i <= 40; ++i) {
      const double q1 = (pr.a1 + pr.a2 + q2) * i / 40.0;
      const auto set = equilibrium_configs(sc, q1, q2, m2);
      int most = 0;
      for (Config m : set.values()) most = std::max(most, sponsor_count(m));
      REQUIRE(most <= prev);
      prev = most;
    }
  }
}

TEST_CASE("CP surplus closed forms") {
  ModelParams pr;
  pr.a1 = 5.0;
  pr.a2 = 0.5;
  const auto sc = Scenario::make(pr);
  const auto& th = sc.theta;

  SECTION("NN on both sides pays each CP its full rate") {
    const auto rep = cp_surplus(sc, 0.3, Config::NN, 0.9, Config::NN);
    REQUIRE_THAT(rep.cp1, Catch::Matchers::WithinAbs(
                              pr.a1 * th.theta(1, Config::NN), 1e-12));
    REQUIRE_THAT(rep.cp2, Catch::Matchers::WithinAbs(
                              pr.a2 * th.theta(2, Config::NN), 1e-12));
  }
  SECTION("symmetric SN-SN at q(a) leaves CP1 at its no-zero-rating profit") {
    const double q =
        pr.a1 * (1.0 - th.theta(1, Config::NN) / th.theta(1, Config::SN));
    const auto rep = cp_surplus(sc, q, Config::SN, q, Config::SN);
    REQUIRE_THAT(rep.cp1, Catch::Matchers::WithinAbs(
                              pr.a1 * th.theta(1, Config::NN), 1e-9));
    REQUIRE_THAT(rep.cp2, Catch::Matchers::WithinAbs(
                              pr.a2 * th.theta(2, Config::SN), 1e-12));
    REQUIRE(rep.cp2 < pr.a2 * th.theta(2, Config::NN));
  }
}
