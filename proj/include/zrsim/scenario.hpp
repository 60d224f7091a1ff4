#pragma once

#include <array>
#include <utility>

#include "zrsim/consumption.hpp"
#include "zrsim/market.hpp"

namespace zrsim {

// Parameters plus everything derivable without prices: the consumption table
// and the 4x4 table of ISP1 shares share1[m1][m2]. Neither depends on
// (a1, a2), so a Scenario can be copied and re-priced per sweep cell for
// free. Construction checks the Hotelling validity condition.
struct Scenario {
  ModelParams params;
  MarketMode mode = MarketMode::duopoly();
  ConsumptionTable theta;
  std::array<std::array<double, 4>, 4> shares{};  // ISP1 share, [m1][m2]

  static Scenario make(ModelParams params,
                       MarketMode mode = MarketMode::duopoly()) {
    params.validate();
    Scenario s;
    s.params = std::move(params);
    s.mode = mode;
    s.theta = ConsumptionTable::compute(s.params);
    for (Config m1 : kConfigs)
      for (Config m2 : kConfigs)
        s.shares[index(m1)][index(m2)] =
            mode.share1(s.theta.surplus(m1), s.theta.surplus(m2), s.params.t1,
                        s.params.t2);
    return s;
  }

  // Same scenario with repriced CP revenue rates; cheap, nothing else moves.
  Scenario with_rates(double a1, double a2) const {
    if (!(a1 >= 0.0) || !(a2 >= 0.0))
      throw InvalidParameter("CP revenue rates must be >= 0");
    Scenario s = *this;
    s.params.a1 = a1;
    s.params.a2 = a2;
    return s;
  }

  double share1(Config m1, Config m2) const {
    return shares[index(m1)][index(m2)];
  }

  // Share of the focal ISP when it runs `own` and the rival runs `other`.
  double own_share(int isp, Config own, Config other) const {
    return isp == 1 ? share1(own, other) : 1.0 - share1(other, own);
  }
};

}  // namespace zrsim
