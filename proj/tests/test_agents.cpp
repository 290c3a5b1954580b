// Copyright 2026 The escrowlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "escrow/agents.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace escrow {
namespace {

TradeParams Params(Rational x, Rational xs, Rational y, Rational gamma, Rational tau = 0) {
  TradeParams p;
  p.price = std::move(x);
  p.seller_value = std::move(xs);
  p.buyer_value = std::move(y);
  p.arbiter_error = std::move(gamma);
  p.fee = std::move(tau);
  return p;
}

StrategyPair Pair(std::string_view seller, std::string_view buyer) {
  return {SellerStrategy::Parse(seller), BuyerStrategy::Parse(buyer)};
}

// Two-point law: `win` with probability p, `lose` otherwise.
struct TwoPoint {
  double p, win, lose;
  double mean() const { return p * win + (1 - p) * lose; }
  double stddev() const { return std::abs(win - lose) * std::sqrt(p * (1 - p)); }
};

void ExpectWithin3Sigma(double observed, const TwoPoint& law, std::uint64_t n) {
  EXPECT_NEAR(observed, law.mean(), 3 * law.stddev() / std::sqrt(static_cast<double>(n)));
}

TEST(Strategies, ParseAndName) {
  for (const auto& s : AllSellerStrategies()) EXPECT_EQ(SellerStrategy::Parse(s.Name()), s);
  for (const auto& b : AllBuyerStrategies()) EXPECT_EQ(BuyerStrategy::Parse(b.Name()), b);
  EXPECT_EQ(AllSellerStrategies().front(), SellerStrategy::Honest());
  EXPECT_EQ(AllBuyerStrategies().front(), BuyerStrategy::Honest());
  EXPECT_EQ(SellerStrategy::Parse("honest").Name(), "send,counter,forfeit");
  EXPECT_EQ(BuyerStrategy::Parse("honest").Name(), "accept,dispute");
  EXPECT_THROW(SellerStrategy::Parse("send,counter"), std::invalid_argument);
  EXPECT_THROW(BuyerStrategy::Parse("accept,maybe"), std::invalid_argument);
}

TEST(Simulate, HonestPairIsExact) {
  const TradeParams p = Params(1, Frac(1, 4), 2, Frac(1, 4), Frac(1, 20));
  const auto stats = Simulate(p, StandardWager{1}, Pair("honest", "honest"), 200, 1);
  // Seller pays propose and notify fees, buyer pays the funding fee.
  EXPECT_EQ(stats.mean.buyer, Rational(2 - 1) - Frac(1, 20));
  EXPECT_EQ(stats.mean.seller, Rational(1) - Frac(1, 4) - Frac(2, 20));
  EXPECT_EQ(stats.mean, AnalyticPayoff(p, StandardWager{1}, Pair("honest", "honest")));
  EXPECT_EQ(stats.buyer_stddev, 0);
  EXPECT_EQ(stats.dispute_rate, 0);
  EXPECT_EQ(stats.fees_total, 200 * Frac(3, 20));
}

TEST(Simulate, DisputingBuyerMatchesLaw) {
  const Rational x = 1, y = 2, lambda = 1, gamma = Frac(1, 4);
  const TradeParams p = Params(x, 0, y, gamma);
  const std::uint64_t n = 10000;
  const auto stats = Simulate(p, StandardWager{lambda}, Pair("honest", "dispute,dispute"), n, 42);
  // Buyer wins a wrong ruling (prob gamma) and keeps the item; else loses x + lambda.
  const TwoPoint buyer{ToDouble(gamma), ToDouble(y), -ToDouble(x + lambda)};
  ExpectWithin3Sigma(ToDouble(stats.mean.buyer), buyer, n);
  EXPECT_NEAR(stats.buyer_stddev, buyer.stddev(), 0.05);
  EXPECT_EQ(stats.arbitration_rate, 1);
}

TEST(Simulate, HonestBuyerIsBestResponse) {
  for (const Rational& gamma : {Rational(0), Frac(1, 5), Frac(9, 20)}) {
    const TradeParams p = Params(1, 0, 2, gamma);
    const WagerScheme s = StandardWager{1};
    const auto honest = Simulate(p, s, Pair("honest", "honest"), 500, 3).mean.buyer;
    for (const auto& b : AllBuyerStrategies()) {
      if (b == BuyerStrategy::Honest()) continue;
      const StrategyPair pair{SellerStrategy::Honest(), b};
      const auto stats = Simulate(p, s, pair, 4000, 5);
      if (!b.dispute_if_received) {  // same path as the honest buyer against an honest seller
        EXPECT_EQ(stats.mean.buyer, honest);
        continue;
      }
      EXPECT_LT(ToDouble(stats.mean.buyer) + 3 * stats.buyer_stddev / std::sqrt(4000.0),
                ToDouble(honest))
          << b.Name() << " gamma " << ToString(gamma);
    }
  }
}

TEST(Simulate, EveryLeafReachedWithCorrectPayoff) {
  const Rational x = 2, xs = Frac(1, 2), y = 3, lambda = 1, gamma = Frac(3, 10);
  const TradeParams p = Params(x, xs, y, gamma);
  const WagerScheme s = StandardWager{lambda};
  const double g = ToDouble(gamma), dx = ToDouble(x), dxs = ToDouble(xs), dy = ToDouble(y),
               dl = ToDouble(lambda);
  struct Case {
    const char* seller;
    const char* buyer;
    Leaf leaf;
    std::optional<TwoPoint> buyer_law, seller_law;  // nullopt: deterministic
  };
  const std::vector<Case> cases = {
      {"send,counter,forfeit", "accept,dispute", Leaf::kSendAccept, {}, {}},
      {"send,forfeit,forfeit", "dispute,dispute", Leaf::kSendDisputeForfeit, {}, {}},
      {"send,counter,forfeit", "dispute,dispute", Leaf::kSendDisputeCounter,
       TwoPoint{g, dy, -dx - dl}, TwoPoint{1 - g, dx - dxs, -dl - dxs}},
      {"not-send,counter,forfeit", "accept,accept", Leaf::kNotSendAccept, {}, {}},
      {"not-send,counter,forfeit", "accept,dispute", Leaf::kNotSendDisputeForfeit, {}, {}},
      {"not-send,counter,counter", "accept,dispute", Leaf::kNotSendDisputeCounter,
       TwoPoint{1 - g, 0, -dx - dl}, TwoPoint{g, dx, -dl}},
  };
  for (const auto& c : cases) {
    SCOPED_TRACE(std::string(c.seller) + " / " + c.buyer);
    const StrategyPair pair = Pair(c.seller, c.buyer);
    EXPECT_EQ(LeafFor(pair), c.leaf);
    const std::uint64_t n = c.buyer_law ? 10000 : 100;
    const auto stats = Simulate(p, s, pair, n, 99);
    EXPECT_EQ(stats.leaf_counts[static_cast<std::size_t>(c.leaf)], n);
    if (c.buyer_law) {
      ExpectWithin3Sigma(ToDouble(stats.mean.buyer), *c.buyer_law, n);
      ExpectWithin3Sigma(ToDouble(stats.mean.seller), *c.seller_law, n);
    } else {
      EXPECT_EQ(stats.mean, AnalyticPayoff(p, s, pair));
    }
  }
}

TEST(Simulate, CoinArbiterIsFairAndLedgerValuationKeepsItem) {
  const TradeParams p = Params(1, 0, 2, Frac(1, 4));
  SimOptions o;
  o.arbiter = ArbiterKind::kCoinToss;
  o.valuation = Valuation::kLedger;
  const std::uint64_t n = 10000;
  const auto stats = Simulate(p, StandardWager{1}, Pair("honest", "dispute,dispute"), n, 7, o);
  EXPECT_NEAR(stats.seller_win_rate, 0.5, 3 * 0.5 / std::sqrt(static_cast<double>(n)));
  // Buyer always holds the item: y + (0 or -(x + lambda)), each with prob 1/2.
  ExpectWithin3Sigma(ToDouble(stats.mean.buyer), TwoPoint{0.5, 2, 0}, n);
}

TEST(Simulate, UnresponsivePartiesGetTheDefault) {
  const TradeParams p = Params(1, 0, 2, Frac(1, 4), Frac(1, 10));
  StrategyPair pair = Pair("honest", "honest");
  pair.buyer.responsive = false;
  EXPECT_EQ(Simulate(p, StandardWager{1}, pair, 10, 1).mean,
            Simulate(p, StandardWager{1}, Pair("honest", "honest"), 10, 1).mean);
  pair = Pair("not-send,counter,forfeit", "honest");
  pair.seller.responsive = false;
  EXPECT_EQ(Simulate(p, StandardWager{1}, pair, 10, 1).leaf_counts[static_cast<std::size_t>(
                Leaf::kNotSendDisputeForfeit)],
            10u);
}

TEST(Simulate, DeterministicAcrossWorkers) {
  const TradeParams p = Params(1, 0, 2, Frac(1, 3));
  const StrategyPair pair = Pair("honest", "dispute,dispute");
  SimOptions one, three;
  three.workers = 3;
  const auto a = Simulate(p, StandardWager{1}, pair, 1001, 11, one);
  EXPECT_EQ(a, Simulate(p, StandardWager{1}, pair, 1001, 11, three));
  EXPECT_EQ(a, Simulate(p, StandardWager{1}, pair, 1001, 11, one));
  EXPECT_NE(a, Simulate(p, StandardWager{1}, pair, 1001, 12, one));
  EXPECT_THROW(Simulate(p, StandardWager{1}, pair, 0, 1), std::invalid_argument);
}

TEST(Sweep, GammaGridCompleteBelowHalf) {
  SweepGrid grid;
  grid.base = Params(1, 0, 2, 0);
  for (int k = 0; k <= 20; ++k) grid.gammas.push_back(Frac(k, 20));
  const auto rows = Sweep(grid);
  ASSERT_EQ(rows.size(), 21u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.report.complete, r.gamma < Frac(1, 2)) << ToString(r.gamma);
    EXPECT_EQ(r.lambda, 1);
  }
}

TEST(Sweep, LambdaGridMatchesInterval) {
  SweepGrid grid;
  grid.base = Params(1, 0, 2, 0);
  grid.gammas = {Frac(1, 4)};
  for (int k = 1; k <= 16; ++k) grid.lambdas.push_back(Frac(k, 4));
  for (const auto& r : Sweep(grid)) {
    EXPECT_EQ(r.report.complete, Frac(1, 3) < r.lambda && r.lambda < 3) << ToString(r.lambda);
  }
}

TEST(Sweep, FeeAtMarginRemovesSoundness) {
  SweepGrid grid;
  grid.base = Params(1, 0, 2, 0);
  grid.gammas = {Frac(1, 4)};
  grid.taus = {Frac(1, 2) - Frac(1, 100), Frac(1, 2), 1};  // x(1 - 2 gamma) = 1/2
  grid.epsilons = {Frac(1, 1000)};
  const auto rows = Sweep(grid);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].report.sound_epsilon_max.has_value());
  EXPECT_FALSE(rows[1].report.sound_epsilon_max.has_value());
  EXPECT_FALSE(rows[2].report.sound_epsilon_max.has_value());
  EXPECT_TRUE(*rows[0].sound);
  EXPECT_FALSE(*rows[1].sound);
  const std::string csv = SweepCsv(rows);
  EXPECT_NE(csv.find(",eps,sound\n"), std::string::npos);
  grid.schemes = {"generic"};
  EXPECT_THROW(Sweep(grid), std::invalid_argument);
}

TEST(Sweep, SkipsIllPosedPoints) {
  SweepGrid grid;
  grid.base = Params(1, 0, 2, 0);
  grid.gammas = {Frac(1, 4), Rational(2)};
  EXPECT_EQ(Sweep(grid).size(), 1u);
}

}  // namespace
}  // namespace escrow
