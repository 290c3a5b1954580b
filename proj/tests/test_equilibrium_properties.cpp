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

// Randomized checks of the equilibrium engine against the oracle and the
// closed-form results.

#include <gtest/gtest.h>

#include <random>

#include "escrow/equilibrium.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

namespace escrow {
namespace {

using testutil::ToOracle;

const Rational& Slack(const std::vector<ConstraintSlack>& slacks, Constraint c) {
  for (const auto& s : slacks) {
    if (s.which == c) return s.slack;
  }
  throw std::out_of_range("constraint missing");
}

TEST(Properties, OracleAgreementOnRandomDraws) {
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<int> k(1, 16);
  int complete_count = 0;
  for (int i = 0; i < 1000; ++i) {
    const TradeParams p = testutil::RandomTrade(g);
    const WagerScheme s = StandardWager{p.price * Rational(k(g), 4)};
    const GameTree tree = BuildGameTree(p, s, false);

    const auto oracle_spe = oracle::Game(ToOracle(p, s)).SpeSet();
    const bool oracle_unique_honest =
        oracle_spe.size() == 1 && oracle_spe[0] == oracle::Profile{0, 0, 0, 0, 0};
    const auto spe = BruteForceSpe(tree, 0);
    const bool brute_unique_honest = spe.size() == 1 && spe[0] == StrategyProfile::Honest(tree);
    const SolvedTree solved = BackwardInduction(tree);

    const bool complete = CheckCompleteness(p, s).complete;
    ASSERT_EQ(complete, oracle_unique_honest) << i;
    ASSERT_EQ(complete, brute_unique_honest) << i;
    ASSERT_EQ(complete, solved.honest() && solved.unique()) << i;
    ASSERT_EQ(spe.size(), oracle_spe.size()) << i;
    complete_count += complete;
  }
  // The grid must exercise both outcomes.
  EXPECT_GT(complete_count, 100);
  EXPECT_LT(complete_count, 900);
}

TEST(Properties, SoundnessIsTightAtLambdaEqualsX) {
  std::mt19937_64 g(99);
  for (int i = 0; i < 300; ++i) {
    const TradeParams p = testutil::RandomTrade(g, true);
    const WagerScheme s = StandardWager{p.price};
    ASSERT_TRUE(CheckCompleteness(p, s).complete);
    const Rational bound = p.price * (1 - 2 * p.arbiter_error);
    ASSERT_EQ(SoundnessEpsilonMax(p, s), bound);
    EXPECT_TRUE(CheckSoundness(p, s, bound).inequalities_hold);
    EXPECT_FALSE(CheckSoundness(p, s, bound + Rational(1, 1000000)).inequalities_hold);
    // The oracle's honest margins at the three dispute nodes agree.
    const auto m = oracle::Game(ToOracle(p, s)).HonestMargins();
    EXPECT_EQ(std::min({m[node::kAfterSend], m[node::kSendDispute], m[node::kNotSendDispute]}),
              bound);
  }
}

TEST(Properties, StrongSecurityOverGammaGrid) {
  for (int k = 0; k <= 4; ++k) {
    const Rational gamma(k, 10);
    for (int xi = 1; xi <= 6; ++xi) {
      const TradeParams p = testutil::Trade(xi, Rational(xi, 3), xi + 2, gamma);
      const SecurityReport r = Analyze(p, StandardWager{p.price});
      EXPECT_TRUE(r.strong);
      EXPECT_EQ(r.strong_epsilon, p.price * (1 - 2 * gamma));
    }
  }
}

TEST(Properties, FeeBoundOverGammaGrid) {
  for (int k = 0; k <= 4; ++k) {
    const Rational gamma(k, 10);
    for (int j = 1; j < 10; ++j) {
      TradeParams p = testutil::Trade(2, Rational(1, 2), 5, gamma);
      const Rational bound = p.price * (1 - 2 * gamma);
      p.fee = std::min<Rational>(bound, p.price - p.seller_value) * Rational(j, 10);
      const SecurityReport r = Analyze(p, StandardWager{p.price});
      ASSERT_TRUE(r.strong) << ToString(gamma) << ' ' << ToString(p.fee);
      EXPECT_EQ(r.strong_epsilon, bound - p.fee);
    }
  }
}

TEST(Properties, IntervalConsistency) {
  std::mt19937_64 g(31);
  for (int i = 0; i < 300; ++i) {
    TradeParams p = testutil::RandomTrade(g);
    if (i % 3 == 0) p.fee = testutil::Uniform(g, 0, 4, 16);
    for (const WagerScheme& kind : std::vector<WagerScheme>{
             StandardWager{1}, WinnerRebateWager{1}, WithheldWager{1}}) {
      const LambdaInterval in = AdmissibleLambda(p, kind, std::nullopt);
      std::vector<Rational> probes;
      for (int q = 1; q <= 24; ++q) probes.push_back(p.price * Rational(q, 6));
      if (!in.empty()) {
        probes.push_back(in.lower().value);
        probes.push_back(in.lower().value + Rational(1, 1000));
        if (in.upper()) {
          probes.push_back(in.upper()->value);
          probes.push_back((in.lower().value + in.upper()->value) / 2);
          if (in.upper()->value > Rational(1, 1000)) probes.push_back(in.upper()->value - Rational(1, 1000));
        }
      }
      for (const Rational& l : probes) {
        if (l <= 0) continue;
        ASSERT_EQ(in.contains(l), CheckCompleteness(p, WithLambda(kind, l)).complete)
            << SchemeName(kind) << " lambda=" << ToString(l) << " interval=" << in.ToString();
      }

      const Rational eps = p.price * Rational(1 + i % 4, 10);
      const LambdaInterval se = AdmissibleLambda(p, kind, eps);
      for (const Rational& l : probes) {
        if (l <= 0) continue;
        ASSERT_EQ(se.contains(l), CheckSoundness(p, WithLambda(kind, l), eps).inequalities_hold)
            << SchemeName(kind) << " lambda=" << ToString(l) << " interval=" << se.ToString();
      }
    }
  }
}

TEST(Properties, DishonestSellerForfeitImpliesHonestBuyerAccepts) {
  std::mt19937_64 g(77);
  int exercised = 0;
  for (int i = 0; i < 2000; ++i) {
    const TradeParams p = testutil::RandomTrade(g);
    const WagerScheme s = StandardWager{testutil::Uniform(g, 1, 80, 8)};
    const auto slacks = CheckCompleteness(p, s).slacks;
    if (Slack(slacks, Constraint::kDishonestSellerForfeits) > 0) {
      ++exercised;
      ASSERT_GT(Slack(slacks, Constraint::kHonestBuyerAccepts), 0) << i;
    }
  }
  EXPECT_GT(exercised, 200);
}

TEST(Properties, StrongImpliesCompleteAndSound) {
  std::mt19937_64 g(5);
  for (int i = 0; i < 300; ++i) {
    TradeParams p = testutil::RandomTrade(g);
    p.fee = testutil::Uniform(g, 0, 4, 16);
    const WagerScheme s = WinnerRebateWager{testutil::Uniform(g, 1, 80, 8)};
    const SecurityReport r = Analyze(p, s);
    if (r.strong) {
      EXPECT_TRUE(r.complete);
      EXPECT_TRUE(CheckSoundness(p, s, *r.strong_epsilon).inequalities_hold);
      EXPECT_TRUE(r.weak);
    }
    if (r.complete) {
      EXPECT_GT(r.tree_margin, 0);
    }
  }
}

TEST(Properties, WinnerRebateLambdaIsSound) {
  std::mt19937_64 g(17);
  for (int i = 0; i < 200; ++i) {
    const TradeParams p = testutil::RandomTrade(g, true);
    const Rational eps = testutil::Uniform(g, 1, 40, 10);
    const Rational lambda = WinnerRebateLambda(p, eps);
    EXPECT_TRUE(CheckSoundness(p, WinnerRebateWager{lambda}, eps).inequalities_hold);
  }
}

}  // namespace
}  // namespace escrow
