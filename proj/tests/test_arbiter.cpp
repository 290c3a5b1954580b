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

#include "escrow/arbiter.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace escrow {
namespace {

double ChiSquareFair(int seller_wins, int n) {
  const double e = n / 2.0;
  const double a = seller_wins - e;
  const double b = (n - seller_wins) - e;
  return (a * a + b * b) / e;
}

constexpr double kChiSquare1Df01 = 6.635;  // 99th percentile, one degree of freedom

Randomness Pattern(std::uint8_t v) {
  Randomness r{};
  r.fill(v);
  return r;
}

Response Send(CoinMessage m, Tick latency = 0) { return {std::move(m), latency}; }

TEST(Oracle, FlipFrequencies) {
  for (const Rational& gamma : {Frac(1, 2), Frac(1, 4)}) {
    Rng rng(17);
    const int n = 10000;
    int wrong = 0;
    for (int i = 0; i < n; ++i) {
      wrong += OracleArbitrate(Player::kBuyer, gamma, rng).winner == Player::kSeller;
    }
    const double p = ToDouble(gamma);
    EXPECT_NEAR(wrong, n * p, 3 * std::sqrt(n * p * (1 - p))) << ToString(gamma);
  }
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(OracleArbitrate(Player::kSeller, 0, rng).winner, Player::kSeller);
  }
  EXPECT_THROW(OracleArbiter(Frac(3, 2)), std::invalid_argument);
}

TEST(CoinToss, XorRule) {
  const TimeoutPolicy policy;
  for (int bs : {0, 1}) {
    for (int bb : {0, 1}) {
      const Opening o{bs, Pattern(9)};
      ScriptedSellerChannel seller(Send(CommitMessage{Commit(o.bit, o.randomness)}),
                                   Send(OpenMessage{o}));
      ScriptedBuyerChannel buyer(Send(BitMessage{bb}));
      const Verdict v = CoinTossArbitrate(seller, buyer, policy);
      EXPECT_EQ(v.basis, VerdictBasis::kCoin);
      EXPECT_EQ(v.winner, (bs ^ bb) ? Player::kSeller : Player::kBuyer) << bs << bb;
      EXPECT_EQ(v.transcript.size(), 3u);
      EXPECT_EQ(ReplayVerdict(v.transcript), v);
    }
  }
}

TEST(CoinToss, InvalidOpeningHandsBuyerTheWin) {
  const Opening committed{1, Pattern(1)};
  const Opening revealed{1, Pattern(2)};
  ScriptedSellerChannel seller(Send(CommitMessage{Commit(committed.bit, committed.randomness)}),
                               Send(OpenMessage{revealed}));
  ScriptedBuyerChannel buyer(Send(BitMessage{0}));
  const Verdict v = CoinTossArbitrate(seller, buyer, TimeoutPolicy{});
  EXPECT_EQ(v.winner, Player::kBuyer);
  EXPECT_EQ(v.basis, VerdictBasis::kInvalidOpening);
}

TEST(CoinToss, SilenceLateAndMalformedForfeit) {
  const TimeoutPolicy policy{10, 20, 0};
  const Opening o{1, Pattern(4)};
  const Response commit = Send(CommitMessage{Commit(o.bit, o.randomness)});

  ScriptedSellerChannel never_reveals(commit, Response{});
  ScriptedBuyerChannel buyer(Send(BitMessage{1}));
  Verdict v = CoinTossArbitrate(never_reveals, buyer, policy);
  EXPECT_EQ(v.winner, Player::kBuyer);
  EXPECT_EQ(v.basis, VerdictBasis::kForfeitByTimeout);
  EXPECT_EQ(v.transcript.back(), "TIMEOUT seller");

  ScriptedSellerChannel honest(commit, Send(OpenMessage{o}));
  ScriptedBuyerChannel late(Send(BitMessage{1}, 20));
  v = CoinTossArbitrate(honest, late, policy);
  EXPECT_EQ(v.winner, Player::kSeller);
  EXPECT_EQ(v.transcript.back(), "TIMEOUT buyer");

  ScriptedBuyerChannel just_in_time(Send(BitMessage{0}, 19));
  EXPECT_EQ(CoinTossArbitrate(honest, just_in_time, policy).basis, VerdictBasis::kCoin);

  ScriptedBuyerChannel garbled(Send(ParseMessage("BIT 7")));
  v = CoinTossArbitrate(honest, garbled, policy);
  EXPECT_EQ(v.winner, Player::kSeller);
  EXPECT_EQ(v.transcript.back(), "MALFORMED buyer BIT 7");
  EXPECT_EQ(ReplayVerdict(v.transcript), v);

  ScriptedSellerChannel wrong_order(Send(OpenMessage{o}), Send(OpenMessage{o}));
  v = CoinTossArbitrate(wrong_order, buyer, policy);
  EXPECT_EQ(v.winner, Player::kBuyer);
  EXPECT_EQ(v.transcript.size(), 1u);
}

TEST(CoinToss, HonestRunsAreFair) {
  Rng rng(2024);
  CoinTossArbiter arbiter(TimeoutPolicy{});
  const int n = 10000;
  int seller_wins = 0;
  for (int i = 0; i < n; ++i) {
    seller_wins += arbiter.Decide(DisputeCase{}, rng).winner == Player::kSeller;
  }
  EXPECT_LT(ChiSquareFair(seller_wins, n), kChiSquare1Df01);
}

// A buyer that derives its bit from the digest gains nothing: the seller's bit
// is uniform and hidden.
class DigestParityBuyer : public BuyerChannel {
 public:
  Response ChooseBit(const Digest& d) override { return {BitMessage{d[0] & 1}, 0}; }
};

TEST(CoinToss, DigestDependentBuyerStillFair) {
  Rng rng(77);
  DigestParityBuyer buyer;
  const int n = 10000;
  int seller_wins = 0;
  for (int i = 0; i < n; ++i) {
    HonestSellerChannel seller(rng);
    seller_wins += CoinTossArbitrate(seller, buyer, TimeoutPolicy{}).winner == Player::kSeller;
  }
  EXPECT_LT(ChiSquareFair(seller_wins, n), kChiSquare1Df01);
}

TEST(Messages, FormatParseRoundTrip) {
  const Opening o{0, Pattern(0xab)};
  for (const CoinMessage& m : {CoinMessage{CommitMessage{Commit(0, o.randomness)}},
                               CoinMessage{BitMessage{1}}, CoinMessage{OpenMessage{o}}}) {
    EXPECT_EQ(FormatMessage(ParseMessage(FormatMessage(m))), FormatMessage(m));
  }
  for (const char* bad : {"", "COMMIT", "COMMIT 12", "BIT 2", "OPEN 1 zz", "HELLO"}) {
    EXPECT_TRUE(std::holds_alternative<MalformedMessage>(ParseMessage(bad))) << bad;
  }
}

TEST(Replay, RejectsImpossibleTranscripts) {
  using T = std::vector<std::string>;
  EXPECT_THROW(ReplayVerdict(T{}), std::invalid_argument);
  EXPECT_THROW(ReplayVerdict(T{"BIT 1"}), std::invalid_argument);
  EXPECT_THROW(ReplayVerdict(T{"TIMEOUT buyer"}), std::invalid_argument);
  EXPECT_THROW(ReplayVerdict(T{"JURY 1 0"}), std::invalid_argument);
  EXPECT_THROW(ReplayVerdict(T{"ORACLE honest=arbiter flipped=0"}), std::invalid_argument);
  const std::string commit = "COMMIT " + ToHex(Commit(0, Pattern(3)));
  EXPECT_THROW(ReplayVerdict(T{commit, "BIT 1"}), std::invalid_argument);
  EXPECT_EQ(ReplayVerdict(T{"ORACLE honest=buyer flipped=1"}).winner, Player::kSeller);
  EXPECT_EQ(ReplayVerdict(T{"JURY 1 1 0"}).winner, Player::kSeller);
  EXPECT_EQ(ReplayVerdict(T{"JURY 1 0 0"}).winner, Player::kBuyer);
}

TEST(Arbiters, DeterministicGivenSeed) {
  Rng a(5), b(5);
  CoinTossArbiter coin(TimeoutPolicy{});
  JuryArbiter jury(5);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(coin.Decide(DisputeCase{}, a), coin.Decide(DisputeCase{}, b));
    EXPECT_EQ(jury.Decide(DisputeCase{}, a), jury.Decide(DisputeCase{}, b));
  }
  EXPECT_THROW(JuryArbiter(4), std::invalid_argument);
  EXPECT_THROW(JuryArbiter(0), std::invalid_argument);
}

}  // namespace
}  // namespace escrow
