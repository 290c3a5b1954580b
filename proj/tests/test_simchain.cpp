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

#include "escrow/simchain.hpp"

#include <gtest/gtest.h>

#include <vector>

#include "escrow/rng.hpp"

namespace escrow {
namespace {

TEST(Ledger, TransfersChargeFeeOnlyForContractMoves) {
  Ledger l(Frac(1, 10));
  l.OpenAccount("a", 5);
  l.OpenAccount("b", 0);
  l.Transfer("a", "b", 2, MoveKind::kContractMove);
  EXPECT_EQ(l.balance("a"), Frac(29, 10));
  EXPECT_EQ(l.balance("b"), 2);
  EXPECT_EQ(l.sink(Sink::kFee), Frac(1, 10));
  l.Transfer("b", "a", 1, MoveKind::kDefaultMove);
  EXPECT_EQ(l.balance("b"), 1);
  EXPECT_EQ(l.fee_moves("a"), 1);
  EXPECT_EQ(l.fee_moves("b"), 0);
  EXPECT_EQ(l.fees_paid("a"), Frac(1, 10));
  EXPECT_EQ(l.total(), l.minted());
}

TEST(Ledger, RejectsAtomically) {
  Ledger l(1);
  l.OpenAccount("a", 3);
  l.OpenAccount("b", 0);
  const std::string before = l.Snapshot();
  EXPECT_THROW(l.Transfer("a", "b", 3, MoveKind::kContractMove), InsufficientFunds);
  EXPECT_THROW(l.Transfer("a", "nobody", 1, MoveKind::kContractMove), UnknownAccount);
  EXPECT_THROW(l.EscrowDeposit(1, "b", 0, MoveKind::kContractMove), InsufficientFunds);
  EXPECT_THROW(l.EscrowRelease(1, "a", 1), InsufficientFunds);
  EXPECT_THROW(l.EscrowToSink(1, Sink::kArbiter, 1), InsufficientFunds);
  EXPECT_THROW(l.ChargeMove("b", MoveKind::kContractMove), InsufficientFunds);
  EXPECT_THROW(l.Transfer("a", "b", -1, MoveKind::kDefaultMove), std::invalid_argument);
  EXPECT_THROW(l.OpenAccount("a", 1), std::invalid_argument);
  EXPECT_EQ(l.Snapshot(), before);
  EXPECT_EQ(l.fee_moves("a"), 0);
}

TEST(Ledger, EscrowFlowAndInteractions) {
  Ledger l(Frac(1, 2));
  l.OpenAccount("buyer", 10);
  l.OpenAccount("seller", 0);
  l.EscrowDeposit(7, "buyer", 4, MoveKind::kContractMove);
  EXPECT_EQ(l.pot(7), 4);
  l.EscrowRelease(7, "seller", 3);
  l.EscrowToSink(7, Sink::kArbiter, 1);
  EXPECT_EQ(l.pot(7), 0);
  EXPECT_EQ(l.sink(Sink::kArbiter), 1);
  EXPECT_EQ(l.interactions("buyer"), 1);
  EXPECT_EQ(l.interactions("seller"), 1);
  EXPECT_EQ(l.Snapshot(),
            "buyer 11/2\nseller 3\npot 7 0\nsink fee 1/2\nsink arbiter 1\ntime 0\n");
}

TEST(Ledger, ConservationUnderRandomOperations) {
  Rng rng(11);
  Ledger l(Frac(1, 7));
  const std::vector<PartyId> parties = {"p0", "p1", "p2", "p3"};
  for (const auto& p : parties) l.OpenAccount(p, 20);
  for (int step = 0; step < 5000; ++step) {
    const auto& a = parties[rng.Below(4)];
    const auto& b = parties[rng.Below(4)];
    const Rational amount(static_cast<long long>(rng.Below(30)), 10);
    const ContractId id = rng.Below(3);
    const MoveKind kind = rng.Bit() ? MoveKind::kContractMove : MoveKind::kDefaultMove;
    try {
      switch (rng.Below(5)) {
        case 0: l.Transfer(a, b, amount, kind); break;
        case 1: l.EscrowDeposit(id, a, amount, kind); break;
        case 2: l.EscrowRelease(id, b, amount); break;
        case 3: l.EscrowToSink(id, rng.Bit() ? Sink::kFee : Sink::kArbiter, amount); break;
        default: l.ChargeMove(a, kind); break;
      }
    } catch (const InsufficientFunds&) {
    }
    ASSERT_EQ(l.total(), l.minted());
    for (const auto& p : parties) ASSERT_GE(l.balance(p), 0);
  }
}

TEST(DepositPayback, Shape) {
  const TimeoutPolicy p{10, 20, 4};
  EXPECT_EQ(DepositPayback(0, p), 4);
  EXPECT_EQ(DepositPayback(10, p), 4);
  EXPECT_EQ(DepositPayback(15, p), 2);
  EXPECT_EQ(DepositPayback(20, p), 0);
  EXPECT_EQ(DepositPayback(1000, p), 0);
  Rational prev = DepositPayback(0, p);
  for (Tick t = 1; t <= 25; ++t) {
    const Rational cur = DepositPayback(t, p);
    EXPECT_LE(cur, prev);
    EXPECT_LE(prev - cur, Frac(4, 10));  // Lipschitz: no jump larger than one ramp step
    prev = cur;
  }
  EXPECT_THROW(DepositPayback(0, TimeoutPolicy{5, 5, 1}), std::invalid_argument);
  EXPECT_THROW(DepositPayback(0, TimeoutPolicy{1, 5, -1}), std::invalid_argument);
}

TEST(Ledger, DeadlinesFireOnceInIdOrder) {
  Ledger l;
  l.Schedule(3, 5);
  l.Schedule(1, 5);
  l.Schedule(2, 9);
  std::vector<ContractId> fired;
  auto record = [&](ContractId id) { fired.push_back(id); };
  l.AdvanceTime(4, record);
  EXPECT_TRUE(fired.empty());
  l.AdvanceTime(1, record);
  EXPECT_EQ(fired, (std::vector<ContractId>{1, 3}));
  l.AdvanceTime(10, record);
  EXPECT_EQ(fired, (std::vector<ContractId>{1, 3, 2}));
  l.AdvanceTime(10, record);
  EXPECT_EQ(fired.size(), 3u);
  EXPECT_EQ(l.now(), 25u);
  EXPECT_THROW(l.AdvanceTime(0, record), std::invalid_argument);
}

TEST(Ledger, CallbacksMayReschedule) {
  Ledger l;
  l.Schedule(1, 1);
  int calls = 0;
  l.AdvanceTime(3, [&](ContractId id) {
    if (++calls < 3) l.Schedule(id, l.now());  // already due: fires again in this call
  });
  EXPECT_EQ(calls, 3);
  EXPECT_FALSE(l.deadline(1).has_value());
}

}  // namespace
}  // namespace escrow
