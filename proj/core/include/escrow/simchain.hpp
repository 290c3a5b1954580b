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

// Deterministic in-memory ledger: balances, per-contract escrow pots, a fee
// sink, an arbiter sink, discrete time and per-contract deadlines.
//
// Every operation either applies completely or throws and leaves the ledger
// untouched. Funds only enter through OpenAccount, so
// total() == minted() after any sequence of operations.

#ifndef ESCROW_SIMCHAIN_HPP_
#define ESCROW_SIMCHAIN_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "escrow/rational.hpp"

namespace escrow {

using PartyId = std::string;
using ContractId = std::uint64_t;
using Tick = std::uint64_t;

class InsufficientFunds : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownAccount : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MoveKind {
  kContractMove,  // a player's own move: charged the fee
  kDefaultMove,   // timeout default: free
};

enum class Sink { kFee, kArbiter };

struct TimeoutPolicy {
  Tick threshold = 10;
  Tick timeout = 20;
  Rational deposit = 0;  // liveness deposit D

  void Validate() const;
};

// Liveness payback for a decision taken `t` ticks after it became due: the
// full deposit up to the threshold, then a linear ramp down to zero at the
// timeout.
Rational DepositPayback(Tick t, const TimeoutPolicy& policy);

class Ledger {
 public:
  explicit Ledger(Rational fee = 0);

  void OpenAccount(const PartyId& party, const Rational& initial);
  bool has_account(const PartyId& party) const { return balances_.contains(party); }

  const Rational& balance(const PartyId& party) const;
  Rational pot(ContractId id) const;
  const Rational& sink(Sink which) const {
    return which == Sink::kFee ? fee_sink_ : arbiter_sink_;
  }
  const Rational& fee() const { return fee_; }
  Tick now() const { return now_; }

  Rational total() const;
  const Rational& minted() const { return minted_; }

  void Transfer(const PartyId& from, const PartyId& to, const Rational& amount, MoveKind kind);
  void EscrowDeposit(ContractId id, const PartyId& from, const Rational& amount, MoveKind kind);
  void EscrowRelease(ContractId id, const PartyId& to, const Rational& amount);
  void EscrowToSink(ContractId id, Sink sink, const Rational& amount);
  // A move that moves no funds (e.g. a delivery notification).
  void ChargeMove(const PartyId& mover, MoveKind kind);

  // Fee-bearing moves made by `party`.
  int fee_moves(const PartyId& party) const;
  // Fee-bearing moves plus escrow withdrawals received.
  int interactions(const PartyId& party) const;
  Rational fees_paid(const PartyId& party) const;

  // One pending deadline per contract; scheduling again replaces it.
  void Schedule(ContractId id, Tick deadline);
  void Cancel(ContractId id);
  std::optional<Tick> deadline(ContractId id) const;

  // Advances the clock by `ticks` (> 0), then fires every deadline that is
  // due, in contract-id order. A deadline is unscheduled before its callback
  // runs, so each fires exactly once; callbacks may schedule new deadlines,
  // and any that are already due fire in the same call.
  void AdvanceTime(Tick ticks, const std::function<void(ContractId)>& on_due);

  // `party balance` lines in name order, then `pot <id> <amount>` lines, then
  // `sink fee <amount>`, `sink arbiter <amount>` and `time <t>`.
  std::string Snapshot() const;

 private:
  Rational& MutableBalance(const PartyId& party);
  void RequireFunds(const PartyId& party, const Rational& needed) const;
  Rational FeeFor(MoveKind kind) const { return kind == MoveKind::kContractMove ? fee_ : 0; }
  void RecordMove(const PartyId& party, MoveKind kind);

  Rational fee_;
  Tick now_ = 0;
  std::map<PartyId, Rational> balances_;
  std::map<ContractId, Rational> pots_;
  Rational fee_sink_ = 0;
  Rational arbiter_sink_ = 0;
  Rational minted_ = 0;
  std::map<PartyId, int> fee_moves_;
  std::map<PartyId, int> withdrawals_;
  std::map<ContractId, Tick> deadlines_;
};

}  // namespace escrow

#endif  // ESCROW_SIMCHAIN_HPP_
