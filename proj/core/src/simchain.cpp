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

#include <sstream>
#include <vector>

namespace escrow {

void TimeoutPolicy::Validate() const {
  if (!(threshold < timeout)) {
    throw std::invalid_argument("timeout policy needs threshold < timeout");
  }
  if (deposit < 0) throw std::invalid_argument("liveness deposit must be non-negative");
}

Rational DepositPayback(Tick t, const TimeoutPolicy& policy) {
  policy.Validate();
  if (t <= policy.threshold) return policy.deposit;
  if (t >= policy.timeout) return 0;
  const Rational late(Integer(t - policy.threshold), Integer(policy.timeout - policy.threshold));
  return policy.deposit * (1 - late);
}

Ledger::Ledger(Rational fee) : fee_(std::move(fee)) {
  if (fee_ < 0) throw std::invalid_argument("fee must be non-negative");
}

void Ledger::OpenAccount(const PartyId& party, const Rational& initial) {
  if (initial < 0) throw std::invalid_argument("initial balance must be non-negative");
  if (balances_.contains(party)) throw std::invalid_argument("account exists: " + party);
  balances_.emplace(party, initial);
  minted_ += initial;
}

const Rational& Ledger::balance(const PartyId& party) const {
  auto it = balances_.find(party);
  if (it == balances_.end()) throw UnknownAccount("unknown account: " + party);
  return it->second;
}

Rational& Ledger::MutableBalance(const PartyId& party) {
  auto it = balances_.find(party);
  if (it == balances_.end()) throw UnknownAccount("unknown account: " + party);
  return it->second;
}

Rational Ledger::pot(ContractId id) const {
  auto it = pots_.find(id);
  return it == pots_.end() ? Rational(0) : it->second;
}

Rational Ledger::total() const {
  Rational sum = fee_sink_ + arbiter_sink_;
  for (const auto& [_, b] : balances_) sum += b;
  for (const auto& [_, p] : pots_) sum += p;
  return sum;
}

void Ledger::RequireFunds(const PartyId& party, const Rational& needed) const {
  const Rational& have = balance(party);
  if (have < needed) {
    throw InsufficientFunds(party + " holds " + ToString(have) + ", needs " + ToString(needed));
  }
}

void Ledger::RecordMove(const PartyId& party, MoveKind kind) {
  if (kind == MoveKind::kContractMove) ++fee_moves_[party];
}

void Ledger::Transfer(const PartyId& from, const PartyId& to, const Rational& amount,
                      MoveKind kind) {
  if (amount < 0) throw std::invalid_argument("negative transfer");
  balance(to);
  const Rational fee = FeeFor(kind);
  RequireFunds(from, amount + fee);
  MutableBalance(from) -= amount + fee;
  MutableBalance(to) += amount;
  fee_sink_ += fee;
  RecordMove(from, kind);
}

void Ledger::EscrowDeposit(ContractId id, const PartyId& from, const Rational& amount,
                           MoveKind kind) {
  if (amount < 0) throw std::invalid_argument("negative deposit");
  const Rational fee = FeeFor(kind);
  RequireFunds(from, amount + fee);
  MutableBalance(from) -= amount + fee;
  pots_[id] += amount;
  fee_sink_ += fee;
  RecordMove(from, kind);
}

void Ledger::EscrowRelease(ContractId id, const PartyId& to, const Rational& amount) {
  if (amount < 0) throw std::invalid_argument("negative release");
  balance(to);
  if (pot(id) < amount) {
    throw InsufficientFunds("pot " + std::to_string(id) + " holds " + ToString(pot(id)) +
                            ", release of " + ToString(amount) + " requested");
  }
  pots_[id] -= amount;
  MutableBalance(to) += amount;
  ++withdrawals_[to];
}

void Ledger::EscrowToSink(ContractId id, Sink sink, const Rational& amount) {
  if (amount < 0) throw std::invalid_argument("negative release");
  if (pot(id) < amount) {
    throw InsufficientFunds("pot " + std::to_string(id) + " holds " + ToString(pot(id)));
  }
  pots_[id] -= amount;
  (sink == Sink::kFee ? fee_sink_ : arbiter_sink_) += amount;
}

void Ledger::ChargeMove(const PartyId& mover, MoveKind kind) {
  const Rational fee = FeeFor(kind);
  RequireFunds(mover, fee);
  MutableBalance(mover) -= fee;
  fee_sink_ += fee;
  RecordMove(mover, kind);
}

int Ledger::fee_moves(const PartyId& party) const {
  auto it = fee_moves_.find(party);
  return it == fee_moves_.end() ? 0 : it->second;
}

int Ledger::interactions(const PartyId& party) const {
  auto it = withdrawals_.find(party);
  return fee_moves(party) + (it == withdrawals_.end() ? 0 : it->second);
}

Rational Ledger::fees_paid(const PartyId& party) const { return fee_ * fee_moves(party); }

void Ledger::Schedule(ContractId id, Tick deadline) { deadlines_[id] = deadline; }

void Ledger::Cancel(ContractId id) { deadlines_.erase(id); }

std::optional<Tick> Ledger::deadline(ContractId id) const {
  auto it = deadlines_.find(id);
  if (it == deadlines_.end()) return std::nullopt;
  return it->second;
}

void Ledger::AdvanceTime(Tick ticks, const std::function<void(ContractId)>& on_due) {
  if (ticks == 0) throw std::invalid_argument("AdvanceTime needs ticks > 0");
  now_ += ticks;
  for (;;) {
    std::vector<ContractId> due;
    for (const auto& [id, at] : deadlines_) {
      if (at <= now_) due.push_back(id);
    }
    if (due.empty()) return;
    for (ContractId id : due) {
      auto it = deadlines_.find(id);
      if (it == deadlines_.end() || it->second > now_) continue;  // rescheduled by a callback
      deadlines_.erase(it);
      if (on_due) on_due(id);
    }
  }
}

std::string Ledger::Snapshot() const {
  std::ostringstream out;
  for (const auto& [party, b] : balances_) out << party << ' ' << ToString(b) << '\n';
  for (const auto& [id, p] : pots_) out << "pot " << id << ' ' << ToString(p) << '\n';
  out << "sink fee " << ToString(fee_sink_) << '\n'
      << "sink arbiter " << ToString(arbiter_sink_) << '\n'
      << "time " << now_ << '\n';
  return out.str();
}

}  // namespace escrow
