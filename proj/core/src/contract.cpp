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

#include "escrow/contract.hpp"

#include <sstream>

namespace escrow {
namespace {

std::string SignedAmount(const Rational& v) {
  if (v > 0) return "+" + ToString(v);
  return ToString(v);
}

}  // namespace

std::string_view PhaseName(Phase phase) {
  switch (phase) {
    case Phase::kProposed: return "proposed";
    case Phase::kFunded: return "funded";
    case Phase::kDeliveredNotified: return "delivered-notified";
    case Phase::kDisputed: return "disputed";
    case Phase::kCountered: return "countered";
    case Phase::kArbitrating: return "arbitrating";
    case Phase::kSettled: return "settled";
    case Phase::kAborted: return "aborted";
  }
  return "?";
}

bool IsTerminal(Phase phase) { return phase == Phase::kSettled || phase == Phase::kAborted; }

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kAccepted: return "accepted";
    case Outcome::kForfeited: return "forfeited";
    case Outcome::kArbitrated: return "arbitrated";
    case Outcome::kAborted: return "aborted";
  }
  return "?";
}

Rational ContractConfig::lambda() const {
  auto l = SchemeLambda(scheme);
  if (!l) throw ContractError("the contract runs standard, winner_rebate or withheld wagers only");
  return *l;
}

Rational ContractConfig::deposit() const { return liveness_deposit.value_or(lambda()); }

void ContractConfig::Validate() const {
  params.Validate();
  ValidateScheme(scheme);
  const Rational l = lambda();
  TimeoutPolicy p = policy;
  p.deposit = deposit();
  p.Validate();
  if (seller == buyer) throw ContractError("seller and buyer must be distinct parties");
  if (rebate_arbiter_fee < 0 || rebate_arbiter_fee > l) {
    throw ContractError("rebate arbiter fee must lie in [0, lambda]");
  }
}

std::string FormatEvent(const Event& e) {
  std::ostringstream out;
  out << e.time << ' ' << PhaseName(e.phase) << ' ' << e.actor << ' ' << e.action << ' '
      << SignedAmount(e.pot_delta);
  return out.str();
}

EscrowContract::EscrowContract(Ledger& ledger, ContractId id, ContractConfig config)
    : ledger_(ledger), config_(std::move(config)) {
  config_.Validate();
  config_.policy.deposit = config_.deposit();
  ledger_.balance(config_.buyer);  // both accounts must exist up front
  state_.id = id;
  const Rational before = state_.pot.total();
  Deposit(Player::kSeller, &PotBreakdown::seller_deposit, config_.policy.deposit);
  Enter(Phase::kProposed);
  Record("seller", "propose", before);
}

const PartyId& EscrowContract::PartyOf(Player who) const {
  return who == Player::kSeller ? config_.seller : config_.buyer;
}

Player EscrowContract::RoleOf(const PartyId& actor) const {
  if (actor == config_.seller) return Player::kSeller;
  if (actor == config_.buyer) return Player::kBuyer;
  throw ContractError("'" + actor + "' is not a party to contract " + std::to_string(state_.id));
}

void EscrowContract::Require(const PartyId& actor, Player role,
                             std::initializer_list<Phase> phases, std::string_view move) const {
  if (RoleOf(actor) != role) {
    throw ContractError(std::string(move) + " is a " + std::string(PlayerName(role)) + " move");
  }
  for (Phase p : phases) {
    if (state_.phase == p) return;
  }
  throw ContractError(std::string(move) + " is not allowed in phase " +
                      std::string(PhaseName(state_.phase)));
}

bool EscrowContract::Late() const { return ledger_.now() >= state_.deadline; }

void EscrowContract::NoteLatency(Player who, Tick latency) {
  Tick& slot = who == Player::kSeller ? state_.seller_latency : state_.buyer_latency;
  slot = std::max(slot, latency);
}

void EscrowContract::Enter(Phase phase) {
  state_.phase = phase;
  state_.phase_entered = ledger_.now();
  if (IsTerminal(phase)) {
    ledger_.Cancel(state_.id);
    return;
  }
  state_.deadline = ledger_.now() + config_.policy.timeout;
  ledger_.Schedule(state_.id, state_.deadline);
}

void EscrowContract::Record(std::string actor, std::string action, const Rational& pot_before) {
  log_.push_back({ledger_.now(), state_.phase, std::move(actor), std::move(action),
                  state_.pot.total() - pot_before});
}

void EscrowContract::Deposit(Player who, Rational PotBreakdown::*slot, const Rational& amount) {
  ledger_.EscrowDeposit(state_.id, PartyOf(who), amount, MoveKind::kContractMove);
  state_.pot.*slot += amount;
}

MoveOutcome EscrowContract::Fund(const PartyId& actor) {
  Require(actor, Player::kBuyer, {Phase::kProposed}, "fund");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  const Rational before = state_.pot.total();
  const Rational& x = config_.params.price;
  ledger_.EscrowDeposit(state_.id, actor, x + config_.policy.deposit, MoveKind::kContractMove);
  state_.pot.payment += x;
  state_.pot.buyer_deposit += config_.policy.deposit;
  NoteLatency(Player::kBuyer, ledger_.now() - state_.phase_entered);
  Enter(Phase::kFunded);
  Record("buyer", "fund", before);
  return {};
}

MoveOutcome EscrowContract::NotifyDelivery(const PartyId& actor) {
  Require(actor, Player::kSeller, {Phase::kFunded}, "notify");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  const Rational before = state_.pot.total();
  ledger_.ChargeMove(actor, MoveKind::kContractMove);
  NoteLatency(Player::kSeller, ledger_.now() - state_.phase_entered);
  state_.delivery_notified = true;
  Enter(Phase::kDeliveredNotified);
  Record("seller", "notify", before);
  return {};
}

MoveOutcome EscrowContract::Accept(const PartyId& actor) {
  Require(actor, Player::kBuyer, {Phase::kFunded, Phase::kDeliveredNotified}, "accept");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  NoteLatency(Player::kBuyer, ledger_.now() - state_.phase_entered);
  DoAccept("buyer");
  return {};
}

MoveOutcome EscrowContract::Dispute(const PartyId& actor) {
  Require(actor, Player::kBuyer, {Phase::kFunded, Phase::kDeliveredNotified}, "dispute");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  const Rational before = state_.pot.total();
  Deposit(Player::kBuyer, &PotBreakdown::buyer_wager, config_.lambda());
  NoteLatency(Player::kBuyer, ledger_.now() - state_.phase_entered);
  Enter(Phase::kDisputed);
  Record("buyer", "dispute", before);
  return {};
}

MoveOutcome EscrowContract::Counter(const PartyId& actor) {
  Require(actor, Player::kSeller, {Phase::kDisputed}, "counter");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  const Rational before = state_.pot.total();
  Deposit(Player::kSeller, &PotBreakdown::seller_wager, config_.lambda());
  NoteLatency(Player::kSeller, ledger_.now() - state_.phase_entered);
  Enter(Phase::kCountered);
  Record("seller", "counter", before);
  return {};
}

MoveOutcome EscrowContract::Forfeit(const PartyId& actor) {
  Require(actor, Player::kSeller, {Phase::kDisputed}, "forfeit");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  NoteLatency(Player::kSeller, ledger_.now() - state_.phase_entered);
  DoForfeit("seller");
  return {};
}

MoveOutcome EscrowContract::BeginArbitration(const PartyId& actor) {
  const Player role = RoleOf(actor);
  Require(actor, role, {Phase::kCountered}, "arbitrate");
  if (Late()) {
    OnTimeout();
    return {false};
  }
  const Rational before = state_.pot.total();
  Enter(Phase::kArbitrating);
  Record(std::string(PlayerName(role)), "arbitrate", before);
  return {};
}

void EscrowContract::DoAccept(const std::string& actor) {
  const Rational before = state_.pot.total();
  std::map<Player, Rational> pay{{Player::kSeller, state_.pot.payment}};
  state_.pot.payment = 0;
  Finish(Outcome::kAccepted, std::nullopt, pay, 0);
  Record(actor, "accept", before);
}

void EscrowContract::DoForfeit(const std::string& actor) {
  const Rational before = state_.pot.total();
  std::map<Player, Rational> pay{{Player::kBuyer, state_.pot.payment + state_.pot.buyer_wager}};
  state_.pot.payment = 0;
  state_.pot.buyer_wager = 0;
  Finish(Outcome::kForfeited, std::nullopt, pay, 0);
  Record(actor, "forfeit", before);
}

void EscrowContract::SettleArbitration(const Verdict& verdict) {
  if (state_.phase != Phase::kArbitrating) {
    throw ContractError("no arbitration pending in phase " + std::string(PhaseName(state_.phase)));
  }
  const Rational before = state_.pot.total();
  PotBreakdown& pot = state_.pot;
  const Rational& winner_wager =
      verdict.winner == Player::kBuyer ? pot.buyer_wager : pot.seller_wager;
  const Rational& loser_wager =
      verdict.winner == Player::kBuyer ? pot.seller_wager : pot.buyer_wager;

  Rational to_winner;
  Rational to_arbiter;
  if (std::holds_alternative<StandardWager>(config_.scheme)) {
    to_winner = pot.payment + winner_wager;
    to_arbiter = loser_wager;
  } else if (std::holds_alternative<WinnerRebateWager>(config_.scheme)) {
    to_winner = pot.payment + winner_wager + loser_wager - config_.rebate_arbiter_fee;
    to_arbiter = config_.rebate_arbiter_fee;
  } else {
    to_winner = pot.payment;
    to_arbiter = winner_wager + loser_wager;
  }
  pot.payment = pot.buyer_wager = pot.seller_wager = 0;
  Finish(Outcome::kArbitrated, verdict, {{verdict.winner, to_winner}}, to_arbiter);
  Record("arbiter", "verdict-" + std::string(PlayerName(verdict.winner)), before);
}

void EscrowContract::OnTimeout() {
  const Tick waited = ledger_.now() - state_.phase_entered;
  switch (state_.phase) {
    case Phase::kProposed: {
      const Rational before = state_.pot.total();
      Finish(Outcome::kAborted, std::nullopt, {}, 0);
      Record("contract", "abort", before);
      return;
    }
    case Phase::kFunded:
    case Phase::kDeliveredNotified:
      NoteLatency(Player::kBuyer, waited);
      DoAccept("contract");
      return;
    case Phase::kDisputed:
      NoteLatency(Player::kSeller, waited);
      DoForfeit("contract");
      return;
    case Phase::kCountered: {
      const Rational before = state_.pot.total();
      Enter(Phase::kArbitrating);
      Record("contract", "arbitrate", before);
      return;
    }
    case Phase::kArbitrating:
      // No verdict in time: the coin-toss default b = 0 rules for the buyer.
      SettleArbitration(
          Verdict{Player::kBuyer, VerdictBasis::kForfeitByTimeout, {"TIMEOUT seller"}});
      return;
    case Phase::kSettled:
    case Phase::kAborted:
      return;
  }
}

void EscrowContract::Finish(Outcome outcome, std::optional<Verdict> verdict,
                            std::map<Player, Rational> pay, const Rational& to_arbiter) {
  // Liveness deposits come back scaled by the slowest decision; the rest is burned.
  Rational burned = 0;
  auto settle_deposit = [&](Player who, Rational& slot, Tick latency) {
    const Rational back = DepositPayback(latency, config_.policy) * (slot / config_.policy.deposit);
    pay[who] += back;
    burned += slot - back;
    slot = 0;
  };
  if (config_.policy.deposit > 0) {
    settle_deposit(Player::kSeller, state_.pot.seller_deposit, state_.seller_latency);
    settle_deposit(Player::kBuyer, state_.pot.buyer_deposit, state_.buyer_latency);
  } else {
    state_.pot.seller_deposit = state_.pot.buyer_deposit = 0;
  }

  for (const auto& [who, amount] : pay) {
    if (amount > 0) ledger_.EscrowRelease(state_.id, PartyOf(who), amount);
  }
  if (to_arbiter > 0) ledger_.EscrowToSink(state_.id, Sink::kArbiter, to_arbiter);
  if (burned > 0) ledger_.EscrowToSink(state_.id, Sink::kFee, burned);
  if (state_.pot.total() != 0 || ledger_.pot(state_.id) != 0) {
    throw std::logic_error("contract " + std::to_string(state_.id) + " settled with funds left");
  }
  state_.settlement = Settlement{outcome, state_.delivery_notified, std::move(verdict)};
  Enter(outcome == Outcome::kAborted ? Phase::kAborted : Phase::kSettled);
}

std::string EscrowContract::LogText() const {
  std::string out;
  for (const Event& e : log_) out += FormatEvent(e) + '\n';
  return out;
}

EscrowContract& ContractHost::Propose(ContractConfig config) {
  const ContractId id = next_id_;
  auto contract = std::make_unique<EscrowContract>(ledger_, id, std::move(config));
  ++next_id_;
  return *contracts_.emplace(id, std::move(contract)).first->second;
}

EscrowContract& ContractHost::contract(ContractId id) {
  auto it = contracts_.find(id);
  if (it == contracts_.end()) throw ContractError("unknown contract " + std::to_string(id));
  return *it->second;
}

void ContractHost::AdvanceTime(Tick ticks) {
  ledger_.AdvanceTime(ticks, [this](ContractId id) {
    auto it = contracts_.find(id);
    if (it != contracts_.end()) it->second->OnTimeout();
  });
}

Verdict ContractHost::Arbitrate(ContractId id, Arbiter& arbiter, const DisputeCase& dispute,
                                Rng& rng) {
  EscrowContract& c = contract(id);
  if (c.state().phase != Phase::kArbitrating) {
    throw ContractError("contract " + std::to_string(id) + " is not arbitrating");
  }
  Verdict verdict = arbiter.Decide(dispute, rng);
  c.SettleArbitration(verdict);
  return verdict;
}

}  // namespace escrow
