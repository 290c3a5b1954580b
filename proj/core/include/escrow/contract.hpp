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

// Two-party escrow contract running on a Ledger.
//
//   Proposed --fund--> Funded --notify--> DeliveredNotified --accept--> Settled
//      |                 |  `--accept----------------------------------> Settled
//      |                 `--dispute--> Disputed <--dispute--'
//      `--timeout--> Aborted           |  `--forfeit--> Settled
//                                      `--counter--> Countered --> Arbitrating --verdict--> Settled
//
// Pot contents: Funded holds x, Disputed adds the buyer's wager, Countered
// adds the seller's. Each party also escrows a liveness deposit D on entry,
// paid back at settlement as DepositPayback(worst decision latency).
//
// Deadlines are policy.timeout ticks after each phase is entered. When one
// passes, the silent party's default applies at no fee: the buyer accepts,
// the seller forfeits a dispute, an unfunded proposal is aborted and an
// arbitration with no verdict goes to the buyer.

#ifndef ESCROW_CONTRACT_HPP_
#define ESCROW_CONTRACT_HPP_

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "escrow/arbiter.hpp"
#include "escrow/game_model.hpp"
#include "escrow/simchain.hpp"

namespace escrow {

enum class Phase {
  kProposed,
  kFunded,
  kDeliveredNotified,
  kDisputed,
  kCountered,
  kArbitrating,
  kSettled,
  kAborted,
};
inline constexpr std::array<Phase, 8> kAllPhases = {
    Phase::kProposed,  Phase::kFunded,      Phase::kDeliveredNotified, Phase::kDisputed,
    Phase::kCountered, Phase::kArbitrating, Phase::kSettled,           Phase::kAborted};
std::string_view PhaseName(Phase phase);
bool IsTerminal(Phase phase);

// Wrong actor, wrong phase, or a configuration the contract cannot run.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PotBreakdown {
  Rational payment;
  Rational buyer_wager;
  Rational seller_wager;
  Rational buyer_deposit;
  Rational seller_deposit;

  Rational total() const {
    return payment + buyer_wager + seller_wager + buyer_deposit + seller_deposit;
  }
  bool operator==(const PotBreakdown&) const = default;
};

struct ContractConfig {
  TradeParams params;
  WagerScheme scheme = StandardWager{1};  // Generic schemes are rejected
  PartyId seller = "seller";
  PartyId buyer = "buyer";
  // threshold and timeout are used as given; deposit is replaced by
  // liveness_deposit, which defaults to lambda.
  TimeoutPolicy policy;
  std::optional<Rational> liveness_deposit;
  // Under WinnerRebate, the part of the loser's wager kept for the arbiter.
  Rational rebate_arbiter_fee = 0;

  Rational lambda() const;
  Rational deposit() const;
  void Validate() const;
};

enum class Outcome { kAccepted, kForfeited, kArbitrated, kAborted };
std::string_view OutcomeName(Outcome outcome);

struct Settlement {
  Outcome outcome = Outcome::kAccepted;
  bool delivery_notified = false;
  std::optional<Verdict> verdict;
};

struct ContractState {
  ContractId id = 0;
  Phase phase = Phase::kProposed;
  PotBreakdown pot;
  Tick phase_entered = 0;
  Tick deadline = 0;
  bool delivery_notified = false;
  // Slowest decision so far, in ticks after the decision fell due.
  Tick seller_latency = 0;
  Tick buyer_latency = 0;
  std::optional<Settlement> settlement;
};

struct Event {
  Tick time = 0;
  Phase phase = Phase::kProposed;  // phase after the transition
  std::string actor;               // seller, buyer, contract or arbiter
  std::string action;
  Rational pot_delta;
};
// `time phase actor action pot_delta`, e.g. "3 disputed buyer dispute +1".
std::string FormatEvent(const Event& event);

struct MoveOutcome {
  // False when the deadline had already passed and the default was applied
  // instead of the requested move.
  bool applied = true;
};

class EscrowContract {
 public:
  // Runs the seller's proposal: charges the fee and escrows the seller's
  // liveness deposit. Throws ContractError for Generic schemes or an invalid
  // config, InsufficientFunds if the seller cannot pay.
  EscrowContract(Ledger& ledger, ContractId id, ContractConfig config);

  MoveOutcome Fund(const PartyId& actor);
  MoveOutcome NotifyDelivery(const PartyId& actor);
  MoveOutcome Accept(const PartyId& actor);
  MoveOutcome Dispute(const PartyId& actor);
  MoveOutcome Counter(const PartyId& actor);
  MoveOutcome Forfeit(const PartyId& actor);
  // Either party may hand a countered dispute to the arbiter; free.
  MoveOutcome BeginArbitration(const PartyId& actor);
  void SettleArbitration(const Verdict& verdict);
  // Applies the default for the current phase. Called by the host when the
  // deadline fires; a no-op in terminal phases.
  void OnTimeout();

  const ContractState& state() const { return state_; }
  const ContractConfig& config() const { return config_; }
  ContractId id() const { return state_.id; }
  const std::vector<Event>& log() const { return log_; }
  std::string LogText() const;

 private:
  Player RoleOf(const PartyId& actor) const;
  void Require(const PartyId& actor, Player role, std::initializer_list<Phase> phases,
               std::string_view move) const;
  bool Late() const;
  void NoteLatency(Player who, Tick latency);
  void Enter(Phase phase);
  void Record(std::string actor, std::string action, const Rational& pot_before);
  void Deposit(Player who, Rational PotBreakdown::*slot, const Rational& amount);
  // Pays out, settles liveness deposits and enters the terminal phase.
  void Finish(Outcome outcome, std::optional<Verdict> verdict, std::map<Player, Rational> pay,
              const Rational& to_arbiter);
  const PartyId& PartyOf(Player who) const;

  void DoAccept(const std::string& actor);
  void DoForfeit(const std::string& actor);

  Ledger& ledger_;
  ContractConfig config_;
  ContractState state_;
  std::vector<Event> log_;
};

// Owns a ledger and its contracts; advancing time dispatches deadlines.
class ContractHost {
 public:
  explicit ContractHost(Rational fee = 0) : ledger_(std::move(fee)) {}

  Ledger& ledger() { return ledger_; }
  const Ledger& ledger() const { return ledger_; }

  // Creates the contract and runs the seller's proposal.
  EscrowContract& Propose(ContractConfig config);
  EscrowContract& contract(ContractId id);
  std::size_t size() const { return contracts_.size(); }

  void AdvanceTime(Tick ticks);
  // Runs `arbiter` on a contract in the Arbitrating phase and settles it.
  Verdict Arbitrate(ContractId id, Arbiter& arbiter, const DisputeCase& dispute, Rng& rng);

 private:
  Ledger ledger_;
  std::map<ContractId, std::unique_ptr<EscrowContract>> contracts_;
  ContractId next_id_ = 1;
};

}  // namespace escrow

#endif  // ESCROW_CONTRACT_HPP_
