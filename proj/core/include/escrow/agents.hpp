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

// Scripted agents and a simulation harness that plays full contracts on a
// fresh ledger per trial.

#ifndef ESCROW_AGENTS_HPP_
#define ESCROW_AGENTS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "escrow/contract.hpp"
#include "escrow/equilibrium.hpp"
#include "escrow/game_model.hpp"

namespace escrow {

// A seller's pure strategy: one action per seller node of the game tree.
struct SellerStrategy {
  bool send = true;
  bool counter_if_sent = true;
  bool counter_if_not_sent = false;
  // An unresponsive seller never makes a free move itself and lets the
  // deadline apply the default instead.
  bool responsive = true;

  static SellerStrategy Honest() { return {}; }
  // "send,counter,forfeit" style: root, send-dispute and not-send-dispute
  // actions. "honest" is accepted as an alias.
  static SellerStrategy Parse(std::string_view text);
  std::string Name() const;
  bool operator==(const SellerStrategy&) const = default;
};

struct BuyerStrategy {
  bool dispute_if_received = false;
  bool dispute_if_not_received = true;
  bool responsive = true;

  static BuyerStrategy Honest() { return {}; }
  // "accept,dispute" style: after-send and after-not-send actions.
  static BuyerStrategy Parse(std::string_view text);
  std::string Name() const;
  bool operator==(const BuyerStrategy&) const = default;
};

// All eight (respectively four) responsive pure strategies, honest first.
std::vector<SellerStrategy> AllSellerStrategies();
std::vector<BuyerStrategy> AllBuyerStrategies();

struct StrategyPair {
  SellerStrategy seller;
  BuyerStrategy buyer;
};

// Leaf of the game tree the pair reaches.
Leaf LeafFor(const StrategyPair& pair);

enum class ArbiterKind { kOracle, kCoinToss };
// How the buyer's value y of a delivered item is counted.
enum class Valuation {
  kRetained,  // only while the buyer keeps the item: accepted, forfeited or won
  kLedger,  // whenever the item was delivered
};

struct SimOptions {
  ArbiterKind arbiter = ArbiterKind::kOracle;
  Valuation valuation = Valuation::kRetained;
  Tick threshold = 10;
  Tick timeout = 20;
  Rational liveness_deposit = 0;
  Rational rebate_arbiter_fee = 0;
  // Trials are split across this many threads; results do not depend on it.
  unsigned workers = 1;
};

struct TrialResult {
  PayoffPair payoff;
  Leaf leaf = Leaf::kSendAccept;
  bool arbitrated = false;
  std::optional<Player> arbitration_winner;
  Rational fees;
};

struct SimStats {
  std::uint64_t trials = 0;
  PayoffPair mean;        // exact
  double buyer_stddev = 0;
  double seller_stddev = 0;
  double dispute_rate = 0;
  double arbitration_rate = 0;
  double seller_win_rate = 0;  // among arbitrated trials; 0 when none
  Rational fees_total;
  std::array<std::uint64_t, 6> leaf_counts{};

  bool operator==(const SimStats&) const = default;
  std::string ToString() const;
};

// Plays a single trial on its own ledger with the given rng stream.
TrialResult PlayTrial(const TradeParams& params, const WagerScheme& scheme,
                      const StrategyPair& pair, Rng& rng, const SimOptions& options = {});

// Deterministic for a fixed seed: trial k always uses Rng::ForStream(seed, k).
SimStats Simulate(const TradeParams& params, const WagerScheme& scheme, const StrategyPair& pair,
                  std::uint64_t trials, std::uint64_t seed, const SimOptions& options = {});

// Expected per-trial payoff under the oracle arbiter and retained valuation:
// the leaf payoff with fees, less the proposal and funding fees paid before
// the game starts.
PayoffPair AnalyticPayoff(const TradeParams& params, const WagerScheme& scheme,
                          const StrategyPair& pair);

struct SweepGrid {
  TradeParams base;  // gamma and tau are overwritten per point
  std::vector<Rational> gammas;
  std::vector<Rational> lambdas;  // empty: lambda = x
  std::vector<Rational> taus = {Rational(0)};
  std::vector<Rational> epsilons;  // optional: adds eps,sound columns
  std::vector<std::string> schemes = {"standard"};
};

struct SweepRow {
  Rational gamma;
  Rational lambda;
  Rational tau;
  std::string scheme;
  SecurityReport report;
  std::optional<Rational> epsilon;
  std::optional<bool> sound;
};

// Rows in scheme, gamma, lambda, tau, eps order. Points with an ill-posed
// trade are skipped.
std::vector<SweepRow> Sweep(const SweepGrid& grid);
std::string SweepCsv(const std::vector<SweepRow>& rows);

}  // namespace escrow

#endif  // ESCROW_AGENTS_HPP_
