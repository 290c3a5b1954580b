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

// Economic parameters, wager schemes and the extensive-form game of the
// escrow contract after both parties have accepted the trade.
//
// The tree has five decision nodes and six leaves:
//
//   root (seller) --send-------> after_send (buyer) --accept--> [send, accept]
//                 |                                  `-dispute-> send_dispute (seller)
//                 |                                                 |--counter--> [send, dispute, counter]
//                 |                                                 `--forfeit--> [send, dispute, forfeit]
//                 `--not-send--> after_not_send (buyer) --accept--> [not-send, accept]
//                                                     `-dispute-> not_send_dispute (seller)
//                                                                   |--forfeit--> [not-send, dispute, forfeit]
//                                                                   `--counter--> [not-send, dispute, counter]
//
// Payoffs are expected changes in funds (buyer first). The arbiter's error
// rate is folded into the arbitration leaves, so the tree has no chance nodes.

#ifndef ESCROW_GAME_MODEL_HPP_
#define ESCROW_GAME_MODEL_HPP_

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "escrow/rational.hpp"

namespace escrow {

// Raised when a trade violates buyer_value > price > seller_value or the
// probability/fee ranges.
class IllPosedTrade : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TradeParams {
  Rational price;          // x: what the buyer pays
  Rational seller_value;   // x': what the item is worth to the seller
  Rational buyer_value;    // y: what the item is worth to the buyer
  Rational arbiter_error;  // gamma: probability the arbiter rules against the honest party
  Rational fee;            // tau: cost of one non-default move

  void Validate() const;
};

struct StandardWager {
  Rational lambda;
};
// The winner also collects the loser's wager.
struct WinnerRebateWager {
  Rational lambda;
};
// No wager is returned, not even to the winner.
struct WithheldWager {
  Rational lambda;
};
// Arbitrary stakes: the winner's net change is +winner_gain and the loser's
// is -loser_loss, both relative to the position just before the dispute.
struct GenericWager {
  Rational winner_gain;  // omega
  Rational loser_loss;   // ell
};

using WagerScheme =
    std::variant<StandardWager, WinnerRebateWager, WithheldWager, GenericWager>;

void ValidateScheme(const WagerScheme& scheme);
std::string_view SchemeName(const WagerScheme& scheme);
// The wager constant for the three named schemes; nullopt for GenericWager.
std::optional<Rational> SchemeLambda(const WagerScheme& scheme);
// Same scheme kind with a different wager constant. Throws for GenericWager.
WagerScheme WithLambda(const WagerScheme& scheme, const Rational& lambda);

struct ArbitrationStakes {
  Rational winner_gain;
  Rational loser_loss;
};
ArbitrationStakes StakesFor(const TradeParams& params, const WagerScheme& scheme);

enum class Player { kSeller, kBuyer };
enum class Action { kSend, kNotSend, kAccept, kDispute, kCounter, kForfeit };

std::string_view PlayerName(Player player);
std::string_view ActionName(Action action);
// Not sending, accepting and forfeiting are what a silent party ends up with
// once its deadline passes; they carry no fee.
bool IsDefaultAction(Action action);

struct PayoffPair {
  Rational buyer;
  Rational seller;

  const Rational& of(Player p) const { return p == Player::kBuyer ? buyer : seller; }
  bool operator==(const PayoffPair&) const = default;
};

enum class Leaf {
  kSendAccept,
  kSendDisputeForfeit,
  kSendDisputeCounter,
  kNotSendAccept,
  kNotSendDisputeForfeit,
  kNotSendDisputeCounter,
};
inline constexpr std::array<Leaf, 6> kAllLeaves = {
    Leaf::kSendAccept,    Leaf::kSendDisputeForfeit,    Leaf::kSendDisputeCounter,
    Leaf::kNotSendAccept, Leaf::kNotSendDisputeForfeit, Leaf::kNotSendDisputeCounter};

// "send, accept", "not-send, dispute, counter", ...
std::string LeafName(Leaf leaf);
std::optional<Leaf> LeafFromName(std::string_view name);
// Actions along the path from the root; movers alternate seller, buyer, seller.
std::span<const Action> LeafPath(Leaf leaf);
Player MoverAtDepth(std::size_t depth);
// Fee-bearing moves `player` makes on the way to `leaf`.
int NonDefaultMoves(Leaf leaf, Player player);

PayoffPair LeafPayoff(Leaf leaf, const TradeParams& params, const WagerScheme& scheme,
                      bool fees_enabled);
// Throws std::invalid_argument for an unknown leaf id.
PayoffPair LeafPayoff(std::string_view leaf_id, const TradeParams& params,
                      const WagerScheme& scheme, bool fees_enabled);

// Fixed decision-node ids of the contract game.
namespace node {
inline constexpr int kRoot = 0;
inline constexpr int kAfterSend = 1;
inline constexpr int kSendDispute = 2;
inline constexpr int kAfterNotSend = 3;
inline constexpr int kNotSendDispute = 4;
inline constexpr int kDecisionCount = 5;
}  // namespace node

class GameTree {
 public:
  struct Edge {
    Action action;
    int child;
  };
  struct Node {
    std::optional<Player> owner;  // nullopt for leaves
    std::vector<Edge> edges;      // edges[0] is the honest action
    std::optional<Leaf> leaf;
    PayoffPair payoff;            // meaningful for leaves only

    bool is_leaf() const { return !owner.has_value(); }
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& at(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  int root() const { return 0; }
  // Decision nodes in id order.
  std::vector<int> decision_nodes() const;
  std::string Describe() const;

 private:
  friend GameTree BuildGameTree(const TradeParams&, const WagerScheme&, bool);
  std::vector<Node> nodes_;
};

// Throws IllPosedTrade for invalid parameters and std::invalid_argument for an
// invalid wager scheme.
GameTree BuildGameTree(const TradeParams& params, const WagerScheme& scheme,
                       bool fees_enabled);

}  // namespace escrow

#endif  // ESCROW_GAME_MODEL_HPP_
