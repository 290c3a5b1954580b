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

#include "escrow/game_model.hpp"

#include <sstream>

namespace escrow {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::array<Action, 2> kPathSendAccept = {Action::kSend, Action::kAccept};
constexpr std::array<Action, 3> kPathSendDisputeForfeit = {Action::kSend, Action::kDispute,
                                                           Action::kForfeit};
constexpr std::array<Action, 3> kPathSendDisputeCounter = {Action::kSend, Action::kDispute,
                                                           Action::kCounter};
constexpr std::array<Action, 2> kPathNotSendAccept = {Action::kNotSend, Action::kAccept};
constexpr std::array<Action, 3> kPathNotSendDisputeForfeit = {
    Action::kNotSend, Action::kDispute, Action::kForfeit};
constexpr std::array<Action, 3> kPathNotSendDisputeCounter = {
    Action::kNotSend, Action::kDispute, Action::kCounter};

// Leaf payoffs for the standard wager, fee-free.
PayoffPair StandardLeaf(Leaf leaf, const TradeParams& p, const Rational& lambda) {
  const Rational& x = p.price;
  const Rational& xs = p.seller_value;
  const Rational& y = p.buyer_value;
  const Rational& g = p.arbiter_error;
  switch (leaf) {
    case Leaf::kSendAccept:
      return {y - x, x - xs};
    case Leaf::kSendDisputeForfeit:
      return {y, -xs};
    case Leaf::kSendDisputeCounter:
      return {y * g - (x + lambda) * (1 - g), x * (1 - g) - lambda * g - xs};
    case Leaf::kNotSendAccept:
      return {-x, x};
    case Leaf::kNotSendDisputeForfeit:
      return {0, 0};
    case Leaf::kNotSendDisputeCounter:
      return {-(x + lambda) * g, x * g - lambda * (1 - g)};
  }
  throw std::logic_error("unreachable leaf");
}

// Payoffs from the winner/loser stakes. The buyer's valuation of a delivered
// item counts only on the branch where the buyer wins the arbitration, the
// same accounting the standard leaves use.
PayoffPair StakesLeaf(Leaf leaf, const TradeParams& p, const ArbitrationStakes& s) {
  const Rational& x = p.price;
  const Rational& xs = p.seller_value;
  const Rational& y = p.buyer_value;
  const Rational& g = p.arbiter_error;
  switch (leaf) {
    case Leaf::kSendDisputeCounter:
      // Seller is honest here and wins with probability 1 - gamma.
      return {g * (y - x + s.winner_gain) - (1 - g) * (x + s.loser_loss),
              (1 - g) * s.winner_gain - g * s.loser_loss - xs};
    case Leaf::kNotSendDisputeCounter:
      return {(1 - g) * (s.winner_gain - x) - g * (x + s.loser_loss),
              g * s.winner_gain - (1 - g) * s.loser_loss};
    default:
      return StandardLeaf(leaf, p, 0);
  }
}

}  // namespace

void TradeParams::Validate() const {
  if (seller_value < 0) throw IllPosedTrade("seller value must be non-negative");
  if (!(buyer_value > price && price > seller_value)) {
    throw IllPosedTrade("trade is ill-posed: need buyer_value > price > seller_value, got y=" +
                        ToString(buyer_value) + " x=" + ToString(price) +
                        " x'=" + ToString(seller_value));
  }
  if (arbiter_error < 0 || arbiter_error > 1) {
    throw IllPosedTrade("arbiter error rate must lie in [0, 1], got " + ToString(arbiter_error));
  }
  if (fee < 0) throw IllPosedTrade("fee must be non-negative, got " + ToString(fee));
}

void ValidateScheme(const WagerScheme& scheme) {
  std::visit(Overloaded{
                 [](const GenericWager& w) {
                   if (!(w.winner_gain > -w.loser_loss)) {
                     throw std::invalid_argument(
                         "generic wager must make winning preferable to losing");
                   }
                 },
                 [](const auto& w) {
                   if (!(w.lambda > 0)) {
                     throw std::invalid_argument("wager constant must be positive, got " +
                                                 ToString(w.lambda));
                   }
                 },
             },
             scheme);
}

std::string_view SchemeName(const WagerScheme& scheme) {
  return std::visit(Overloaded{
                        [](const StandardWager&) { return std::string_view("standard"); },
                        [](const WinnerRebateWager&) { return std::string_view("winner_rebate"); },
                        [](const WithheldWager&) { return std::string_view("withheld"); },
                        [](const GenericWager&) { return std::string_view("generic"); },
                    },
                    scheme);
}

std::optional<Rational> SchemeLambda(const WagerScheme& scheme) {
  return std::visit(Overloaded{
                        [](const GenericWager&) -> std::optional<Rational> { return std::nullopt; },
                        [](const auto& w) -> std::optional<Rational> { return w.lambda; },
                    },
                    scheme);
}

WagerScheme WithLambda(const WagerScheme& scheme, const Rational& lambda) {
  return std::visit(Overloaded{
                        [](const GenericWager&) -> WagerScheme {
                          throw std::invalid_argument("generic wager has no wager constant");
                        },
                        [&](auto w) -> WagerScheme {
                          w.lambda = lambda;
                          return w;
                        },
                    },
                    scheme);
}

ArbitrationStakes StakesFor(const TradeParams& params, const WagerScheme& scheme) {
  const Rational& x = params.price;
  return std::visit(Overloaded{
                        [&](const StandardWager& w) { return ArbitrationStakes{x, w.lambda}; },
                        [&](const WinnerRebateWager& w) {
                          return ArbitrationStakes{x + w.lambda, w.lambda};
                        },
                        [&](const WithheldWager& w) {
                          return ArbitrationStakes{x - w.lambda, w.lambda};
                        },
                        [](const GenericWager& w) {
                          return ArbitrationStakes{w.winner_gain, w.loser_loss};
                        },
                    },
                    scheme);
}

std::string_view PlayerName(Player player) {
  return player == Player::kBuyer ? "buyer" : "seller";
}

std::string_view ActionName(Action action) {
  switch (action) {
    case Action::kSend: return "send";
    case Action::kNotSend: return "not-send";
    case Action::kAccept: return "accept";
    case Action::kDispute: return "dispute";
    case Action::kCounter: return "counter";
    case Action::kForfeit: return "forfeit";
  }
  return "?";
}

bool IsDefaultAction(Action action) {
  return action == Action::kNotSend || action == Action::kAccept || action == Action::kForfeit;
}

std::span<const Action> LeafPath(Leaf leaf) {
  switch (leaf) {
    case Leaf::kSendAccept: return kPathSendAccept;
    case Leaf::kSendDisputeForfeit: return kPathSendDisputeForfeit;
    case Leaf::kSendDisputeCounter: return kPathSendDisputeCounter;
    case Leaf::kNotSendAccept: return kPathNotSendAccept;
    case Leaf::kNotSendDisputeForfeit: return kPathNotSendDisputeForfeit;
    case Leaf::kNotSendDisputeCounter: return kPathNotSendDisputeCounter;
  }
  return {};
}

Player MoverAtDepth(std::size_t depth) {
  return depth % 2 == 0 ? Player::kSeller : Player::kBuyer;
}

std::string LeafName(Leaf leaf) {
  std::string out;
  for (Action a : LeafPath(leaf)) {
    if (!out.empty()) out += ", ";
    out += ActionName(a);
  }
  return out;
}

std::optional<Leaf> LeafFromName(std::string_view name) {
  for (Leaf leaf : kAllLeaves) {
    if (LeafName(leaf) == name) return leaf;
  }
  return std::nullopt;
}

int NonDefaultMoves(Leaf leaf, Player player) {
  int count = 0;
  auto path = LeafPath(leaf);
  for (std::size_t depth = 0; depth < path.size(); ++depth) {
    if (MoverAtDepth(depth) == player && !IsDefaultAction(path[depth])) ++count;
  }
  return count;
}

PayoffPair LeafPayoff(Leaf leaf, const TradeParams& params, const WagerScheme& scheme,
                      bool fees_enabled) {
  PayoffPair out = std::holds_alternative<StandardWager>(scheme)
                       ? StandardLeaf(leaf, params, std::get<StandardWager>(scheme).lambda)
                       : StakesLeaf(leaf, params, StakesFor(params, scheme));
  if (fees_enabled) {
    out.buyer -= params.fee * NonDefaultMoves(leaf, Player::kBuyer);
    out.seller -= params.fee * NonDefaultMoves(leaf, Player::kSeller);
  }
  return out;
}

PayoffPair LeafPayoff(std::string_view leaf_id, const TradeParams& params,
                      const WagerScheme& scheme, bool fees_enabled) {
  auto leaf = LeafFromName(leaf_id);
  if (!leaf) throw std::invalid_argument("unknown leaf id: '" + std::string(leaf_id) + "'");
  return LeafPayoff(*leaf, params, scheme, fees_enabled);
}

std::vector<int> GameTree::decision_nodes() const {
  std::vector<int> ids;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_leaf()) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

std::string GameTree::Describe() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    out << i << ' ';
    if (n.is_leaf()) {
      out << "leaf [" << LeafName(*n.leaf) << "] buyer=" << ToString(n.payoff.buyer)
          << " seller=" << ToString(n.payoff.seller);
    } else {
      out << PlayerName(*n.owner);
      for (const Edge& e : n.edges) out << ' ' << ActionName(e.action) << "->" << e.child;
    }
    out << '\n';
  }
  return out.str();
}

GameTree BuildGameTree(const TradeParams& params, const WagerScheme& scheme,
                       bool fees_enabled) {
  params.Validate();
  ValidateScheme(scheme);

  GameTree tree;
  auto& nodes = tree.nodes_;
  nodes.resize(node::kDecisionCount + kAllLeaves.size());
  auto leaf_id = [](Leaf leaf) { return node::kDecisionCount + static_cast<int>(leaf); };

  nodes[node::kRoot] = {Player::kSeller,
                        {{Action::kSend, node::kAfterSend},
                         {Action::kNotSend, node::kAfterNotSend}},
                        std::nullopt,
                        {}};
  nodes[node::kAfterSend] = {Player::kBuyer,
                             {{Action::kAccept, leaf_id(Leaf::kSendAccept)},
                              {Action::kDispute, node::kSendDispute}},
                             std::nullopt,
                             {}};
  nodes[node::kSendDispute] = {Player::kSeller,
                               {{Action::kCounter, leaf_id(Leaf::kSendDisputeCounter)},
                                {Action::kForfeit, leaf_id(Leaf::kSendDisputeForfeit)}},
                               std::nullopt,
                               {}};
  nodes[node::kAfterNotSend] = {Player::kBuyer,
                                {{Action::kDispute, node::kNotSendDispute},
                                 {Action::kAccept, leaf_id(Leaf::kNotSendAccept)}},
                                std::nullopt,
                                {}};
  nodes[node::kNotSendDispute] = {Player::kSeller,
                                  {{Action::kForfeit, leaf_id(Leaf::kNotSendDisputeForfeit)},
                                   {Action::kCounter, leaf_id(Leaf::kNotSendDisputeCounter)}},
                                  std::nullopt,
                                  {}};
  for (Leaf leaf : kAllLeaves) {
    nodes[static_cast<std::size_t>(leaf_id(leaf))] = {
        std::nullopt, {}, leaf, LeafPayoff(leaf, params, scheme, fees_enabled)};
  }
  return tree;
}

}  // namespace escrow
