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

#include "escrow/equilibrium.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace escrow {

// ---- Strategy profiles -------------------------------------------------------

StrategyProfile StrategyProfile::Honest(const GameTree& tree) {
  StrategyProfile p;
  p.edge.assign(tree.nodes().size(), -1);
  for (int id : tree.decision_nodes()) p.edge[static_cast<std::size_t>(id)] = 0;
  return p;
}

std::string StrategyProfile::ToString(const GameTree& tree) const {
  std::string out;
  for (int id : tree.decision_nodes()) {
    if (!out.empty()) out += ',';
    const int e = edge.at(static_cast<std::size_t>(id));
    out += ActionName(tree.at(id).edges.at(static_cast<std::size_t>(e)).action);
  }
  return out;
}

// ---- Backward induction ------------------------------------------------------

const NodeSolution& SolvedTree::at(int node_id) const {
  for (const NodeSolution& n : nodes) {
    if (n.node == node_id) return n;
  }
  throw std::out_of_range("not a decision node: " + std::to_string(node_id));
}

bool SolvedTree::unique() const {
  return std::all_of(nodes.begin(), nodes.end(),
                     [](const NodeSolution& n) { return n.margin > 0; });
}

bool SolvedTree::honest() const {
  return std::all_of(nodes.begin(), nodes.end(),
                     [](const NodeSolution& n) { return n.honest_margin >= 0; });
}

Rational SolvedTree::min_margin() const {
  Rational m = nodes.empty() ? Rational(0) : nodes.front().margin;
  for (const NodeSolution& n : nodes) m = std::min(m, n.margin);
  return m;
}

SolvedTree BackwardInduction(const GameTree& tree) {
  SolvedTree solved;
  solved.profile.edge.assign(tree.nodes().size(), -1);
  std::vector<std::optional<NodeSolution>> by_id(tree.nodes().size());

  std::function<PayoffPair(int)> solve = [&](int id) -> PayoffPair {
    const GameTree::Node& n = tree.at(id);
    if (n.is_leaf()) return n.payoff;

    std::vector<PayoffPair> values;
    values.reserve(n.edges.size());
    for (const auto& e : n.edges) values.push_back(solve(e.child));

    const Player owner = *n.owner;
    Rational best = values.front().of(owner);
    for (const auto& v : values) best = std::max(best, v.of(owner));

    NodeSolution s;
    s.node = id;
    s.owner = owner;
    int chosen = -1;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i].of(owner) == best) {
        s.optimal.push_back(n.edges[i].action);
        if (chosen < 0) chosen = static_cast<int>(i);
      }
    }
    s.chosen = n.edges[static_cast<std::size_t>(chosen)].action;
    s.value = values[static_cast<std::size_t>(chosen)];

    std::optional<Rational> best_other;
    std::optional<Rational> best_dishonest;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Rational& v = values[i].of(owner);
      if (static_cast<int>(i) != chosen) best_other = best_other ? std::max(*best_other, v) : v;
      if (i != 0) best_dishonest = best_dishonest ? std::max(*best_dishonest, v) : v;
    }
    s.margin = best_other ? Rational(best - *best_other) : Rational(0);
    s.honest_margin =
        best_dishonest ? Rational(values.front().of(owner) - *best_dishonest) : Rational(0);

    solved.profile.edge[static_cast<std::size_t>(id)] = chosen;
    PayoffPair out = s.value;
    by_id[static_cast<std::size_t>(id)] = std::move(s);
    return out;
  };

  solved.root_value = solve(tree.root());
  for (auto& s : by_id) {
    if (s) solved.nodes.push_back(std::move(*s));
  }
  return solved;
}

// ---- Closed-form incentive constraints ----------------------------------------

std::string_view ConstraintName(Constraint c) {
  switch (c) {
    case Constraint::kHonestSellerCounters: return "honest_seller_counters";
    case Constraint::kDishonestSellerForfeits: return "dishonest_seller_forfeits";
    case Constraint::kHonestBuyerAccepts: return "honest_buyer_accepts";
    case Constraint::kUndeliveredBuyerDisputes: return "undelivered_buyer_disputes";
    case Constraint::kSellerDelivers: return "seller_delivers";
  }
  return "?";
}

namespace {

// Honest-minus-dishonest utility at each node, assuming honest play below it.
std::vector<ConstraintSlack> HonestMargins(const TradeParams& p, const WagerScheme& scheme) {
  p.Validate();
  ValidateScheme(scheme);
  const auto [win, lose] = StakesFor(p, scheme);
  const Rational& x = p.price;
  const Rational& xs = p.seller_value;
  const Rational& y = p.buyer_value;
  const Rational& g = p.arbiter_error;
  const Rational& tau = p.fee;
  return {
      {Constraint::kHonestSellerCounters, win * (1 - g) - lose * g - tau},
      {Constraint::kDishonestSellerForfeits, lose * (1 - g) - win * g + tau},
      {Constraint::kHonestBuyerAccepts, (y - x) - (g * (y - x + win) - (1 - g) * (x + lose) - tau)},
      {Constraint::kUndeliveredBuyerDisputes, x - tau},
      {Constraint::kSellerDelivers, x - xs - tau},
  };
}

bool IsSoundnessConstraint(Constraint c) {
  return c == Constraint::kHonestSellerCounters || c == Constraint::kDishonestSellerForfeits ||
         c == Constraint::kHonestBuyerAccepts;
}

bool PreconditionHolds(const TradeParams& p, const Rational& eps) {
  return p.buyer_value - eps >= p.price && p.price >= eps;
}

}  // namespace

CompletenessResult CheckCompleteness(const TradeParams& params, const WagerScheme& scheme) {
  CompletenessResult r;
  r.slacks = HonestMargins(params, scheme);
  r.complete = std::all_of(r.slacks.begin(), r.slacks.end(),
                           [](const ConstraintSlack& s) { return s.slack > 0; });
  return r;
}

SoundnessResult CheckSoundness(const TradeParams& params, const WagerScheme& scheme,
                               const Rational& epsilon) {
  if (!(epsilon > 0)) {
    throw std::invalid_argument("soundness needs eps > 0, got " + ToString(epsilon));
  }
  SoundnessResult r;
  for (const auto& m : HonestMargins(params, scheme)) {
    if (IsSoundnessConstraint(m.which)) r.slacks.push_back({m.which, m.slack - epsilon});
  }
  r.inequalities_hold = std::all_of(r.slacks.begin(), r.slacks.end(),
                                    [](const ConstraintSlack& s) { return s.slack >= 0; });
  r.precondition_holds = PreconditionHolds(params, epsilon);
  if (!r.precondition_holds) {
    r.status = SoundnessStatus::kPreconditionViolated;
  } else {
    r.status = r.inequalities_hold ? SoundnessStatus::kSound : SoundnessStatus::kUnsound;
  }
  return r;
}

std::optional<Rational> SoundnessEpsilonMax(const TradeParams& params,
                                            const WagerScheme& scheme) {
  std::optional<Rational> best;
  for (const auto& m : HonestMargins(params, scheme)) {
    if (!IsSoundnessConstraint(m.which)) continue;
    best = best ? std::min(*best, m.slack) : m.slack;
  }
  if (!best || !(*best > 0)) return std::nullopt;
  return best;
}

std::vector<Constraint> SecurityReport::binding() const {
  std::vector<Constraint> out;
  if (constraints.empty()) return out;
  Rational lowest = constraints.front().slack;
  for (const auto& c : constraints) lowest = std::min(lowest, c.slack);
  for (const auto& c : constraints) {
    if (c.slack == lowest) out.push_back(c.which);
  }
  return out;
}

SecurityReport Analyze(const TradeParams& params, const WagerScheme& scheme) {
  SecurityReport r;
  CompletenessResult c = CheckCompleteness(params, scheme);
  r.complete = c.complete;
  r.weak = std::all_of(c.slacks.begin(), c.slacks.end(),
                       [](const ConstraintSlack& s) { return s.slack >= 0; });
  r.tree_margin = c.slacks.front().slack;
  for (const auto& s : c.slacks) r.tree_margin = std::min(r.tree_margin, s.slack);
  r.constraints = std::move(c.slacks);
  r.sound_epsilon_max = SoundnessEpsilonMax(params, scheme);
  if (r.sound_epsilon_max) r.precondition_holds = PreconditionHolds(params, *r.sound_epsilon_max);
  r.strong = r.complete && r.sound_epsilon_max.has_value();
  if (r.strong) r.strong_epsilon = r.sound_epsilon_max;
  return r;
}

// ---- Admissible wager intervals ------------------------------------------------

LambdaInterval LambdaInterval::Empty() { return LambdaInterval(); }

LambdaInterval::LambdaInterval(Bound lower, std::optional<Bound> upper)
    : empty_(false), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (upper_) {
    const bool both_closed = lower_.closed && upper_->closed;
    if (lower_.value > upper_->value || (lower_.value == upper_->value && !both_closed)) {
      empty_ = true;
    }
  }
}

bool LambdaInterval::contains(const Rational& lambda) const {
  if (empty_) return false;
  if (lower_.closed ? lambda < lower_.value : lambda <= lower_.value) return false;
  if (upper_ && (upper_->closed ? lambda > upper_->value : lambda >= upper_->value)) return false;
  return true;
}

std::string LambdaInterval::ToString() const {
  if (empty_) return "empty";
  std::string out = lower_.closed ? "[" : "(";
  out += escrow::ToString(lower_.value) + ", ";
  if (upper_) {
    out += escrow::ToString(upper_->value) + (upper_->closed ? "]" : ")");
  } else {
    out += "+inf)";
  }
  return out;
}

namespace {

// a + b * lambda, compared against zero.
struct AffineConstraint {
  Rational a;
  Rational b;
  bool strict;
};

LambdaInterval Intersect(const std::vector<AffineConstraint>& constraints) {
  Bound lower{0, false};  // wagers are positive
  std::optional<Bound> upper;
  for (const auto& c : constraints) {
    if (c.b == 0) {
      if (c.strict ? !(c.a > 0) : !(c.a >= 0)) return LambdaInterval::Empty();
      continue;
    }
    const Rational root = -c.a / c.b;
    if (c.b > 0) {
      if (root > lower.value || (root == lower.value && c.strict)) lower = {root, !c.strict};
    } else if (!upper || root < upper->value || (root == upper->value && c.strict)) {
      upper = Bound{root, !c.strict};
    }
  }
  return LambdaInterval(lower, upper);
}

}  // namespace

LambdaInterval AdmissibleLambda(const TradeParams& p, const WagerScheme& scheme,
                                const std::optional<Rational>& epsilon) {
  p.Validate();
  if (std::holds_alternative<GenericWager>(scheme)) {
    throw std::invalid_argument("generic wager has no wager constant to solve for");
  }
  if (epsilon && !(*epsilon > 0)) {
    throw std::invalid_argument("eps must be positive, got " + ToString(*epsilon));
  }
  const Rational& x = p.price;
  const Rational& xs = p.seller_value;
  const Rational& y = p.buyer_value;
  const Rational& g = p.arbiter_error;
  const Rational& tau = p.fee;
  const Rational eps = epsilon.value_or(0);
  const bool strict = !epsilon.has_value();

  // winner_gain = x + w1 * lambda; loser_loss = lambda.
  Rational w1 = 0;
  if (std::holds_alternative<WinnerRebateWager>(scheme)) w1 = 1;
  if (std::holds_alternative<WithheldWager>(scheme)) w1 = -1;

  std::vector<AffineConstraint> cs = {
      {(1 - g) * x - tau - eps, (1 - g) * w1 - g, strict},
      {tau - g * x - eps, (1 - g) - g * w1, strict},
      {(y - x) - g * y + (1 - g) * x + tau - eps, (1 - g) - g * w1, strict},
  };
  if (!epsilon) {
    cs.push_back({x - tau, 0, true});
    cs.push_back({x - xs - tau, 0, true});
  }
  return Intersect(cs);
}

Rational WinnerRebateLambda(const TradeParams& params, const Rational& epsilon) {
  params.Validate();
  if (!(epsilon > 0)) throw std::invalid_argument("eps must be positive");
  const Rational& g = params.arbiter_error;
  if (g >= Rational(1, 2)) {
    throw std::domain_error("no winner rebate achieves soundness when gamma >= 1/2");
  }
  return (params.price * g + epsilon) / (1 - 2 * g);
}

SecurityReport WithheldSecurity(const TradeParams& params) {
  return Analyze(params, WithheldWager{params.price / 2});
}

bool GenericCompletenessPossible(const Rational& winner_gain, const Rational& loser_loss,
                                 const Rational& gamma) {
  if (!(winner_gain > -loser_loss)) {
    throw std::invalid_argument("winning must be preferred to losing");
  }
  if (gamma < 0 || gamma > 1) throw std::invalid_argument("gamma must lie in [0, 1]");
  const Rational dishonest_counter = winner_gain * gamma - loser_loss * (1 - gamma);
  const Rational honest_counter = winner_gain * (1 - gamma) - loser_loss * gamma;
  return dishonest_counter < honest_counter;
}

// ---- Exhaustive oracle -------------------------------------------------------

namespace {

PayoffPair Play(const GameTree& tree, const std::vector<int>& edge, int from) {
  int id = from;
  while (!tree.at(id).is_leaf()) {
    const auto& n = tree.at(id);
    id = n.edges.at(static_cast<std::size_t>(edge[static_cast<std::size_t>(id)])).child;
  }
  return tree.at(id).payoff;
}

void CollectSubtree(const GameTree& tree, int id, std::vector<int>& out) {
  if (tree.at(id).is_leaf()) return;
  out.push_back(id);
  for (const auto& e : tree.at(id).edges) CollectSubtree(tree, e.child, out);
}

// Calls `visit` with every assignment of edges to `nodes`, writing into `edge`.
template <class Visit>
void EnumerateAssignments(const GameTree& tree, const std::vector<int>& nodes,
                          std::vector<int>& edge, std::size_t k, Visit&& visit) {
  if (k == nodes.size()) {
    visit();
    return;
  }
  const auto id = static_cast<std::size_t>(nodes[k]);
  const int arity = static_cast<int>(tree.at(nodes[k]).edges.size());
  const int saved = edge[id];
  for (int e = 0; e < arity; ++e) {
    edge[id] = e;
    EnumerateAssignments(tree, nodes, edge, k + 1, visit);
  }
  edge[id] = saved;
}

}  // namespace

std::vector<ProfileAssessment> AssessAllProfiles(const GameTree& tree) {
  const std::vector<int> decisions = tree.decision_nodes();
  if (decisions.size() > static_cast<std::size_t>(kMaxBruteForceDecisionNodes)) {
    throw std::invalid_argument("tree too large for exhaustive enumeration");
  }

  // Per subgame root, the decision nodes each player owns inside it.
  struct Subgame {
    int root;
    std::vector<int> seller_nodes;
    std::vector<int> buyer_nodes;
  };
  std::vector<Subgame> subgames;
  for (int id : decisions) {
    std::vector<int> inside;
    CollectSubtree(tree, id, inside);
    Subgame s{id, {}, {}};
    for (int n : inside) {
      (*tree.at(n).owner == Player::kSeller ? s.seller_nodes : s.buyer_nodes).push_back(n);
    }
    subgames.push_back(std::move(s));
  }

  std::vector<ProfileAssessment> out;
  std::vector<int> edge(tree.nodes().size(), -1);
  for (int id : decisions) edge[static_cast<std::size_t>(id)] = 0;

  EnumerateAssignments(tree, decisions, edge, 0, [&] {
    Rational worst_gain = 0;
    for (const Subgame& s : subgames) {
      const PayoffPair current = Play(tree, edge, s.root);
      for (Player who : {Player::kSeller, Player::kBuyer}) {
        const auto& own = who == Player::kSeller ? s.seller_nodes : s.buyer_nodes;
        if (own.empty()) continue;
        std::vector<int> scratch = edge;
        Rational best = current.of(who);
        EnumerateAssignments(tree, own, scratch, 0, [&] {
          best = std::max(best, Play(tree, scratch, s.root).of(who));
        });
        worst_gain = std::max(worst_gain, Rational(best - current.of(who)));
      }
    }
    out.push_back({StrategyProfile{edge}, worst_gain});
  });
  return out;
}

std::vector<StrategyProfile> BruteForceSpe(const GameTree& tree, const Rational& epsilon) {
  std::vector<StrategyProfile> out;
  for (auto& a : AssessAllProfiles(tree)) {
    if (a.min_epsilon <= epsilon) out.push_back(std::move(a.profile));
  }
  return out;
}

Rational BruteForceSoundnessThreshold(const GameTree& tree) {
  const StrategyProfile honest = StrategyProfile::Honest(tree);
  std::optional<Rational> best;
  for (const auto& a : AssessAllProfiles(tree)) {
    if (a.profile == honest) continue;
    best = best ? std::min(*best, a.min_epsilon) : a.min_epsilon;
  }
  return best.value_or(0);
}

std::string CsvHeader() { return "gamma,lambda,tau,scheme,complete,eps_max,strong,weak"; }

std::string CsvRow(const Rational& gamma, const Rational& lambda, const Rational& tau,
                   std::string_view scheme, const SecurityReport& report) {
  std::ostringstream out;
  out << ToString(gamma) << ',' << ToString(lambda) << ',' << ToString(tau) << ',' << scheme
      << ',' << (report.complete ? "true" : "false") << ','
      << (report.sound_epsilon_max ? ToString(*report.sound_epsilon_max) : "") << ','
      << (report.strong ? "true" : "false") << ',' << (report.weak ? "true" : "false");
  return out.str();
}

}  // namespace escrow
