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

// Equilibrium analysis of the contract game: backward induction, closed-form
// completeness/soundness checks, admissible wager intervals and an exhaustive
// oracle over pure strategy profiles.

#ifndef ESCROW_EQUILIBRIUM_HPP_
#define ESCROW_EQUILIBRIUM_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "escrow/game_model.hpp"
#include "escrow/rational.hpp"

namespace escrow {

// One edge index per node id (leaves hold -1). Edge 0 is the honest action.
struct StrategyProfile {
  std::vector<int> edge;

  static StrategyProfile Honest(const GameTree& tree);
  bool operator==(const StrategyProfile&) const = default;
  // "send,accept,counter,dispute,forfeit" in decision-node order.
  std::string ToString(const GameTree& tree) const;
};

struct NodeSolution {
  int node = 0;
  Player owner = Player::kSeller;
  Action chosen = Action::kSend;
  std::vector<Action> optimal;  // every maximizing action; size > 1 on ties
  Rational margin;              // chosen value minus best alternative, >= 0
  Rational honest_margin;       // honest value minus best dishonest value, signed
  PayoffPair value;             // continuation under the solved profile
};

struct SolvedTree {
  std::vector<NodeSolution> nodes;  // decision nodes in id order
  StrategyProfile profile;
  PayoffPair root_value;

  const NodeSolution& at(int node_id) const;
  // True iff every margin is strictly positive.
  bool unique() const;
  bool honest() const;
  Rational min_margin() const;
};

// Ties resolve toward the honest action and are reported with margin 0.
SolvedTree BackwardInduction(const GameTree& tree);

// Incentive constraints, one per decision node, named by the behaviour they
// protect.
enum class Constraint {
  kHonestSellerCounters,      // seller who delivered counters a dispute
  kDishonestSellerForfeits,   // seller who did not deliver forfeits a dispute
  kHonestBuyerAccepts,        // buyer who received the item accepts
  kUndeliveredBuyerDisputes,  // buyer who got nothing disputes
  kSellerDelivers,            // seller sends rather than withholds
};
std::string_view ConstraintName(Constraint c);

struct ConstraintSlack {
  Constraint which;
  Rational slack;
};

struct CompletenessResult {
  bool complete = false;
  std::vector<ConstraintSlack> slacks;  // honest-minus-dishonest utility per node
};

// Strict inequalities at all five nodes, with every non-default move costing
// params.fee.
CompletenessResult CheckCompleteness(const TradeParams& params, const WagerScheme& scheme);

enum class SoundnessStatus { kSound, kUnsound, kPreconditionViolated };

struct SoundnessResult {
  SoundnessStatus status = SoundnessStatus::kUnsound;
  bool inequalities_hold = false;  // evaluated even when the precondition fails
  bool precondition_holds = false;  // y - eps >= x >= eps
  std::vector<ConstraintSlack> slacks;  // margin minus eps at the three dispute nodes

  bool sound() const { return status == SoundnessStatus::kSound; }
};

// Non-strict: every dishonest action at the dispute-relevant nodes is at
// least eps worse than the honest one. Throws std::invalid_argument if eps <= 0.
SoundnessResult CheckSoundness(const TradeParams& params, const WagerScheme& scheme,
                               const Rational& epsilon);

// Largest eps accepted by CheckSoundness's inequalities; nullopt when no
// positive eps qualifies.
std::optional<Rational> SoundnessEpsilonMax(const TradeParams& params,
                                            const WagerScheme& scheme);

struct SecurityReport {
  bool complete = false;
  std::optional<Rational> sound_epsilon_max;
  bool precondition_holds = false;  // soundness side condition at sound_epsilon_max
  bool strong = false;
  std::optional<Rational> strong_epsilon;
  bool weak = false;
  std::vector<ConstraintSlack> constraints;  // completeness slacks
  // Smallest honest margin over every decision node, including the seller's
  // delivery decision and the undelivered buyer's dispute.
  Rational tree_margin;

  std::vector<Constraint> binding() const;  // constraints at minimum slack
};

SecurityReport Analyze(const TradeParams& params, const WagerScheme& scheme);

struct Bound {
  Rational value;
  bool closed = false;
};

class LambdaInterval {
 public:
  static LambdaInterval Empty();
  LambdaInterval(Bound lower, std::optional<Bound> upper);

  bool empty() const { return empty_; }
  const Bound& lower() const { return lower_; }
  const std::optional<Bound>& upper() const { return upper_; }  // nullopt = +infinity
  bool contains(const Rational& lambda) const;
  // "(1/3, 3)", "[1, 1]", "(0, +inf)", "empty"
  std::string ToString() const;

 private:
  LambdaInterval() = default;
  bool empty_ = true;
  Bound lower_;
  std::optional<Bound> upper_;
};

// Wager constants for which the scheme's kind is complete (no epsilon) or
// passes CheckSoundness's inequalities at `epsilon`. The lambda stored in
// `scheme` is ignored. Throws std::invalid_argument for GenericWager.
LambdaInterval AdmissibleLambda(const TradeParams& params, const WagerScheme& scheme,
                                const std::optional<Rational>& epsilon);

// (x*gamma + eps) / (1 - 2*gamma). Throws std::domain_error when gamma >= 1/2
// and std::invalid_argument when eps <= 0.
Rational WinnerRebateLambda(const TradeParams& params, const Rational& epsilon);

// Report for withheld wagers at lambda = x/2.
SecurityReport WithheldSecurity(const TradeParams& params);

// Whether a seller facing a dispute can be made to counter when honest and
// forfeit when dishonest under arbitrary stakes. Throws
// std::invalid_argument unless winning is preferred to losing.
bool GenericCompletenessPossible(const Rational& winner_gain, const Rational& loser_loss,
                                 const Rational& gamma);

// ---- Exhaustive oracle -------------------------------------------------------

struct ProfileAssessment {
  StrategyProfile profile;
  // Smallest eps' making the profile a subgame perfect eps'-equilibrium: the
  // largest gain any player gets from any deviation in any subgame.
  Rational min_epsilon;
};

inline constexpr int kMaxBruteForceDecisionNodes = 20;

// Every pure profile with its assessment. Throws std::invalid_argument for
// trees with more than kMaxBruteForceDecisionNodes decision nodes.
std::vector<ProfileAssessment> AssessAllProfiles(const GameTree& tree);

// Profiles that are subgame perfect eps'-equilibria (eps' = 0: exact SPE).
std::vector<StrategyProfile> BruteForceSpe(const GameTree& tree, const Rational& epsilon);

// Smallest min_epsilon over the non-honest profiles: the raw soundness
// threshold under the profile-quantified definition.
Rational BruteForceSoundnessThreshold(const GameTree& tree);

std::string CsvHeader();
std::string CsvRow(const Rational& gamma, const Rational& lambda, const Rational& tau,
                   std::string_view scheme, const SecurityReport& report);

}  // namespace escrow

#endif  // ESCROW_EQUILIBRIUM_HPP_
