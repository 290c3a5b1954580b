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

// Multiparty settlement. n parties trade pairwise; x[i][j] is what party i
// pays party j. The run collects three rounds of deposits into one pot:
//
//   1. party i deposits sum_j x[i][j]
//   2. party i disputes purchases (d[i][j] = 1) and deposits x[i][j] for each
//   3. party j counters disputes against it (c[j][i] = 1) and deposits x[i][j]
//
// then samples b and pays every party once. Each pair (buyer i, seller j)
// settles exactly like a two-party coin-toss contract with lambda = x[i][j]
// and coin b[i][j] (1 = the seller wins):
//
//   no dispute            -> j receives x[i][j]
//   dispute, no counter   -> i receives 2 x[i][j]
//   dispute and counter   -> the winner receives 2 x[i][j], the loser's
//                            x[i][j] goes to the arbiter sink
//
// A party whose deposit fails (or who is marked as crashed) at a round takes
// the default for that round: its purchases are dropped at round 1, its
// disputes become accepts at round 2, its counters become forfeits at round 3.

#ifndef ESCROW_MULTIPARTY_HPP_
#define ESCROW_MULTIPARTY_HPP_

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "escrow/rng.hpp"
#include "escrow/simchain.hpp"

namespace escrow {

using PaymentMatrix = std::vector<std::vector<Rational>>;
using BitMatrix = std::vector<std::vector<int>>;

// Whitespace-separated n x n grid of rationals, '#' starts a comment.
// Throws std::invalid_argument unless square, non-negative, zero diagonal.
PaymentMatrix ParsePaymentMatrix(std::string_view text);
// Same layout with 0/1 entries.
BitMatrix ParseBitMatrix(std::string_view text, std::size_t n);
BitMatrix ZeroBits(std::size_t n);

struct SettlementMatrix {
  std::size_t n = 0;
  PaymentMatrix x;
  BitMatrix d;  // effective disputes, after defaults
  BitMatrix c;  // effective counters, c[j][i] answers d[i][j]
  BitMatrix b;
  std::vector<Rational> payouts;  // what each party withdraws
  Rational arbiter_total = 0;
  // Parties that missed a round, by round (index 0..2).
  std::array<std::set<std::size_t>, 3> defaulted;
};

struct MultipartyOptions {
  // Forces the coin matrix instead of sampling it.
  std::optional<BitMatrix> coins;
  // Parties that stay silent at round 1, 2 or 3.
  std::array<std::set<std::size_t>, 3> crashed;
};

// Runs the contract on `ledger` using pot `pot_id`. parties[i] must hold an
// account. Throws std::invalid_argument for inconsistent inputs, including a
// counter that answers no dispute.
SettlementMatrix RunMultiparty(Ledger& ledger, ContractId pot_id,
                               const std::vector<PartyId>& parties, const PaymentMatrix& x,
                               const BitMatrix& disputes, const BitMatrix& counters, Rng& rng,
                               const MultipartyOptions& options = {});

// Net fund change of buyer, seller and arbiter for one pair under the
// two-party coin-toss contract with lambda = amount.
struct PairOutcome {
  Rational buyer;
  Rational seller;
  Rational arbiter;
};
PairOutcome TwoPartyOutcome(const Rational& amount, bool dispute, bool counter, bool seller_wins);

// The one-line payout rule sum_j (x[j][i] - b[i][j] c[i][j] d[i][j] x[j][i]).
// It ignores forfeited disputes, so it only agrees with RunMultiparty when
// nothing is disputed.
std::vector<Rational> LiteralPayouts(const PaymentMatrix& x, const BitMatrix& d,
                                     const BitMatrix& c, const BitMatrix& b);

}  // namespace escrow

#endif  // ESCROW_MULTIPARTY_HPP_
