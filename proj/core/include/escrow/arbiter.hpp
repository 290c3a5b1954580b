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

// Dispute arbiters.
//
// OracleArbiter rules for the honest party with probability 1 - gamma.
// CoinTossArbiter ignores the evidence and runs a commit-then-reveal coin
// flip between the two parties:
//
//   seller -> COMMIT(digest)      digest = commit(b_S, r)
//   buyer  -> BIT(b_B)
//   seller -> OPEN(b_S, r)
//
// A valid opening yields b = b_S xor b_B, an invalid one b = 0, and the seller
// wins iff b = 1. A party that stays silent past the timeout, or sends a
// malformed message, loses by forfeit.

#ifndef ESCROW_ARBITER_HPP_
#define ESCROW_ARBITER_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "escrow/commitment.hpp"
#include "escrow/game_model.hpp"
#include "escrow/rng.hpp"
#include "escrow/simchain.hpp"

namespace escrow {

enum class VerdictBasis { kOracle, kCoin, kForfeitByTimeout, kInvalidOpening, kJury };
std::string_view VerdictBasisName(VerdictBasis basis);

struct Verdict {
  Player winner = Player::kBuyer;
  VerdictBasis basis = VerdictBasis::kOracle;
  std::vector<std::string> transcript;  // ordered tagged lines

  bool operator==(const Verdict&) const = default;
};

// ---- Coin-toss wire format ------------------------------------------------------

struct CommitMessage {
  Digest digest;
};
struct BitMessage {
  int bit = 0;
};
struct OpenMessage {
  Opening opening;
};
// Anything else a party might put on the wire; treated as a timeout.
struct MalformedMessage {
  std::string raw;
};
using CoinMessage = std::variant<CommitMessage, BitMessage, OpenMessage, MalformedMessage>;

// "COMMIT <hex>", "BIT <0|1>", "OPEN <0|1> <hex>".
std::string FormatMessage(const CoinMessage& message);
// Unparseable lines come back as MalformedMessage.
CoinMessage ParseMessage(std::string_view line);

struct Response {
  std::optional<CoinMessage> message;  // nullopt: never answered
  Tick latency = 0;
};

class SellerChannel {
 public:
  virtual ~SellerChannel() = default;
  virtual Response Commit() = 0;
  virtual Response Open() = 0;
};

class BuyerChannel {
 public:
  virtual ~BuyerChannel() = default;
  // The digest is all the buyer sees before choosing.
  virtual Response ChooseBit(const Digest& digest) = 0;
};

// Samples b_S and r from `rng` and follows the protocol.
class HonestSellerChannel : public SellerChannel {
 public:
  explicit HonestSellerChannel(Rng& rng);
  Response Commit() override;
  Response Open() override;
  int bit() const { return opening_.bit; }

 private:
  Opening opening_;
};

class HonestBuyerChannel : public BuyerChannel {
 public:
  explicit HonestBuyerChannel(Rng& rng) : rng_(rng) {}
  Response ChooseBit(const Digest&) override;

 private:
  Rng& rng_;
};

// Replays fixed responses; used for adversarial and fault-injection runs.
class ScriptedSellerChannel : public SellerChannel {
 public:
  ScriptedSellerChannel(Response commit, Response open)
      : commit_(std::move(commit)), open_(std::move(open)) {}
  Response Commit() override { return commit_; }
  Response Open() override { return open_; }

 private:
  Response commit_;
  Response open_;
};

class ScriptedBuyerChannel : public BuyerChannel {
 public:
  explicit ScriptedBuyerChannel(Response bit) : bit_(std::move(bit)) {}
  Response ChooseBit(const Digest&) override { return bit_; }

 private:
  Response bit_;
};

Verdict CoinTossArbitrate(SellerChannel& seller, BuyerChannel& buyer, const TimeoutPolicy& policy);

// Re-derives a verdict (coin toss, oracle or jury) from its transcript alone.
// Throws std::invalid_argument for a transcript no arbiter could produce.
Verdict ReplayVerdict(std::span<const std::string> transcript);

Verdict OracleArbitrate(Player honest_party, const Rational& gamma, Rng& rng);

// ---- Arbiter interface ------------------------------------------------------------

struct DisputeCase {
  Player honest_party = Player::kBuyer;  // ground truth, known only to the oracle
  SellerChannel* seller = nullptr;       // coin toss only; honest channels when null
  BuyerChannel* buyer = nullptr;
};

class Arbiter {
 public:
  virtual ~Arbiter() = default;
  virtual Verdict Decide(const DisputeCase& dispute, Rng& rng) = 0;
};

class OracleArbiter : public Arbiter {
 public:
  explicit OracleArbiter(Rational gamma);
  Verdict Decide(const DisputeCase& dispute, Rng& rng) override;
  const Rational& gamma() const { return gamma_; }

 private:
  Rational gamma_;
};

class CoinTossArbiter : public Arbiter {
 public:
  explicit CoinTossArbiter(TimeoutPolicy policy) : policy_(std::move(policy)) {}
  Verdict Decide(const DisputeCase& dispute, Rng& rng) override;

 private:
  TimeoutPolicy policy_;
};

// Majority of `jurors` independent fair coins. Experimental; no security
// claim attaches to it.
class JuryArbiter : public Arbiter {
 public:
  explicit JuryArbiter(int jurors);
  Verdict Decide(const DisputeCase& dispute, Rng& rng) override;

 private:
  int jurors_;
};

}  // namespace escrow

#endif  // ESCROW_ARBITER_HPP_
