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

#include "escrow/arbiter.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace escrow {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Player Other(Player p) { return p == Player::kBuyer ? Player::kSeller : Player::kBuyer; }

std::vector<std::string> SplitWords(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::string Sanitize(std::string_view raw) {
  std::string out(raw);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
  return out;
}

std::optional<Digest> ParseDigest(const std::string& hex) {
  if (hex.size() != 2 * Digest{}.size()) return std::nullopt;
  try {
    auto bytes = FromHex(hex);
    Digest d{};
    std::copy(bytes.begin(), bytes.end(), d.begin());
    return d;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::optional<int> ParseBit(const std::string& s) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  return std::nullopt;
}

// Transcript line recording that `who` failed to answer in time, or answered
// with something that is not the expected message.
std::string FaultLine(Player who, const Response& r, const TimeoutPolicy& policy) {
  if (!r.message || r.latency >= policy.timeout) {
    return "TIMEOUT " + std::string(PlayerName(who));
  }
  return "MALFORMED " + std::string(PlayerName(who)) + " " + Sanitize(FormatMessage(*r.message));
}

template <class Expected>
const Expected* Accept(const Response& r, const TimeoutPolicy& policy) {
  if (!r.message || r.latency >= policy.timeout) return nullptr;
  return std::get_if<Expected>(&*r.message);
}

Verdict Forfeit(Player loser, std::vector<std::string> transcript) {
  return {Other(loser), VerdictBasis::kForfeitByTimeout, std::move(transcript)};
}

}  // namespace

std::string_view VerdictBasisName(VerdictBasis basis) {
  switch (basis) {
    case VerdictBasis::kOracle: return "oracle";
    case VerdictBasis::kCoin: return "coin";
    case VerdictBasis::kForfeitByTimeout: return "forfeit-by-timeout";
    case VerdictBasis::kInvalidOpening: return "invalid-opening";
    case VerdictBasis::kJury: return "jury";
  }
  return "?";
}

std::string FormatMessage(const CoinMessage& message) {
  return std::visit(
      Overloaded{
          [](const CommitMessage& m) { return "COMMIT " + ToHex(m.digest); },
          [](const BitMessage& m) { return "BIT " + std::to_string(m.bit); },
          [](const OpenMessage& m) {
            return "OPEN " + std::to_string(m.opening.bit) + " " + ToHex(m.opening.randomness);
          },
          [](const MalformedMessage& m) { return m.raw; },
      },
      message);
}

CoinMessage ParseMessage(std::string_view line) {
  const auto words = SplitWords(line);
  const MalformedMessage malformed{Sanitize(line)};
  if (words.empty()) return malformed;
  if (words[0] == "COMMIT" && words.size() == 2) {
    if (auto d = ParseDigest(words[1])) return CommitMessage{*d};
  } else if (words[0] == "BIT" && words.size() == 2) {
    if (auto b = ParseBit(words[1])) return BitMessage{*b};
  } else if (words[0] == "OPEN" && words.size() == 3) {
    auto b = ParseBit(words[1]);
    if (b && words[2].size() == 2 * kRandomnessBytes) {
      try {
        auto bytes = FromHex(words[2]);
        OpenMessage m;
        m.opening.bit = *b;
        std::copy(bytes.begin(), bytes.end(), m.opening.randomness.begin());
        return m;
      } catch (const std::invalid_argument&) {
      }
    }
  }
  return malformed;
}

HonestSellerChannel::HonestSellerChannel(Rng& rng) {
  opening_.bit = rng.Bit() ? 1 : 0;
  rng.Fill(opening_.randomness);
}

Response HonestSellerChannel::Commit() {
  return {CommitMessage{escrow::Commit(opening_.bit, opening_.randomness)}, 0};
}

Response HonestSellerChannel::Open() { return {OpenMessage{opening_}, 0}; }

Response HonestBuyerChannel::ChooseBit(const Digest&) {
  return {BitMessage{rng_.Bit() ? 1 : 0}, 0};
}

Verdict CoinTossArbitrate(SellerChannel& seller, BuyerChannel& buyer,
                          const TimeoutPolicy& policy) {
  policy.Validate();
  std::vector<std::string> transcript;

  const Response commit = seller.Commit();
  const auto* c = Accept<CommitMessage>(commit, policy);
  if (!c) {
    transcript.push_back(FaultLine(Player::kSeller, commit, policy));
    return Forfeit(Player::kSeller, std::move(transcript));
  }
  transcript.push_back(FormatMessage(*c));

  const Response bit = buyer.ChooseBit(c->digest);
  const auto* b = Accept<BitMessage>(bit, policy);
  if (!b || (b->bit != 0 && b->bit != 1)) {
    transcript.push_back(FaultLine(Player::kBuyer, bit, policy));
    return Forfeit(Player::kBuyer, std::move(transcript));
  }
  transcript.push_back(FormatMessage(*b));

  const Response open = seller.Open();
  const auto* o = Accept<OpenMessage>(open, policy);
  if (!o) {
    transcript.push_back(FaultLine(Player::kSeller, open, policy));
    return Forfeit(Player::kSeller, std::move(transcript));
  }
  transcript.push_back(FormatMessage(*o));

  // The replay is the single place the outcome rule lives.
  return ReplayVerdict(transcript);
}

Verdict ReplayVerdict(std::span<const std::string> transcript) {
  auto bad = [](const std::string& why) {
    return std::invalid_argument("not a verdict transcript: " + why);
  };
  if (transcript.empty()) throw bad("empty");
  std::vector<std::string> lines(transcript.begin(), transcript.end());
  const auto head = SplitWords(lines[0]);
  if (head.empty()) throw bad("blank first line");

  if (head[0] == "ORACLE") {
    // ORACLE honest=<party> flipped=<0|1>
    if (lines.size() != 1 || head.size() != 3) throw bad("oracle line");
    Player honest;
    if (head[1] == "honest=buyer") {
      honest = Player::kBuyer;
    } else if (head[1] == "honest=seller") {
      honest = Player::kSeller;
    } else {
      throw bad("oracle honest party");
    }
    if (head[2] != "flipped=0" && head[2] != "flipped=1") throw bad("oracle flip");
    const bool flipped = head[2] == "flipped=1";
    return {flipped ? Other(honest) : honest, VerdictBasis::kOracle, std::move(lines)};
  }

  if (head[0] == "JURY") {
    // JURY <vote>... with 1 = vote for the seller
    if (lines.size() != 1 || head.size() < 2 || head.size() % 2 != 0) throw bad("jury line");
    int seller_votes = 0;
    for (std::size_t i = 1; i < head.size(); ++i) {
      auto v = ParseBit(head[i]);
      if (!v) throw bad("jury vote");
      seller_votes += *v;
    }
    const int jurors = static_cast<int>(head.size()) - 1;
    const Player winner = 2 * seller_votes > jurors ? Player::kSeller : Player::kBuyer;
    return {winner, VerdictBasis::kJury, std::move(lines)};
  }

  // Coin toss: seller line, buyer line, seller line; a fault ends the run.
  auto fault_of = [&](const std::vector<std::string>& w) -> std::optional<Player> {
    if (w.size() >= 2 && (w[0] == "TIMEOUT" || w[0] == "MALFORMED")) {
      if (w[1] == "seller") return Player::kSeller;
      if (w[1] == "buyer") return Player::kBuyer;
    }
    return std::nullopt;
  };
  const Player expected[] = {Player::kSeller, Player::kBuyer, Player::kSeller};
  Digest digest{};
  int buyer_bit = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i >= 3) throw bad("trailing lines");
    const auto words = SplitWords(lines[i]);
    if (auto who = fault_of(words)) {
      if (*who != expected[i] || i + 1 != lines.size()) throw bad("fault out of turn");
      return Forfeit(*who, std::move(lines));
    }
    const CoinMessage m = ParseMessage(lines[i]);
    if (i == 0) {
      const auto* c = std::get_if<CommitMessage>(&m);
      if (!c) throw bad("expected COMMIT");
      digest = c->digest;
    } else if (i == 1) {
      const auto* b = std::get_if<BitMessage>(&m);
      if (!b) throw bad("expected BIT");
      buyer_bit = b->bit;
    } else {
      const auto* o = std::get_if<OpenMessage>(&m);
      if (!o) throw bad("expected OPEN");
      if (!VerifyOpening(digest, o->opening)) {
        // b := 0, so the buyer wins.
        return {Player::kBuyer, VerdictBasis::kInvalidOpening, std::move(lines)};
      }
      const int coin = o->opening.bit ^ buyer_bit;
      return {coin == 1 ? Player::kSeller : Player::kBuyer, VerdictBasis::kCoin,
              std::move(lines)};
    }
  }
  throw bad("incomplete run");
}

Verdict OracleArbitrate(Player honest_party, const Rational& gamma, Rng& rng) {
  if (gamma < 0 || gamma > 1) throw std::invalid_argument("gamma must lie in [0, 1]");
  const bool flipped = rng.Bernoulli(gamma);
  std::vector<std::string> transcript = {"ORACLE honest=" + std::string(PlayerName(honest_party)) +
                                         " flipped=" + (flipped ? "1" : "0")};
  return ReplayVerdict(transcript);
}

OracleArbiter::OracleArbiter(Rational gamma) : gamma_(std::move(gamma)) {
  if (gamma_ < 0 || gamma_ > 1) throw std::invalid_argument("gamma must lie in [0, 1]");
}

Verdict OracleArbiter::Decide(const DisputeCase& dispute, Rng& rng) {
  return OracleArbitrate(dispute.honest_party, gamma_, rng);
}

Verdict CoinTossArbiter::Decide(const DisputeCase& dispute, Rng& rng) {
  std::optional<HonestSellerChannel> own_seller;
  std::optional<HonestBuyerChannel> own_buyer;
  SellerChannel* seller = dispute.seller;
  BuyerChannel* buyer = dispute.buyer;
  if (!seller) seller = &own_seller.emplace(rng);
  if (!buyer) buyer = &own_buyer.emplace(rng);
  return CoinTossArbitrate(*seller, *buyer, policy_);
}

JuryArbiter::JuryArbiter(int jurors) : jurors_(jurors) {
  if (jurors_ < 1 || jurors_ % 2 == 0) throw std::invalid_argument("jury size must be odd");
}

Verdict JuryArbiter::Decide(const DisputeCase&, Rng& rng) {
  std::string line = "JURY";
  for (int i = 0; i < jurors_; ++i) line += rng.Bit() ? " 1" : " 0";
  std::vector<std::string> transcript = {line};
  return ReplayVerdict(transcript);
}

}  // namespace escrow
