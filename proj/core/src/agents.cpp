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

#include "escrow/agents.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "escrow/params_io.hpp"

namespace escrow {
namespace {

std::vector<std::string> SplitComma(std::string_view text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

bool Choice(const std::string& word, std::string_view yes, std::string_view no,
            std::string_view text) {
  if (word == yes) return true;
  if (word == no) return false;
  throw std::invalid_argument("bad strategy '" + std::string(text) + "': expected " +
                              std::string(yes) + " or " + std::string(no) + ", got '" + word +
                              "'");
}

const PartyId kSeller = "seller";
const PartyId kBuyer = "buyer";

}  // namespace

SellerStrategy SellerStrategy::Parse(std::string_view text) {
  if (text == "honest") return Honest();
  const auto w = SplitComma(text);
  if (w.size() != 3) throw std::invalid_argument("seller strategy needs three actions: " + std::string(text));
  SellerStrategy s;
  s.send = Choice(w[0], "send", "not-send", text);
  s.counter_if_sent = Choice(w[1], "counter", "forfeit", text);
  s.counter_if_not_sent = Choice(w[2], "counter", "forfeit", text);
  return s;
}

std::string SellerStrategy::Name() const {
  return std::string(send ? "send" : "not-send") + "," + (counter_if_sent ? "counter" : "forfeit") +
         "," + (counter_if_not_sent ? "counter" : "forfeit");
}

BuyerStrategy BuyerStrategy::Parse(std::string_view text) {
  if (text == "honest") return Honest();
  const auto w = SplitComma(text);
  if (w.size() != 2) throw std::invalid_argument("buyer strategy needs two actions: " + std::string(text));
  BuyerStrategy b;
  b.dispute_if_received = Choice(w[0], "dispute", "accept", text);
  b.dispute_if_not_received = Choice(w[1], "dispute", "accept", text);
  return b;
}

std::string BuyerStrategy::Name() const {
  return std::string(dispute_if_received ? "dispute" : "accept") + "," +
         (dispute_if_not_received ? "dispute" : "accept");
}

std::vector<SellerStrategy> AllSellerStrategies() {
  std::vector<SellerStrategy> out;
  for (int bits = 0; bits < 8; ++bits) {
    SellerStrategy s;
    s.send = !(bits & 4);
    s.counter_if_sent = !(bits & 2);
    s.counter_if_not_sent = (bits & 1);
    out.push_back(s);
  }
  return out;
}

std::vector<BuyerStrategy> AllBuyerStrategies() {
  std::vector<BuyerStrategy> out;
  for (int bits = 0; bits < 4; ++bits) {
    BuyerStrategy b;
    b.dispute_if_received = (bits & 2);
    b.dispute_if_not_received = !(bits & 1);
    out.push_back(b);
  }
  return out;
}

Leaf LeafFor(const StrategyPair& pair) {
  const SellerStrategy& s = pair.seller;
  const BuyerStrategy& b = pair.buyer;
  if (s.send) {
    if (!b.dispute_if_received) return Leaf::kSendAccept;
    return s.counter_if_sent ? Leaf::kSendDisputeCounter : Leaf::kSendDisputeForfeit;
  }
  if (!b.dispute_if_not_received) return Leaf::kNotSendAccept;
  return s.counter_if_not_sent ? Leaf::kNotSendDisputeCounter : Leaf::kNotSendDisputeForfeit;
}

PayoffPair AnalyticPayoff(const TradeParams& params, const WagerScheme& scheme,
                          const StrategyPair& pair) {
  PayoffPair p = LeafPayoff(LeafFor(pair), params, scheme, true);
  p.buyer -= params.fee;
  p.seller -= params.fee;
  return p;
}

TrialResult PlayTrial(const TradeParams& params, const WagerScheme& scheme,
                      const StrategyPair& pair, Rng& rng, const SimOptions& options) {
  ContractConfig config;
  config.params = params;
  config.scheme = scheme;
  config.seller = kSeller;
  config.buyer = kBuyer;
  config.policy = TimeoutPolicy{options.threshold, options.timeout, 0};
  config.liveness_deposit = options.liveness_deposit;
  config.rebate_arbiter_fee = options.rebate_arbiter_fee;
  const Rational lambda = config.lambda();

  ContractHost host(params.fee);
  Ledger& ledger = host.ledger();
  const Rational bank = 4 * (params.price + lambda + options.liveness_deposit + params.fee) + 1;
  ledger.OpenAccount(kSeller, bank);
  ledger.OpenAccount(kBuyer, bank);

  const SellerStrategy& s = pair.seller;
  const BuyerStrategy& b = pair.buyer;
  EscrowContract& c = host.Propose(config);
  c.Fund(kBuyer);

  const bool delivered = s.send;
  if (delivered) c.NotifyDelivery(kSeller);

  if (delivered ? b.dispute_if_received : b.dispute_if_not_received) {
    c.Dispute(kBuyer);
  } else if (b.responsive) {
    c.Accept(kBuyer);
  } else {
    host.AdvanceTime(options.timeout);
  }

  if (c.state().phase == Phase::kDisputed) {
    if (delivered ? s.counter_if_sent : s.counter_if_not_sent) {
      c.Counter(kSeller);
    } else if (s.responsive) {
      c.Forfeit(kSeller);
    } else {
      host.AdvanceTime(options.timeout);
    }
  }

  TrialResult out;
  if (c.state().phase == Phase::kCountered) {
    c.BeginArbitration(kSeller);
    DisputeCase dispute{delivered ? Player::kSeller : Player::kBuyer, nullptr, nullptr};
    Verdict verdict;
    if (options.arbiter == ArbiterKind::kOracle) {
      OracleArbiter arbiter(params.arbiter_error);
      verdict = host.Arbitrate(c.id(), arbiter, dispute, rng);
    } else {
      CoinTossArbiter arbiter(TimeoutPolicy{options.threshold, options.timeout, 0});
      verdict = host.Arbitrate(c.id(), arbiter, dispute, rng);
    }
    out.arbitrated = true;
    out.arbitration_winner = verdict.winner;
  }
  if (c.state().phase != Phase::kSettled) throw std::logic_error("trial ended unsettled");

  out.payoff.buyer = ledger.balance(kBuyer) - bank;
  out.payoff.seller = ledger.balance(kSeller) - bank;
  if (delivered) {
    out.payoff.seller -= params.seller_value;
    const bool keeps_item = options.valuation == Valuation::kLedger || !out.arbitrated ||
                            out.arbitration_winner == Player::kBuyer;
    if (keeps_item) out.payoff.buyer += params.buyer_value;
  }
  out.leaf = LeafFor(pair);
  out.fees = ledger.fees_paid(kSeller) + ledger.fees_paid(kBuyer);
  return out;
}

SimStats Simulate(const TradeParams& params, const WagerScheme& scheme, const StrategyPair& pair,
                  std::uint64_t trials, std::uint64_t seed, const SimOptions& options) {
  if (trials == 0) throw std::invalid_argument("simulation needs at least one trial");
  params.Validate();
  std::vector<TrialResult> results(trials);

  auto run = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t k = begin; k < end; ++k) {
      Rng rng = Rng::ForStream(seed, k);
      results[k] = PlayTrial(params, scheme, pair, rng, options);
    }
  };
  const std::uint64_t workers = std::max<std::uint64_t>(1, std::min<std::uint64_t>(options.workers, trials));
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = trials * w / workers;
      const std::uint64_t end = trials * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] {
        try {
          run(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SimStats stats;
  stats.trials = trials;
  PayoffPair sum{0, 0};
  std::uint64_t disputes = 0, arbitrations = 0, seller_wins = 0;
  for (const TrialResult& r : results) {
    sum.buyer += r.payoff.buyer;
    sum.seller += r.payoff.seller;
    stats.fees_total += r.fees;
    ++stats.leaf_counts[static_cast<std::size_t>(r.leaf)];
    const auto path = LeafPath(r.leaf);
    if (path.size() > 1 && path[1] == Action::kDispute) ++disputes;
    if (r.arbitrated) {
      ++arbitrations;
      if (r.arbitration_winner == Player::kSeller) ++seller_wins;
    }
  }
  const Rational n(static_cast<unsigned long long>(trials));
  stats.mean = {sum.buyer / n, sum.seller / n};

  const double mb = ToDouble(stats.mean.buyer), ms = ToDouble(stats.mean.seller);
  double vb = 0, vs = 0;
  for (const TrialResult& r : results) {
    vb += std::pow(ToDouble(r.payoff.buyer) - mb, 2);
    vs += std::pow(ToDouble(r.payoff.seller) - ms, 2);
  }
  stats.buyer_stddev = std::sqrt(vb / static_cast<double>(trials));
  stats.seller_stddev = std::sqrt(vs / static_cast<double>(trials));
  stats.dispute_rate = static_cast<double>(disputes) / static_cast<double>(trials);
  stats.arbitration_rate = static_cast<double>(arbitrations) / static_cast<double>(trials);
  stats.seller_win_rate =
      arbitrations ? static_cast<double>(seller_wins) / static_cast<double>(arbitrations) : 0.0;
  return stats;
}

std::string SimStats::ToString() const {
  std::ostringstream out;
  out << "trials " << trials << '\n'
      << "mean_buyer " << escrow::ToString(mean.buyer) << " (" << ToDecimal(mean.buyer) << ")\n"
      << "mean_seller " << escrow::ToString(mean.seller) << " (" << ToDecimal(mean.seller) << ")\n"
      << "stddev_buyer " << buyer_stddev << '\n'
      << "stddev_seller " << seller_stddev << '\n'
      << "dispute_rate " << dispute_rate << '\n'
      << "arbitration_rate " << arbitration_rate << '\n'
      << "seller_win_rate " << seller_win_rate << '\n'
      << "fees_total " << escrow::ToString(fees_total) << '\n';
  for (Leaf leaf : kAllLeaves) {
    out << "leaf [" << LeafName(leaf) << "] " << leaf_counts[static_cast<std::size_t>(leaf)]
        << '\n';
  }
  return out.str();
}

std::vector<SweepRow> Sweep(const SweepGrid& grid) {
  std::vector<SweepRow> rows;
  const std::vector<Rational> lambdas =
      grid.lambdas.empty() ? std::vector<Rational>{grid.base.price} : grid.lambdas;
  for (const std::string& name : grid.schemes) {
    if (name == "generic") throw std::invalid_argument("sweep runs named wager schemes only");
    for (const Rational& gamma : grid.gammas) {
      for (const Rational& lambda : lambdas) {
        for (const Rational& tau : grid.taus) {
          TradeParams p = grid.base;
          p.arbiter_error = gamma;
          p.fee = tau;
          try {
            p.Validate();
          } catch (const IllPosedTrade&) {
            continue;
          }
          const WagerScheme scheme = MakeScheme(name, lambda);
          SweepRow row{gamma, lambda, tau, name, Analyze(p, scheme), std::nullopt, std::nullopt};
          if (grid.epsilons.empty()) {
            rows.push_back(std::move(row));
            continue;
          }
          for (const Rational& eps : grid.epsilons) {
            SweepRow r = row;
            r.epsilon = eps;
            r.sound = CheckSoundness(p, scheme, eps).sound();
            rows.push_back(std::move(r));
          }
        }
      }
    }
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  const bool with_eps = !rows.empty() && rows.front().epsilon.has_value();
  std::string out = CsvHeader() + (with_eps ? ",eps,sound" : "") + "\n";
  for (const SweepRow& r : rows) {
    out += CsvRow(r.gamma, r.lambda, r.tau, r.scheme, r.report);
    if (r.epsilon) out += "," + ToString(*r.epsilon) + "," + (*r.sound ? "true" : "false");
    out += '\n';
  }
  return out;
}

}  // namespace escrow
