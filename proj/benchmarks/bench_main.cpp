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

#include <benchmark/benchmark.h>

#include "escrow/agents.hpp"
#include "escrow/arbiter.hpp"
#include "escrow/equilibrium.hpp"
#include "escrow/multiparty.hpp"

namespace {

using namespace escrow;

TradeParams Trade(Rational gamma) {
  TradeParams p;
  p.price = 1;
  p.seller_value = Frac(1, 4);
  p.buyer_value = 2;
  p.arbiter_error = std::move(gamma);
  return p;
}

void BM_BackwardInduction(benchmark::State& state) {
  const GameTree tree = BuildGameTree(Trade(Frac(1, 4)), StandardWager{1}, true);
  for (auto _ : state) benchmark::DoNotOptimize(BackwardInduction(tree));
}
BENCHMARK(BM_BackwardInduction);

void BM_Analyze(benchmark::State& state) {
  const TradeParams p = Trade(Frac(1, 4));
  for (auto _ : state) benchmark::DoNotOptimize(Analyze(p, StandardWager{1}));
}
BENCHMARK(BM_Analyze);

void BM_BruteForceSpe(benchmark::State& state) {
  const GameTree tree = BuildGameTree(Trade(Frac(1, 4)), StandardWager{1}, true);
  for (auto _ : state) benchmark::DoNotOptimize(BruteForceSpe(tree, 0));
}
BENCHMARK(BM_BruteForceSpe);

void BM_CoinToss(benchmark::State& state) {
  Rng rng(1);
  CoinTossArbiter arbiter(TimeoutPolicy{});
  for (auto _ : state) benchmark::DoNotOptimize(arbiter.Decide(DisputeCase{}, rng));
}
BENCHMARK(BM_CoinToss);

void BM_SimulateDisputes(benchmark::State& state) {
  const StrategyPair pair{SellerStrategy::Honest(), BuyerStrategy::Parse("dispute,dispute")};
  const auto trials = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Simulate(Trade(Frac(1, 4)), StandardWager{1}, pair, trials, 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateDisputes)->Arg(1000);

void BM_Multiparty(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  PaymentMatrix x(n, std::vector<Rational>(n, Rational(1)));
  BitMatrix d = ZeroBits(n), c = ZeroBits(n);
  std::vector<PartyId> names;
  for (std::size_t i = 0; i < n; ++i) {
    x[i][i] = 0;
    names.push_back("P" + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      d[i][j] = i != j && (i + j) % 2 == 0;
      c[j][i] = d[i][j] && i < j;
    }
  }
  Rng rng(3);
  for (auto _ : state) {
    Ledger ledger;
    for (const auto& name : names) ledger.OpenAccount(name, 4 * static_cast<long long>(n));
    benchmark::DoNotOptimize(RunMultiparty(ledger, 1, names, x, d, c, rng));
  }
}
BENCHMARK(BM_Multiparty)->Arg(4)->Arg(16)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
