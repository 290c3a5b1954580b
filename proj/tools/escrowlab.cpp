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

// escrowlab: command-line front end.
//
//   escrowlab solve      --x 1 --y 2 --gamma 1/4 [--eps 1/2] [--tree]
//   escrowlab sweep      --x 1 --y 2 --gamma-grid 0:1/2:1/20 [--lambda-grid ...]
//   escrowlab simulate   --x 1 --y 2 --gamma 1/4 --buyer dispute,dispute --trials 10000
//   escrowlab multiparty --matrix payments.txt [--disputes d.txt] [--counters c.txt]
//
// Trade parameters come from --params FILE (key = value lines) and/or the
// matching flags; flags win.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "escrow/agents.hpp"
#include "escrow/equilibrium.hpp"
#include "escrow/multiparty.hpp"
#include "escrow/params_io.hpp"

namespace {

using namespace escrow;

struct ParamFlags {
  std::string file;
  std::map<std::string, std::string> values;

  void Register(CLI::App* app, bool with_gamma = true) {
    app->add_option("--params", file, "key = value parameter file");
    static const std::vector<std::pair<std::string, std::string>> kFlags = {
        {"x", "price x"},
        {"x_seller", "seller's value x'"},
        {"y", "buyer's value y"},
        {"gamma", "arbiter error rate"},
        {"tau", "fee per non-default move"},
        {"scheme", "standard | winner_rebate | withheld | generic"},
        {"lambda", "wager constant (defaults to x)"},
        {"omega", "generic winner gain"},
        {"ell", "generic loser loss"},
    };
    for (const auto& [key, help] : kFlags) {
      if (!with_gamma && (key == "gamma" || key == "lambda" || key == "tau")) continue;
      std::string flag = "--" + key;
      for (char& c : flag) {
        if (c == '_') c = '-';
      }
      app->add_option_function<std::string>(
          flag, [this, key](const std::string& v) { values[key] = v; }, help);
    }
  }

  std::map<std::string, std::string> Merged() const {
    std::map<std::string, std::string> out;
    if (!file.empty()) out = ParseKeyValues(ReadFile(file));
    for (const auto& [k, v] : values) out[k] = v;
    return out;
  }

  ParamSet Resolve() const { return ParamSetFromMap(Merged()); }

  static std::string ReadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }
};

// "a:b:step" (inclusive) or "v1,v2,...".
std::vector<Rational> ParseGrid(const std::string& text) {
  std::vector<Rational> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    for (std::string p; std::getline(in, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw std::invalid_argument("grid range must be start:stop:step");
    const Rational start = ParseRational(parts[0]);
    const Rational stop = ParseRational(parts[1]);
    const Rational step = ParseRational(parts[2]);
    if (step <= 0) throw std::invalid_argument("grid step must be positive");
    for (Rational v = start; v <= stop; v += step) out.push_back(v);
    return out;
  }
  std::stringstream in(text);
  for (std::string p; std::getline(in, p, ',');) {
    if (!p.empty()) out.push_back(ParseRational(p));
  }
  if (out.empty()) throw std::invalid_argument("empty grid");
  return out;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string p; std::getline(in, p, ',');) {
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

std::string Yes(bool b) { return b ? "yes" : "no"; }

int RunSolve(const ParamFlags& flags, const std::string& eps_text, bool show_tree, bool csv) {
  const ParamSet set = flags.Resolve();
  const TradeParams& p = set.params;
  const SecurityReport report = Analyze(p, set.scheme);
  const auto lambda = SchemeLambda(set.scheme);

  if (csv) {
    std::cout << CsvHeader() << '\n'
              << CsvRow(p.arbiter_error, lambda.value_or(0), p.fee, SchemeName(set.scheme), report)
              << '\n';
    return 0;
  }

  std::cout << FormatParamSet(set) << '\n';
  std::cout << "complete        " << Yes(report.complete) << '\n';
  std::cout << "eps_max         "
            << (report.sound_epsilon_max ? ToString(*report.sound_epsilon_max) : "none") << '\n';
  std::cout << "strong          " << Yes(report.strong);
  if (report.strong_epsilon) std::cout << " (eps = " << ToString(*report.strong_epsilon) << ")";
  std::cout << '\n';
  std::cout << "weak            " << Yes(report.weak) << '\n';
  std::cout << "tree_margin     " << ToString(report.tree_margin) << '\n';
  std::cout << "constraints\n";
  for (const ConstraintSlack& c : report.constraints) {
    std::cout << "  " << ConstraintName(c.which) << ' ' << ToString(c.slack) << '\n';
  }
  std::cout << "binding        ";
  for (Constraint c : report.binding()) std::cout << ' ' << ConstraintName(c);
  std::cout << '\n';

  if (lambda) {
    std::cout << "lambda_complete " << AdmissibleLambda(p, set.scheme, std::nullopt).ToString()
              << '\n';
  }
  if (!eps_text.empty()) {
    const Rational eps = ParseRational(eps_text);
    const SoundnessResult s = CheckSoundness(p, set.scheme, eps);
    std::cout << "sound(eps=" << ToString(eps) << ") ";
    switch (s.status) {
      case SoundnessStatus::kSound: std::cout << "yes"; break;
      case SoundnessStatus::kUnsound: std::cout << "no"; break;
      case SoundnessStatus::kPreconditionViolated:
        std::cout << "precondition y - eps >= x >= eps violated";
        break;
    }
    std::cout << '\n';
    if (lambda) {
      std::cout << "lambda_sound    " << AdmissibleLambda(p, set.scheme, eps).ToString() << '\n';
    }
  }

  const GameTree tree = BuildGameTree(p, set.scheme, true);
  const SolvedTree solved = BackwardInduction(tree);
  std::cout << "spe             " << solved.profile.ToString(tree)
            << (solved.unique() ? " (unique)" : " (ties)") << '\n';
  if (show_tree) {
    std::cout << '\n' << tree.Describe();
    for (const NodeSolution& n : solved.nodes) {
      std::cout << "node " << n.node << ' ' << PlayerName(n.owner) << " chooses "
                << ActionName(n.chosen) << " margin " << ToString(n.margin) << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"escrowlab: escrow contract game analysis and simulation"};
  app.require_subcommand(1);

  // solve
  ParamFlags solve_flags;
  std::string solve_eps;
  bool solve_tree = false;
  bool solve_csv = false;
  CLI::App* solve = app.add_subcommand("solve", "security report for one parameter set");
  solve_flags.Register(solve);
  solve->add_option("--eps", solve_eps, "also check eps-soundness");
  solve->add_flag("--tree", solve_tree, "print the game tree and solved nodes");
  solve->add_flag("--csv", solve_csv, "print one CSV row");

  // sweep
  ParamFlags sweep_flags;
  std::string gamma_grid = "0:1/2:1/20";
  std::string lambda_grid;
  std::string tau_grid = "0";
  std::string eps_grid;
  std::string schemes = "standard";
  CLI::App* sweep = app.add_subcommand("sweep", "CSV security reports over a grid");
  sweep_flags.Register(sweep, false);
  sweep->add_option("--gamma-grid", gamma_grid, "start:stop:step or a,b,c")->capture_default_str();
  sweep->add_option("--lambda-grid", lambda_grid, "wager grid (default: lambda = x)");
  sweep->add_option("--tau-grid", tau_grid, "fee grid")->capture_default_str();
  sweep->add_option("--eps-grid", eps_grid, "adds eps,sound columns");
  sweep->add_option("--schemes", schemes, "comma-separated named schemes")->capture_default_str();

  // simulate
  ParamFlags sim_flags;
  std::string seller_strategy = "honest";
  std::string buyer_strategy = "honest";
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  std::string arbiter = "oracle";
  std::string valuation = "retained";
  unsigned workers = 1;
  std::string deposit = "0";
  bool all_buyers = false;
  CLI::App* simulate = app.add_subcommand("simulate", "play repeated trades and report payoffs");
  sim_flags.Register(simulate);
  simulate->add_option("--seller", seller_strategy, "send|not-send,counter|forfeit,counter|forfeit or honest")
      ->capture_default_str();
  simulate->add_option("--buyer", buyer_strategy, "accept|dispute,accept|dispute or honest")
      ->capture_default_str();
  simulate->add_option("--trials", trials)->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed)->capture_default_str();
  simulate->add_option("--arbiter", arbiter, "oracle | coin")->capture_default_str()
      ->check(CLI::IsMember({"oracle", "coin"}));
  simulate->add_option("--valuation", valuation, "retained | ledger")->capture_default_str()
      ->check(CLI::IsMember({"retained", "ledger"}));
  simulate->add_option("--workers", workers)->capture_default_str();
  simulate->add_option("--deposit", deposit, "liveness deposit")->capture_default_str();
  simulate->add_flag("--all-buyers", all_buyers, "compare every buyer strategy against --seller");

  // multiparty
  std::string matrix_file, disputes_file, counters_file, coins_file;
  std::string mp_fee = "0";
  std::uint64_t mp_seed = 1;
  CLI::App* multiparty = app.add_subcommand("multiparty", "settle a multiparty instance");
  multiparty->add_option("--matrix", matrix_file, "n x n payment grid")->required();
  multiparty->add_option("--disputes", disputes_file, "n x n 0/1 grid, d[i][j]: i disputes j");
  multiparty->add_option("--counters", counters_file, "n x n 0/1 grid, c[j][i]: j counters i");
  multiparty->add_option("--coins", coins_file, "n x n 0/1 grid instead of sampling");
  multiparty->add_option("--fee", mp_fee, "fee per deposit")->capture_default_str();
  multiparty->add_option("--seed", mp_seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return RunSolve(solve_flags, solve_eps, solve_tree, solve_csv);

    if (*sweep) {
      auto merged = sweep_flags.Merged();
      merged.erase("gamma");
      merged.erase("tau");
      merged.erase("lambda");
      merged.erase("scheme");
      merged["gamma"] = "0";
      SweepGrid grid;
      grid.base = ParamSetFromMap(merged).params;
      grid.gammas = ParseGrid(gamma_grid);
      if (!lambda_grid.empty()) grid.lambdas = ParseGrid(lambda_grid);
      grid.taus = ParseGrid(tau_grid);
      if (!eps_grid.empty()) grid.epsilons = ParseGrid(eps_grid);
      grid.schemes = SplitList(schemes);
      std::cout << SweepCsv(Sweep(grid));
      return 0;
    }

    if (*simulate) {
      const ParamSet set = sim_flags.Resolve();
      SimOptions options;
      options.arbiter = arbiter == "coin" ? ArbiterKind::kCoinToss : ArbiterKind::kOracle;
      options.valuation = valuation == "ledger" ? Valuation::kLedger : Valuation::kRetained;
      options.workers = workers;
      options.liveness_deposit = ParseRational(deposit);
      const SellerStrategy s = SellerStrategy::Parse(seller_strategy);
      std::vector<BuyerStrategy> buyers =
          all_buyers ? AllBuyerStrategies()
                     : std::vector<BuyerStrategy>{BuyerStrategy::Parse(buyer_strategy)};
      for (const BuyerStrategy& b : buyers) {
        const StrategyPair pair{s, b};
        const SimStats stats = Simulate(set.params, set.scheme, pair, trials, seed, options);
        const PayoffPair expected = AnalyticPayoff(set.params, set.scheme, pair);
        std::cout << "seller " << s.Name() << "\nbuyer " << b.Name() << '\n'
                  << stats.ToString() << "analytic_buyer " << ToString(expected.buyer)
                  << "\nanalytic_seller " << ToString(expected.seller) << "\n";
        if (buyers.size() > 1) std::cout << '\n';
      }
      return 0;
    }

    if (*multiparty) {
      const PaymentMatrix x = ParsePaymentMatrix(ParamFlags::ReadFile(matrix_file));
      const std::size_t n = x.size();
      auto bits = [&](const std::string& file) {
        return file.empty() ? ZeroBits(n) : ParseBitMatrix(ParamFlags::ReadFile(file), n);
      };
      MultipartyOptions options;
      if (!coins_file.empty()) options.coins = bits(coins_file);
      Ledger ledger(ParseRational(mp_fee));
      std::vector<PartyId> parties;
      for (std::size_t i = 0; i < n; ++i) {
        parties.push_back("P" + std::to_string(i + 1));
        Rational need = 0;
        for (std::size_t j = 0; j < n; ++j) need += 2 * x[i][j] + x[j][i];
        ledger.OpenAccount(parties.back(), need + 3 * ledger.fee());
      }
      Rng rng(mp_seed);
      const std::string before = ledger.Snapshot();
      const SettlementMatrix m =
          RunMultiparty(ledger, 1, parties, x, bits(disputes_file), bits(counters_file), rng, options);
      auto dump = [&](const char* name, const BitMatrix& b) {
        std::cout << name << '\n';
        for (const auto& row : b) {
          for (std::size_t j = 0; j < row.size(); ++j) std::cout << (j ? " " : "") << row[j];
          std::cout << '\n';
        }
      };
      dump("disputes", m.d);
      dump("counters", m.c);
      dump("coins", m.b);
      std::cout << "payouts\n";
      for (std::size_t i = 0; i < n; ++i) {
        std::cout << parties[i] << ' ' << ToString(m.payouts[i]) << " interactions "
                  << ledger.interactions(parties[i]) << '\n';
      }
      std::cout << "arbiter " << ToString(m.arbiter_total) << "\n\nledger before\n"
                << before << "\nledger after\n" << ledger.Snapshot();
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "escrowlab: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
