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

#include "escrow/multiparty.hpp"

#include <sstream>
#include <stdexcept>

namespace escrow {
namespace {

std::vector<std::vector<std::string>> Grid(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::vector<std::string> row;
    for (std::string w; words >> w;) row.push_back(w);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

template <class M>
void RequireSquare(const M& m, std::size_t n, std::string_view what) {
  if (m.size() != n) throw std::invalid_argument(std::string(what) + " must have " + std::to_string(n) + " rows");
  for (const auto& row : m) {
    if (row.size() != n) {
      throw std::invalid_argument(std::string(what) + " must have " + std::to_string(n) + " columns");
    }
  }
}

bool TryDeposit(Ledger& ledger, ContractId pot, const PartyId& party, const Rational& amount) {
  try {
    ledger.EscrowDeposit(pot, party, amount, MoveKind::kContractMove);
    return true;
  } catch (const InsufficientFunds&) {
    return false;
  }
}

}  // namespace

PaymentMatrix ParsePaymentMatrix(std::string_view text) {
  const auto rows = Grid(text);
  if (rows.empty()) throw std::invalid_argument("payment matrix is empty");
  const std::size_t n = rows.size();
  PaymentMatrix x(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw std::invalid_argument("payment matrix row " + std::to_string(i + 1) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      x[i][j] = ParseRational(rows[i][j]);
      if (x[i][j] < 0) throw std::invalid_argument("payments must be non-negative");
      if (i == j && x[i][j] != 0) throw std::invalid_argument("a party cannot pay itself");
    }
  }
  return x;
}

BitMatrix ParseBitMatrix(std::string_view text, std::size_t n) {
  const auto rows = Grid(text);
  RequireSquare(rows, n, "bit matrix");
  BitMatrix m(n, std::vector<int>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[i][j] != "0" && rows[i][j] != "1") {
        throw std::invalid_argument("bit matrix entries must be 0 or 1");
      }
      m[i][j] = rows[i][j] == "1";
    }
  }
  return m;
}

BitMatrix ZeroBits(std::size_t n) { return BitMatrix(n, std::vector<int>(n, 0)); }

PairOutcome TwoPartyOutcome(const Rational& amount, bool dispute, bool counter,
                            bool seller_wins) {
  if (!dispute) return {-amount, amount, 0};
  if (!counter) return {0, 0, 0};
  if (seller_wins) return {-2 * amount, amount, amount};
  return {0, -amount, amount};
}

SettlementMatrix RunMultiparty(Ledger& ledger, ContractId pot_id,
                               const std::vector<PartyId>& parties, const PaymentMatrix& x,
                               const BitMatrix& disputes, const BitMatrix& counters, Rng& rng,
                               const MultipartyOptions& options) {
  const std::size_t n = parties.size();
  if (n < 2) throw std::invalid_argument("multiparty run needs at least two parties");
  RequireSquare(x, n, "payment matrix");
  RequireSquare(disputes, n, "dispute matrix");
  RequireSquare(counters, n, "counter matrix");
  if (options.coins) RequireSquare(*options.coins, n, "coin matrix");
  for (std::size_t i = 0; i < n; ++i) {
    ledger.balance(parties[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (x[i][j] < 0) throw std::invalid_argument("payments must be non-negative");
      if (i == j && (x[i][j] != 0 || disputes[i][j] || counters[i][j])) {
        throw std::invalid_argument("diagonal entries must be zero");
      }
      if (disputes[i][j] && x[i][j] == 0) {
        throw std::invalid_argument("party " + std::to_string(i) + " disputes a purchase from " +
                                    std::to_string(j) + " it never made");
      }
      if (counters[j][i] && !disputes[i][j]) {
        throw std::invalid_argument("party " + std::to_string(j) + " counters a dispute by " +
                                    std::to_string(i) + " that was never raised");
      }
    }
  }

  SettlementMatrix out;
  out.n = n;
  out.x = x;
  out.d = disputes;
  out.c = counters;

  auto round = [&](int r, std::size_t party, const Rational& amount) {
    if (amount == 0) return true;
    if (!options.crashed[r].contains(party) && TryDeposit(ledger, pot_id, parties[party], amount)) {
      return true;
    }
    out.defaulted[r].insert(party);
    return false;
  };

  for (std::size_t i = 0; i < n; ++i) {
    Rational owed = 0;
    for (std::size_t j = 0; j < n; ++j) owed += x[i][j];
    if (!round(0, i, owed)) {
      for (std::size_t j = 0; j < n; ++j) {
        out.x[i][j] = 0;
        out.d[i][j] = 0;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.c[j][i] = out.c[j][i] && out.d[i][j];
  }

  for (std::size_t i = 0; i < n; ++i) {
    Rational wagers = 0;
    for (std::size_t j = 0; j < n; ++j) wagers += out.d[i][j] * out.x[i][j];
    if (!round(1, i, wagers)) {
      for (std::size_t j = 0; j < n; ++j) {
        out.d[i][j] = 0;
        out.c[j][i] = 0;
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    Rational wagers = 0;
    for (std::size_t i = 0; i < n; ++i) wagers += out.c[j][i] * out.x[i][j];
    if (!round(2, j, wagers)) {
      for (std::size_t i = 0; i < n; ++i) out.c[j][i] = 0;
    }
  }

  if (options.coins) {
    out.b = *options.coins;
  } else {
    out.b = ZeroBits(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) out.b[i][j] = rng.Bit();
      }
    }
  }

  out.payouts.assign(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = out.x[i][j];
      if (a == 0) continue;
      if (!out.d[i][j]) {
        out.payouts[j] += a;
      } else if (!out.c[j][i]) {
        out.payouts[i] += 2 * a;
      } else {
        out.payouts[out.b[i][j] ? j : i] += 2 * a;
        out.arbiter_total += a;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (out.payouts[i] > 0) ledger.EscrowRelease(pot_id, parties[i], out.payouts[i]);
  }
  if (out.arbiter_total > 0) ledger.EscrowToSink(pot_id, Sink::kArbiter, out.arbiter_total);
  if (ledger.pot(pot_id) != 0) throw std::logic_error("multiparty pot not empty after settlement");
  return out;
}

std::vector<Rational> LiteralPayouts(const PaymentMatrix& x, const BitMatrix& d,
                                     const BitMatrix& c, const BitMatrix& b) {
  const std::size_t n = x.size();
  RequireSquare(d, n, "dispute matrix");
  RequireSquare(c, n, "counter matrix");
  RequireSquare(b, n, "coin matrix");
  std::vector<Rational> out(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out[i] += x[j][i] - b[i][j] * c[i][j] * d[i][j] * x[j][i];
    }
  }
  return out;
}

}  // namespace escrow
