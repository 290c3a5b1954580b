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

#include "escrow/params_io.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace escrow {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::set<std::string, std::less<>> kKeys = {"x",      "x_seller", "y",     "gamma", "tau",
                                                  "scheme", "lambda",   "omega", "ell"};

}  // namespace

WagerScheme MakeScheme(std::string_view name, const Rational& lambda, const Rational& omega,
                       const Rational& ell) {
  if (name == "standard") return StandardWager{lambda};
  if (name == "winner_rebate") return WinnerRebateWager{lambda};
  if (name == "withheld") return WithheldWager{lambda};
  if (name == "generic") return GenericWager{omega, ell};
  throw std::invalid_argument("unknown scheme: '" + std::string(name) + "'");
}

ParamSet ParamSetFromMap(const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    if (!kKeys.contains(key)) throw std::invalid_argument("unknown key: '" + key + "'");
  }
  auto required = [&](const char* key) {
    auto it = values.find(key);
    if (it == values.end()) throw std::invalid_argument(std::string("missing key: ") + key);
    return ParseRational(it->second);
  };
  auto optional = [&](const char* key, const Rational& fallback) {
    auto it = values.find(key);
    return it == values.end() ? fallback : ParseRational(it->second);
  };

  ParamSet set;
  set.params.price = required("x");
  set.params.seller_value = optional("x_seller", 0);
  set.params.buyer_value = required("y");
  set.params.arbiter_error = required("gamma");
  set.params.fee = optional("tau", 0);

  const auto scheme_it = values.find("scheme");
  const std::string scheme = scheme_it == values.end() ? "standard" : scheme_it->second;
  if (scheme == "generic") {
    set.scheme = MakeScheme(scheme, 0, required("omega"), required("ell"));
  } else {
    set.scheme = MakeScheme(scheme, optional("lambda", set.params.price));
  }
  set.params.Validate();
  ValidateScheme(set.scheme);
  return set;
}

std::map<std::string, std::string> ParseKeyValues(std::string_view text) {
  std::map<std::string, std::string> values;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (!values.emplace(key, value).second) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": duplicate key '" + key +
                                  "'");
    }
  }
  return values;
}

ParamSet ParseParamSet(std::string_view text) { return ParamSetFromMap(ParseKeyValues(text)); }

std::string FormatParamSet(const ParamSet& set) {
  std::ostringstream out;
  const TradeParams& p = set.params;
  out << "x = " << ToString(p.price) << '\n'
      << "x_seller = " << ToString(p.seller_value) << '\n'
      << "y = " << ToString(p.buyer_value) << '\n'
      << "gamma = " << ToString(p.arbiter_error) << '\n'
      << "tau = " << ToString(p.fee) << '\n'
      << "scheme = " << SchemeName(set.scheme) << '\n';
  if (const auto* g = std::get_if<GenericWager>(&set.scheme)) {
    out << "omega = " << ToString(g->winner_gain) << '\n'
        << "ell = " << ToString(g->loser_loss) << '\n';
  } else {
    out << "lambda = " << ToString(*SchemeLambda(set.scheme)) << '\n';
  }
  return out.str();
}

}  // namespace escrow
