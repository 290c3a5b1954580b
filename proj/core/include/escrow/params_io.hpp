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

// Flat key-value text format for a trade and its wager scheme:
//
//   # comment
//   x = 1
//   x_seller = 0
//   y = 2
//   gamma = 1/4
//   tau = 0
//   scheme = standard        # standard | winner_rebate | withheld | generic
//   lambda = 1               # named schemes; defaults to x
//   omega = 1                # generic only
//   ell = 1                  # generic only

#ifndef ESCROW_PARAMS_IO_HPP_
#define ESCROW_PARAMS_IO_HPP_

#include <map>
#include <string>
#include <string_view>

#include "escrow/game_model.hpp"

namespace escrow {

struct ParamSet {
  TradeParams params;
  WagerScheme scheme;
};

// Throws std::invalid_argument on unknown keys, duplicate keys, missing
// required keys (x, y, gamma) or malformed values. The result is validated.
ParamSet ParseParamSet(std::string_view text);
// The raw `key = value` pairs, without key or value checks beyond syntax and
// duplicates.
std::map<std::string, std::string> ParseKeyValues(std::string_view text);
ParamSet ParamSetFromMap(const std::map<std::string, std::string>& values);
std::string FormatParamSet(const ParamSet& set);

WagerScheme MakeScheme(std::string_view name, const Rational& lambda,
                       const Rational& omega = 0, const Rational& ell = 0);

}  // namespace escrow

#endif  // ESCROW_PARAMS_IO_HPP_
