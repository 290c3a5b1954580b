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

#ifndef ESCROW_RATIONAL_HPP_
#define ESCROW_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace escrow {

// Exact rational arithmetic for funds and probabilities. Equilibrium
// conditions are strict/non-strict inequality distinctions, so every
// payoff in the library is carried exactly.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Parses "3", "-3", "3/4", "0.25" or "-1.5e-2" into an exact rational.
// Throws std::invalid_argument on malformed input or a zero denominator.
Rational ParseRational(std::string_view text);

// Canonical form: "p" for integers, "p/q" otherwise (q > 0, reduced).
std::string ToString(const Rational& value);

// Decimal rendering, rounded toward zero after `digits` fractional digits.
std::string ToDecimal(const Rational& value, int digits = 6);

double ToDouble(const Rational& value);

inline Rational Frac(long long num, long long den = 1) {
  return Rational(num, den);
}

}  // namespace escrow

#endif  // ESCROW_RATIONAL_HPP_
