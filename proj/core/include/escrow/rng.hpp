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

#ifndef ESCROW_RNG_HPP_
#define ESCROW_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>

#include "escrow/rational.hpp"

namespace escrow {

// Deterministic random source. Draws are derived from raw mt19937_64 output
// only, so results do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, stream), e.g. one per simulation trial.
  static Rng ForStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t Next() { return engine_(); }
  bool Bit() { return (engine_() >> 63) != 0; }
  // Uniform in [0, bound). Throws std::invalid_argument if bound == 0.
  std::uint64_t Below(std::uint64_t bound);
  // True with probability exactly p (0 <= p <= 1, denominator < 2^64).
  bool Bernoulli(const Rational& p);
  void Fill(std::span<std::uint8_t> out);

 private:
  std::mt19937_64 engine_;
};

}  // namespace escrow

#endif  // ESCROW_RNG_HPP_
