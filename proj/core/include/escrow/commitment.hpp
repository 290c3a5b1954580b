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

// Hash commitment to a single bit: SHA-256(tag || bit || r) with 256-bit r.
// Hiding and binding rest on SHA-256; adequate for simulation, not audited
// for production use.

#ifndef ESCROW_COMMITMENT_HPP_
#define ESCROW_COMMITMENT_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace escrow {

inline constexpr std::size_t kRandomnessBits = 256;
inline constexpr std::size_t kRandomnessBytes = kRandomnessBits / 8;

using Digest = std::array<std::uint8_t, 32>;
using Randomness = std::array<std::uint8_t, kRandomnessBytes>;

struct Opening {
  int bit = 0;
  Randomness randomness{};

  bool operator==(const Opening&) const = default;
};

// Throws std::invalid_argument unless bit is 0/1 and randomness has exactly
// kRandomnessBytes bytes.
Digest Commit(int bit, std::span<const std::uint8_t> randomness);
bool VerifyOpening(const Digest& digest, const Opening& opening);

std::string ToHex(std::span<const std::uint8_t> bytes);
// Throws std::invalid_argument on odd length or non-hex characters.
std::vector<std::uint8_t> FromHex(std::string_view hex);

}  // namespace escrow

#endif  // ESCROW_COMMITMENT_HPP_
