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

#include "escrow/commitment.hpp"

#include <gtest/gtest.h>

#include <set>

#include "escrow/rng.hpp"

namespace escrow {
namespace {

Randomness Fixed(std::uint8_t seed) {
  Randomness r{};
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::uint8_t>(seed + 7 * i);
  return r;
}

TEST(Commitment, RoundTrip) {
  const Randomness r = Fixed(1);
  for (int bit : {0, 1}) {
    const Digest d = Commit(bit, r);
    EXPECT_TRUE(VerifyOpening(d, {bit, r}));
    EXPECT_EQ(Commit(bit, r), d);
  }
}

TEST(Commitment, RejectsOtherOpenings) {
  const Randomness r = Fixed(2);
  const Digest d = Commit(0, r);
  EXPECT_FALSE(VerifyOpening(d, {1, r}));
  Randomness flipped = r;
  flipped[31] ^= 1;
  EXPECT_FALSE(VerifyOpening(d, {0, flipped}));
  EXPECT_FALSE(VerifyOpening(d, {2, r}));
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Opening o;
    o.bit = rng.Bit();
    rng.Fill(o.randomness);
    EXPECT_FALSE(VerifyOpening(d, o));
  }
}

TEST(Commitment, RandomnessMustBe256Bits) {
  std::vector<std::uint8_t> short_r(31), long_r(33);
  EXPECT_THROW(Commit(0, short_r), std::invalid_argument);
  EXPECT_THROW(Commit(0, long_r), std::invalid_argument);
  EXPECT_THROW(Commit(2, Fixed(0)), std::invalid_argument);
  EXPECT_EQ(kRandomnessBits, 256u);
}

TEST(Commitment, DigestsDifferAcrossInputs) {
  std::set<Digest> seen;
  for (int s = 0; s < 50; ++s) {
    seen.insert(Commit(0, Fixed(static_cast<std::uint8_t>(s))));
    seen.insert(Commit(1, Fixed(static_cast<std::uint8_t>(s))));
  }
  EXPECT_EQ(seen.size(), 100u);
}

TEST(Hex, RoundTripAndErrors) {
  const Digest d = Commit(1, Fixed(3));
  const std::string hex = ToHex(d);
  EXPECT_EQ(hex.size(), 64u);
  const auto back = FromHex(hex);
  EXPECT_TRUE(std::equal(back.begin(), back.end(), d.begin(), d.end()));
  EXPECT_EQ(ToHex(FromHex("00ffA0")), "00ffa0");
  EXPECT_THROW(FromHex("abc"), std::invalid_argument);
  EXPECT_THROW(FromHex("zz"), std::invalid_argument);
}

}  // namespace
}  // namespace escrow
