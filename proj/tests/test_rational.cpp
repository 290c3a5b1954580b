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

#include "escrow/rational.hpp"

#include <gtest/gtest.h>

namespace escrow {
namespace {

TEST(ParseRational, Forms) {
  EXPECT_EQ(ParseRational("3"), 3);
  EXPECT_EQ(ParseRational("-3"), -3);
  EXPECT_EQ(ParseRational("+3"), 3);
  EXPECT_EQ(ParseRational("6/8"), Frac(3, 4));
  EXPECT_EQ(ParseRational("-1/3"), Frac(-1, 3));
  EXPECT_EQ(ParseRational("0.25"), Frac(1, 4));
  EXPECT_EQ(ParseRational(".5"), Frac(1, 2));
  EXPECT_EQ(ParseRational("2."), 2);
  EXPECT_EQ(ParseRational("1e3"), 1000);
  EXPECT_EQ(ParseRational("2.5e-1"), Frac(1, 4));
  EXPECT_EQ(ParseRational("  7/2 "), Frac(7, 2));
  EXPECT_EQ(ParseRational("0.1") * 10, 1);  // exact, unlike binary floating point
}

TEST(ParseRational, Rejects) {
  for (const char* bad : {"", "-", "e5", "abc", "1/0", "1/", "/2", ".", "1.2.3", "1e", "1e1234567", "--1",
                          "0x10", "1 2"}) {
    EXPECT_THROW(ParseRational(bad), std::invalid_argument) << bad;
  }
}

TEST(Format, RoundTrip) {
  EXPECT_EQ(ToString(Frac(6, 8)), "3/4");
  EXPECT_EQ(ToString(Rational(-5)), "-5");
  EXPECT_EQ(ToDecimal(Frac(1, 3), 4), "0.3333");
  EXPECT_EQ(ToDecimal(Frac(-7, 2), 2), "-3.50");
  EXPECT_EQ(ToDecimal(Rational(2), 0), "2");
  EXPECT_DOUBLE_EQ(ToDouble(Frac(1, 8)), 0.125);
  for (const char* s : {"0", "1/2", "-17/5", "-123456789012345678901234567891/2"}) {
    EXPECT_EQ(ToString(ParseRational(s)), s);
  }
}

}  // namespace
}  // namespace escrow
