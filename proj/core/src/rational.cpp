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

#include <cctype>
#include <stdexcept>

namespace escrow {
namespace {

Integer ParseInteger(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
  }
  Integer value = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

Integer Pow10(long long exponent) {
  Integer p = 1;
  for (long long i = 0; i < exponent; ++i) p *= 10;
  return p;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  const std::string_view whole = text;
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
    text.remove_prefix(1);
  }
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
    text.remove_suffix(1);
  }
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }

  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = ParseInteger(text.substr(0, slash), whole);
    Integer den = ParseInteger(text.substr(slash + 1), whole);
    if (den == 0) {
      throw std::invalid_argument("zero denominator: '" + std::string(whole) + "'");
    }
    result = Rational(num, den);
  } else {
    long long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
        exp_negative = exp_text.front() == '-';
        exp_text.remove_prefix(1);
      }
      if (exp_text.size() > 6) {
        throw std::invalid_argument("exponent out of range: '" + std::string(whole) + "'");
      }
      exponent = ParseInteger(exp_text, whole).convert_to<long long>();
      if (exp_negative) exponent = -exponent;
      text = text.substr(0, e);
    }
    std::string_view int_part = text;
    std::string_view frac_part;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      int_part = text.substr(0, dot);
      frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty()) {
      throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    }
    Integer mantissa = int_part.empty() ? Integer(0) : ParseInteger(int_part, whole);
    if (!frac_part.empty()) {
      mantissa = mantissa * Pow10(static_cast<long long>(frac_part.size())) +
                 ParseInteger(frac_part, whole);
    }
    exponent -= static_cast<long long>(frac_part.size());
    result = exponent >= 0 ? Rational(mantissa * Pow10(exponent))
                           : Rational(mantissa, Pow10(-exponent));
  }
  return negative ? Rational(-result) : result;
}

std::string ToString(const Rational& value) {
  const Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string ToDecimal(const Rational& value, int digits) {
  Integer num = boost::multiprecision::numerator(value);
  const Integer den = boost::multiprecision::denominator(value);
  std::string out;
  if (num < 0) {
    out += '-';
    num = -num;
  }
  out += Integer(num / den).str();
  if (digits > 0) {
    Integer rem = num % den;
    out += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out += static_cast<char>('0' + static_cast<int>(rem / den));
      rem %= den;
    }
  }
  return out;
}

double ToDouble(const Rational& value) { return value.convert_to<double>(); }

}  // namespace escrow
