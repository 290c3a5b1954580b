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

#include <openssl/evp.h>

#include <memory>
#include <stdexcept>

namespace escrow {
namespace {

constexpr std::string_view kDomainTag = "escrowlab/coin-toss/commit/v1";

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Digest Commit(int bit, std::span<const std::uint8_t> randomness) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("commitment bit must be 0 or 1");
  if (randomness.size() != kRandomnessBytes) {
    throw std::invalid_argument("commitment randomness must be exactly " +
                                std::to_string(kRandomnessBits) + " bits, got " +
                                std::to_string(randomness.size() * 8));
  }
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  const std::uint8_t bit_byte = static_cast<std::uint8_t>(bit);
  Digest out{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), kDomainTag.data(), kDomainTag.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), &bit_byte, 1) != 1 ||
      EVP_DigestUpdate(ctx.get(), randomness.data(), randomness.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw std::runtime_error("SHA-256 failed");
  }
  return out;
}

bool VerifyOpening(const Digest& digest, const Opening& opening) {
  if (opening.bit != 0 && opening.bit != 1) return false;
  return Commit(opening.bit, opening.randomness) == digest;
}

std::string ToHex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

std::vector<std::uint8_t> FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int hi = HexValue(hex[2 * i]);
    const int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("non-hex character");
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

}  // namespace escrow
