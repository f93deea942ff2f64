// Copyright 2026 The bfexp Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bfexp/bf16.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bfexp {

double Bf16::to_double() const {
  const double sign_value = sign() ? -1.0 : 1.0;
  const unsigned e = biased_exponent();
  if (e == 0) return sign_value * 0.0;
  if (e == 0xFF) {
    if (mantissa() != 0) return std::numeric_limits<double>::quiet_NaN();
    return sign_value * std::numeric_limits<double>::infinity();
  }
  const double significand = 1.0 + static_cast<double>(mantissa()) / 128.0;
  return sign_value * std::ldexp(significand, static_cast<int>(e) - kExponentBias);
}

Bf16 bf16_from_real(double x) {
  if (std::isnan(x)) return Bf16::from_bits(Bf16::kCanonicalNan);
  const auto raw = std::bit_cast<std::uint64_t>(x);
  const std::uint16_t sign = static_cast<std::uint16_t>((raw >> 63) << 15);
  if (std::isinf(x)) return Bf16::from_bits(sign | Bf16::kPosInf);

  const auto dexp = static_cast<int>((raw >> 52) & 0x7FF);
  // Zero and binary64 subnormals are far below the bf16 normal range.
  if (dexp == 0) return Bf16::from_bits(sign);

  int exponent = dexp - 1023;
  const std::uint64_t significand = (raw & ((std::uint64_t{1} << 52) - 1)) | (std::uint64_t{1} << 52);
  constexpr int kDrop = 52 - Bf16::kMantissaBits;
  std::uint64_t kept = significand >> kDrop;
  const std::uint64_t rest = significand & ((std::uint64_t{1} << kDrop) - 1);
  const std::uint64_t half = std::uint64_t{1} << (kDrop - 1);
  if (rest > half || (rest == half && (kept & 1))) ++kept;
  if (kept == 0x100) {
    kept = 0x80;
    ++exponent;
  }

  if (exponent > 127) return Bf16::from_bits(sign | Bf16::kPosInf);
  if (exponent < -126) return Bf16::from_bits(sign);
  const auto biased = static_cast<std::uint16_t>(exponent + Bf16::kExponentBias);
  return Bf16::from_bits(sign | static_cast<std::uint16_t>(biased << 7) |
                         static_cast<std::uint16_t>(kept & Bf16::kMantissaMask));
}

// Operands widen exactly to binary64. A single binary64 rounding followed by
// the bf16 rounding is equivalent to one correct rounding because 53 >= 2*8+2.

Bf16 bf16_add(Bf16 a, Bf16 b) { return bf16_from_real(a.to_double() + b.to_double()); }

Bf16 bf16_sub(Bf16 a, Bf16 b) { return bf16_from_real(a.to_double() - b.to_double()); }

Bf16 bf16_mul(Bf16 a, Bf16 b) { return bf16_from_real(a.to_double() * b.to_double()); }

Bf16 bf16_recip(Bf16 a) { return bf16_from_real(1.0 / a.to_double()); }

Bf16 bf16_max(Bf16 a, Bf16 b) {
  if (a.is_nan() && b.is_nan()) return Bf16::from_bits(Bf16::kCanonicalNan);
  if (a.is_nan()) return bf16_from_real(b.to_double());
  if (b.is_nan()) return bf16_from_real(a.to_double());
  const double x = a.to_double();
  const double y = b.to_double();
  if (x == 0.0 && y == 0.0) {
    return Bf16::from_bits((std::signbit(x) && std::signbit(y)) ? Bf16::kNegZero : Bf16::kPosZero);
  }
  return bf16_from_real(x < y ? y : x);
}

bool bf16_less(Bf16 a, Bf16 b) { return a.to_double() < b.to_double(); }

double bf16_ulp(Bf16 v) {
  const unsigned e = v.biased_exponent();
  if (e == 0) return std::ldexp(1.0, -126);
  if (e == 0xFF) return std::numeric_limits<double>::infinity();
  return std::ldexp(1.0, static_cast<int>(e) - Bf16::kExponentBias - Bf16::kMantissaBits);
}

std::uint32_t bf16_ulp_distance(Bf16 a, Bf16 b) {
  // Zero is key 0, the smallest normal is 1; subnormals collapse onto zero.
  auto key = [](Bf16 v) {
    const auto bits = static_cast<std::int32_t>(v.bits & 0x7FFF);
    const std::int32_t magnitude = bits < 0x80 ? 0 : bits - 0x7F;
    return v.sign() ? -magnitude : magnitude;
  };
  const std::int32_t d = key(a) - key(b);
  return static_cast<std::uint32_t>(d < 0 ? -d : d);
}

PackedVec64 PackedVec64::unpack(std::uint64_t word) {
  PackedVec64 v;
  for (std::size_t i = 0; i < 4; ++i) {
    v.lanes[i] = Bf16::from_bits(static_cast<std::uint16_t>(word >> (16 * i)));
  }
  return v;
}

std::uint64_t PackedVec64::pack() const {
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < 4; ++i) word |= std::uint64_t{lanes[i].bits} << (16 * i);
  return word;
}

namespace {

Bf16 apply(SimdOp op, Bf16 a, Bf16 b) {
  switch (op) {
    case SimdOp::kAdd: return bf16_add(a, b);
    case SimdOp::kSub: return bf16_sub(a, b);
    case SimdOp::kMul: return bf16_mul(a, b);
    case SimdOp::kMax: return bf16_max(a, b);
  }
  return Bf16::from_bits(Bf16::kCanonicalNan);
}

}  // namespace

PackedVec64 simd_map2(SimdOp op, const PackedVec64& a, const PackedVec64& b) {
  PackedVec64 out;
  for (std::size_t i = 0; i < 4; ++i) out.lanes[i] = apply(op, a.lanes[i], b.lanes[i]);
  return out;
}

std::string to_hex(Bf16 v) {
  std::ostringstream os;
  os << std::uppercase << std::hex << std::setw(4) << std::setfill('0') << v.bits;
  return os.str();
}

Bf16 bf16_from_hex(const std::string& text) {
  std::string digits = text;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    digits = digits.substr(2);
  }
  if (digits.empty() || digits.size() > 4) {
    throw std::invalid_argument("bf16 hex pattern must have 1-4 digits: '" + text + "'");
  }
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(digits, &used, 16);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != digits.size()) throw std::invalid_argument("not a hex bf16 pattern: '" + text + "'");
  return Bf16::from_bits(static_cast<std::uint16_t>(value));
}

std::ostream& operator<<(std::ostream& os, Bf16 v) { return os << "0x" << to_hex(v); }

}  // namespace bfexp
