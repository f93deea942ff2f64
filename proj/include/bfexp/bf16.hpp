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

#ifndef BFEXP_BF16_HPP
#define BFEXP_BF16_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace bfexp {

/// A bfloat16 value carried as its raw bit pattern.
///
/// Layout: 1 sign bit, 8 exponent bits (bias 127), 7 mantissa bits. The type
/// is a plain value wrapper; all arithmetic lives in free functions below and
/// follows the flush-to-zero model (subnormal inputs read as signed zero,
/// subnormal results are flushed).
struct Bf16 {
  std::uint16_t bits = 0;

  static constexpr int kExponentBias = 127;
  static constexpr int kMantissaBits = 7;
  static constexpr std::uint16_t kSignMask = 0x8000;
  static constexpr std::uint16_t kExponentMask = 0x7F80;
  static constexpr std::uint16_t kMantissaMask = 0x007F;

  static constexpr std::uint16_t kPosZero = 0x0000;
  static constexpr std::uint16_t kNegZero = 0x8000;
  static constexpr std::uint16_t kOne = 0x3F80;
  static constexpr std::uint16_t kPosInf = 0x7F80;
  static constexpr std::uint16_t kNegInf = 0xFF80;
  static constexpr std::uint16_t kCanonicalNan = 0x7FC0;

  static constexpr Bf16 from_bits(std::uint16_t b) { return Bf16{b}; }

  constexpr unsigned sign() const { return bits >> 15; }
  constexpr unsigned biased_exponent() const { return (bits >> 7) & 0xFF; }
  constexpr unsigned mantissa() const { return bits & kMantissaMask; }

  constexpr bool is_nan() const { return biased_exponent() == 0xFF && mantissa() != 0; }
  constexpr bool is_inf() const { return biased_exponent() == 0xFF && mantissa() == 0; }
  constexpr bool is_finite() const { return biased_exponent() != 0xFF; }
  constexpr bool is_subnormal() const { return biased_exponent() == 0 && mantissa() != 0; }
  /// True for ±0 and for subnormals, which read as zero.
  constexpr bool is_zero_like() const { return biased_exponent() == 0; }

  /// Exact value as binary64. Subnormals decode to signed zero.
  double to_double() const;
  float to_float() const { return static_cast<float>(to_double()); }

  friend constexpr bool operator==(Bf16 a, Bf16 b) { return a.bits == b.bits; }
};

/// Nearest bf16 under round-to-nearest-even. Magnitudes below 2^-126 after
/// rounding flush to signed zero, overflow saturates to ±inf and every NaN
/// becomes the canonical NaN.
Bf16 bf16_from_real(double x);

Bf16 bf16_add(Bf16 a, Bf16 b);
Bf16 bf16_sub(Bf16 a, Bf16 b);
Bf16 bf16_mul(Bf16 a, Bf16 b);
/// IEEE maximumNumber: a single NaN operand is ignored, max(+0, -0) = +0.
Bf16 bf16_max(Bf16 a, Bf16 b);
Bf16 bf16_recip(Bf16 a);

/// Total order on the real line for non-NaN values (+0 and -0 compare equal).
bool bf16_less(Bf16 a, Bf16 b);

/// Gap between |v| and the next larger bf16 magnitude, as a real.
double bf16_ulp(Bf16 v);

/// Number of representable bf16 steps between two non-NaN values (±0 count
/// as one point).
std::uint32_t bf16_ulp_distance(Bf16 a, Bf16 b);

/// Four bf16 lanes in one 64-bit word; lane 0 occupies bits [15:0].
struct PackedVec64 {
  std::array<Bf16, 4> lanes{};

  static PackedVec64 unpack(std::uint64_t word);
  std::uint64_t pack() const;
  static PackedVec64 broadcast(Bf16 v) { return PackedVec64{{v, v, v, v}}; }

  friend bool operator==(const PackedVec64& a, const PackedVec64& b) {
    return a.lanes == b.lanes;
  }
};

enum class SimdOp { kAdd, kSub, kMul, kMax };

PackedVec64 simd_map2(SimdOp op, const PackedVec64& a, const PackedVec64& b);

inline PackedVec64 vfadd(const PackedVec64& a, const PackedVec64& b) {
  return simd_map2(SimdOp::kAdd, a, b);
}
inline PackedVec64 vfsub(const PackedVec64& a, const PackedVec64& b) {
  return simd_map2(SimdOp::kSub, a, b);
}
inline PackedVec64 vfmul(const PackedVec64& a, const PackedVec64& b) {
  return simd_map2(SimdOp::kMul, a, b);
}
inline PackedVec64 vfmax(const PackedVec64& a, const PackedVec64& b) {
  return simd_map2(SimdOp::kMax, a, b);
}

/// Four uppercase hex digits, e.g. "3F80".
std::string to_hex(Bf16 v);
/// Parses 1-4 hex digits with optional 0x prefix; throws std::invalid_argument.
Bf16 bf16_from_hex(const std::string& text);

std::ostream& operator<<(std::ostream& os, Bf16 v);

}  // namespace bfexp

#endif  // BFEXP_BF16_HPP
