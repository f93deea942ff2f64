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

#ifndef BFEXP_EXPUNIT_HPP
#define BFEXP_EXPUNIT_HPP

#include <cstdint>
#include <string>

#include "bfexp/bf16.hpp"

namespace bfexp {

/// How the 15 bits kept from the shifted log2(e) product are rounded.
enum class SelectRounding { kHalfUp, kTruncate, kNearestEven };

std::string to_string(SelectRounding mode);
/// Accepts "half-up", "truncate", "nearest-even"; throws std::invalid_argument.
SelectRounding select_rounding_from_string(const std::string& name);

/// Constants of the exponential datapath.
///
/// The polynomial coefficients are quantized to `coeff_frac_bits` fractional
/// bits; the defaults are exact at 6 bits. The two `poly_*_bias_eighths`
/// fields add a rounding bias (in eighths of an output ULP) before the 7-bit
/// result of each polynomial branch is taken. Zero biases give plain
/// truncation.
struct ExpUnitParams {
  double alpha = 0.21875;
  double beta = 0.4375;
  double gamma1 = 3.296875;
  double gamma2 = 2.171875;
  int coeff_frac_bits = 6;

  /// Fractional width of the log2(e) constant.
  int log2e_frac_bits = 15;
  SelectRounding select_rounding = SelectRounding::kHalfUp;

  unsigned poly_a_bias_eighths = 2;
  unsigned poly_b_bias_eighths = 4;
  /// When false the mantissa is the raw fraction (plain Schraudolph).
  bool poly_correction = true;

  int pipeline_latency_cycles = 2;

  static constexpr int kBias = 127;
  static constexpr int kOverflowExpThreshold = 133;
  static constexpr int kFracBits = 7;
  static constexpr int kSelectBits = 15;

  /// round(log2(e) * 2^log2e_frac_bits).
  std::uint64_t log2e_const() const;
  std::int64_t alpha_q() const;
  std::int64_t beta_q() const;
  std::int64_t gamma1_q() const;
  std::int64_t gamma2_q() const;

  /// Throws std::invalid_argument when a field is outside the supported range.
  void validate() const;
};

/// Output of the Schraudolph stage. `frac7` and `integer_part` are only
/// meaningful when `special == kNone`.
struct ExpsStageOut {
  enum class Special { kNone, kPosOverflow, kNegUnderflow, kNan };

  /// Sign of the result, always 0.
  unsigned sign_bit = 0;
  unsigned new_biased_exponent = 0;
  int integer_part = 0;
  unsigned frac7 = 0;
  Special special = Special::kNone;
};

ExpsStageOut exps_stage(Bf16 x, const ExpUnitParams& p);

/// Mantissa correction: 7-bit fraction in, 7-bit approximation of 2^f - 1 out.
unsigned p_stage(unsigned frac7, const ExpUnitParams& p);

/// Bit-exact model of one exponentiation lane.
Bf16 exp_bf16(Bf16 x, const ExpUnitParams& p);

/// Four lanes, as issued by one packed instruction.
PackedVec64 vfexp(const PackedVec64& v, const ExpUnitParams& p);

/// Real-arithmetic form of the approximation, using unquantized coefficients
/// and not(t) = 1 - 2^-7 - t. For sanity checks only.
double exp_ref_real(double x, const ExpUnitParams& p);

/// Independent reference of exp_bf16, computed on exact binary64 values
/// instead of the integer shift pipeline.
Bf16 exp_ref_fixed(Bf16 x, const ExpUnitParams& p);

}  // namespace bfexp

#endif  // BFEXP_EXPUNIT_HPP
