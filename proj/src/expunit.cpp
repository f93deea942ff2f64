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

#include "bfexp/expunit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfexp {

namespace {

std::int64_t quantize(double value, int frac_bits) {
  return static_cast<std::int64_t>(std::llround(std::ldexp(value, frac_bits)));
}

}  // namespace

std::string to_string(SelectRounding mode) {
  switch (mode) {
    case SelectRounding::kHalfUp: return "half-up";
    case SelectRounding::kTruncate: return "truncate";
    case SelectRounding::kNearestEven: return "nearest-even";
  }
  return "unknown";
}

SelectRounding select_rounding_from_string(const std::string& name) {
  if (name == "half-up") return SelectRounding::kHalfUp;
  if (name == "truncate") return SelectRounding::kTruncate;
  if (name == "nearest-even") return SelectRounding::kNearestEven;
  throw std::invalid_argument("unknown rounding mode '" + name + "'");
}

std::uint64_t ExpUnitParams::log2e_const() const {
  return static_cast<std::uint64_t>(quantize(1.4426950408889634, log2e_frac_bits));
}

std::int64_t ExpUnitParams::alpha_q() const { return quantize(alpha, coeff_frac_bits); }
std::int64_t ExpUnitParams::beta_q() const { return quantize(beta, coeff_frac_bits); }
std::int64_t ExpUnitParams::gamma1_q() const { return quantize(gamma1, coeff_frac_bits); }
std::int64_t ExpUnitParams::gamma2_q() const { return quantize(gamma2, coeff_frac_bits); }

void ExpUnitParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
  };
  require(coeff_frac_bits >= 1 && coeff_frac_bits <= kFracBits, "coeff_frac_bits must be in [1, 7]");
  require(log2e_frac_bits >= 8 && log2e_frac_bits <= 40, "log2e_frac_bits must be in [8, 40]");
  for (double c : {alpha, beta, gamma1, gamma2}) {
    require(std::isfinite(c) && c >= 0.0 && c < 16.0, "polynomial coefficients must be in [0, 16)");
  }
  require(poly_a_bias_eighths < 8 && poly_b_bias_eighths < 8, "polynomial rounding bias must be < 8 eighths");
  require(pipeline_latency_cycles >= 1, "pipeline latency must be >= 1 cycle");
}

ExpsStageOut exps_stage(Bf16 x, const ExpUnitParams& p) {
  using Special = ExpsStageOut::Special;
  ExpsStageOut out;
  const unsigned sign = x.sign();
  const unsigned e = x.biased_exponent();

  if (x.is_nan()) {
    out.special = Special::kNan;
    return out;
  }
  if (e == 0) {
    // ±0 and flushed subnormals: exp(0) = 1.
    out.new_biased_exponent = ExpUnitParams::kBias;
    return out;
  }
  if (e == 0xFF || e > static_cast<unsigned>(ExpUnitParams::kOverflowExpThreshold)) {
    out.special = sign ? Special::kNegUnderflow : Special::kPosOverflow;
    return out;
  }

  // significand * log2(e) has 7 + W fractional bits and is scaled by
  // 2^(e - 127). Keeping 7 fractional bits of x' means shifting right by the
  // distance to the overflow exponent plus the constant's excess width.
  const std::uint64_t significand = 0x80u | x.mantissa();
  const std::uint64_t product = significand * p.log2e_const();
  const int shift = (ExpUnitParams::kOverflowExpThreshold - static_cast<int>(e)) +
                    (p.log2e_frac_bits + ExpUnitParams::kBias - ExpUnitParams::kOverflowExpThreshold);

  std::uint64_t selected = 0;
  if (shift < 64) {
    const std::uint64_t kept = product >> shift;
    const std::uint64_t dropped = product & ((std::uint64_t{1} << shift) - 1);
    const std::uint64_t half = std::uint64_t{1} << (shift - 1);
    switch (p.select_rounding) {
      case SelectRounding::kHalfUp:
        selected = kept + (dropped >= half ? 1 : 0);
        break;
      case SelectRounding::kTruncate:
        selected = kept;
        break;
      case SelectRounding::kNearestEven:
        selected = kept + ((dropped > half || (dropped == half && (kept & 1))) ? 1 : 0);
        break;
    }
  }
  selected &= (std::uint64_t{1} << ExpUnitParams::kSelectBits) - 1;

  // Two's complement with floor split keeps the fraction in [0, 1).
  const std::int32_t fixed = sign ? -static_cast<std::int32_t>(selected) : static_cast<std::int32_t>(selected);
  const std::int32_t k = fixed >> ExpUnitParams::kFracBits;
  const auto frac = static_cast<unsigned>(fixed & ((1 << ExpUnitParams::kFracBits) - 1));
  const std::int32_t new_exponent = ExpUnitParams::kBias + k;

  if (new_exponent >= 0xFF) {
    out.special = Special::kPosOverflow;
    return out;
  }
  if (new_exponent <= 0) {
    out.special = Special::kNegUnderflow;
    return out;
  }
  out.new_biased_exponent = static_cast<unsigned>(new_exponent);
  out.integer_part = k;
  out.frac7 = frac;
  return out;
}

unsigned p_stage(unsigned frac7, const ExpUnitParams& p) {
  constexpr int kF = ExpUnitParams::kFracBits;
  constexpr std::int64_t kMax = (1 << kF) - 1;
  frac7 &= kMax;
  if (!p.poly_correction) return frac7;

  // Products carry coeff_frac_bits + 2*7 fractional bits; dropping
  // coeff_frac_bits + 7 of them leaves the 7-bit mantissa.
  const int align = kF - p.coeff_frac_bits;
  const int drop = p.coeff_frac_bits + kF;
  const auto f = static_cast<std::int64_t>(frac7);

  if ((frac7 & (1u << (kF - 1))) == 0) {
    const std::int64_t product = p.alpha_q() * f * (f + (p.gamma1_q() << align));
    const std::int64_t bias = static_cast<std::int64_t>(p.poly_a_bias_eighths) << (drop - 3);
    return static_cast<unsigned>(std::clamp<std::int64_t>((product + bias) >> drop, 0, kMax));
  }
  const std::int64_t not_f = kMax - f;
  const std::int64_t product = p.beta_q() * not_f * (f + (p.gamma2_q() << align));
  const std::int64_t bias = static_cast<std::int64_t>(p.poly_b_bias_eighths) << (drop - 3);
  const std::int64_t rounded = std::clamp<std::int64_t>((product + bias) >> drop, 0, kMax);
  return static_cast<unsigned>(kMax - rounded);
}

Bf16 exp_bf16(Bf16 x, const ExpUnitParams& p) {
  const ExpsStageOut s = exps_stage(x, p);
  switch (s.special) {
    case ExpsStageOut::Special::kNan: return Bf16::from_bits(Bf16::kCanonicalNan);
    case ExpsStageOut::Special::kPosOverflow: return Bf16::from_bits(Bf16::kPosInf);
    case ExpsStageOut::Special::kNegUnderflow: return Bf16::from_bits(Bf16::kPosZero);
    case ExpsStageOut::Special::kNone: break;
  }
  const unsigned mantissa = p_stage(s.frac7, p);
  return Bf16::from_bits(static_cast<std::uint16_t>((s.sign_bit << 15) | (s.new_biased_exponent << 7) | mantissa));
}

PackedVec64 vfexp(const PackedVec64& v, const ExpUnitParams& p) {
  PackedVec64 out;
  for (std::size_t i = 0; i < 4; ++i) out.lanes[i] = exp_bf16(v.lanes[i], p);
  return out;
}

double exp_ref_real(double x, const ExpUnitParams& p) {
  const double scaled = x / std::log(2.0);
  const double k = std::floor(scaled);
  const double f = scaled - k;
  double correction = f;
  if (p.poly_correction) {
    if (f < 0.5) {
      correction = p.alpha * f * (f + p.gamma1);
    } else {
      const double ulp = std::ldexp(1.0, -ExpUnitParams::kFracBits);
      const double inner = p.beta * (1.0 - ulp - f) * (f + p.gamma2);
      correction = 1.0 - ulp - inner;
    }
  }
  return std::ldexp(1.0 + correction, static_cast<int>(k));
}

Bf16 exp_ref_fixed(Bf16 x, const ExpUnitParams& p) {
  const double value = x.to_double();
  if (std::isnan(value)) return Bf16::from_bits(Bf16::kCanonicalNan);
  if (value == 0.0) return Bf16::from_bits(Bf16::kOne);
  // Biased exponent above 133 means |x| >= 2^7.
  if (std::fabs(value) >= 128.0) {
    return Bf16::from_bits(value > 0 ? Bf16::kPosInf : Bf16::kPosZero);
  }

  // Every quantity below is a dyadic rational small enough to be exact in
  // binary64, so the arithmetic is exact apart from the explicit roundings.
  const double log2e = std::nearbyint(std::ldexp(1.0 / std::log(2.0), p.log2e_frac_bits));
  const double magnitude = std::ldexp(std::fabs(value) * log2e, ExpUnitParams::kFracBits - p.log2e_frac_bits);
  double q = 0.0;
  switch (p.select_rounding) {
    case SelectRounding::kHalfUp: q = std::floor(magnitude + 0.5); break;
    case SelectRounding::kTruncate: q = std::floor(magnitude); break;
    case SelectRounding::kNearestEven: q = std::nearbyint(magnitude); break;
  }
  const double signed_q = value < 0 ? -q : q;
  const double k = std::floor(signed_q / 128.0);
  const double frac = signed_q / 128.0 - k;

  if (127.0 + k >= 255.0) return Bf16::from_bits(Bf16::kPosInf);
  if (127.0 + k <= 0.0) return Bf16::from_bits(Bf16::kPosZero);

  auto coeff = [&](double c) { return std::ldexp(std::nearbyint(std::ldexp(c, p.coeff_frac_bits)), -p.coeff_frac_bits); };
  double mant = frac * 128.0;
  if (p.poly_correction) {
    if (frac < 0.5) {
      const double poly = coeff(p.alpha) * frac * (frac + coeff(p.gamma1));
      mant = std::min(127.0, std::floor(poly * 128.0 + p.poly_a_bias_eighths / 8.0));
    } else {
      const double complement = 1.0 - 1.0 / 128.0 - frac;
      const double poly = coeff(p.beta) * complement * (frac + coeff(p.gamma2));
      mant = 127.0 - std::min(127.0, std::floor(poly * 128.0 + p.poly_b_bias_eighths / 8.0));
    }
  }
  return bf16_from_real(std::ldexp(1.0 + mant / 128.0, static_cast<int>(k)));
}

}  // namespace bfexp
