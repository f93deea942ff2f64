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

#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "bfexp/expunit.hpp"
#include "test_util.hpp"

using namespace bfexp;
using test::bf;

namespace {
const ExpUnitParams kDefault{};
}

TEST_CASE("quantized constants") {
  CHECK(kDefault.log2e_const() == 47274u);
  CHECK(kDefault.alpha_q() == 14);
  CHECK(kDefault.beta_q() == 28);
  CHECK(kDefault.gamma1_q() == 211);
  CHECK(kDefault.gamma2_q() == 139);
}

TEST_CASE("exps stage on 1.0 and -1.0") {
  // 1.0 * log2(e) = 1.4427 -> 1 + 57/128 at 7 fraction bits.
  const ExpsStageOut pos = exps_stage(bf(0x3F80), kDefault);
  CHECK(pos.special == ExpsStageOut::Special::kNone);
  CHECK(pos.integer_part == 1);
  CHECK(pos.frac7 == 57);
  CHECK(pos.new_biased_exponent == 128);
  // -185/128 splits as -2 + 71/128.
  const ExpsStageOut neg = exps_stage(bf(0xBF80), kDefault);
  CHECK(neg.sign_bit == 0);
  CHECK(neg.integer_part == -2);
  CHECK(neg.frac7 == 71);
  CHECK(neg.new_biased_exponent == 125);
}

TEST_CASE("exps stage specials") {
  using Special = ExpsStageOut::Special;
  CHECK(exps_stage(bf(0x7FC0), kDefault).special == Special::kNan);
  CHECK(exps_stage(bf(0x7F80), kDefault).special == Special::kPosOverflow);
  CHECK(exps_stage(bf(0xFF80), kDefault).special == Special::kNegUnderflow);
  CHECK(exps_stage(bf(0x4300), kDefault).special == Special::kPosOverflow);  // 128, exponent 134
  CHECK(exps_stage(bf(0xC300), kDefault).special == Special::kNegUnderflow);
  CHECK(exps_stage(bf(0x42B0), kDefault).special == Special::kNone);         // 88, exponent 133
}

TEST_CASE("mantissa correction frozen points") {
  // Branch A: (14 * f * (f + 422) + 2048) >> 13.
  CHECK(p_stage(0, kDefault) == 0);
  CHECK(p_stage(32, kDefault) == 25);
  CHECK(p_stage(57, kDefault) == 46);
  // Branch B: 127 - ((28 * (127 - f) * (f + 278) + 4096) >> 13).
  CHECK(p_stage(64, kDefault) == 53);
  CHECK(p_stage(127, kDefault) == 127);
  CHECK(p_stage(100, kDefault) == 127 - (28 * 27 * 378 + 4096) / 8192);

  ExpUnitParams truncating = kDefault;
  truncating.poly_a_bias_eighths = 0;
  truncating.poly_b_bias_eighths = 0;
  CHECK(p_stage(32, truncating) == 24);
  CHECK(p_stage(64, truncating) == 54);

  ExpUnitParams plain = kDefault;
  plain.poly_correction = false;
  for (unsigned f = 0; f < 128; ++f) CHECK(p_stage(f, plain) == f);
}

TEST_CASE("correction is monotone and bounded") {
  unsigned prev = 0;
  for (unsigned f = 0; f < 128; ++f) {
    const unsigned pm = p_stage(f, kDefault);
    CHECK(pm <= 127);
    CHECK(pm >= prev);
    prev = pm;
  }
}

TEST_CASE("exp frozen values") {
  // Values from the rational model in tests/oracle.
  CHECK(exp_bf16(bf(0x0000), kDefault).bits == 0x3F80);
  CHECK(exp_bf16(bf(0x8000), kDefault).bits == 0x3F80);
  CHECK(exp_bf16(bf(0x0001), kDefault).bits == 0x3F80);
  CHECK(exp_bf16(bf(0x3F80), kDefault).bits == 0x402E);  // 2.71875
  CHECK(exp_bf16(bf(0xBF80), kDefault).bits == 0x3EBC);
  CHECK(exp_bf16(bf(0x4000), kDefault).bits == 0x40EC);
  CHECK(exp_bf16(bf(0xC000), kDefault).bits == 0x3E0B);
  CHECK(exp_bf16(bf(0x3F00), kDefault).bits == 0x3FD3);
  CHECK(exp_bf16(bf(0x4120), kDefault).bits == 0x46AD);
  CHECK(exp_bf16(bf(0xC120), kDefault).bits == 0x383E);
  CHECK(exp_bf16(bf(0x42B0), kDefault).bits == 0x7EF8);  // 88
  CHECK(exp_bf16(bf(0x42B2), kDefault).bits == 0x7F80);  // 89 overflows
  CHECK(exp_bf16(bf(0xC2AE), kDefault).bits == 0x00B3);  // -87 stays normal
  CHECK(exp_bf16(bf(0xC2B0), kDefault).bits == 0x0000);  // -88 underflows
}

TEST_CASE("exp specials") {
  CHECK(exp_bf16(bf(0x7F80), kDefault).bits == Bf16::kPosInf);
  CHECK(exp_bf16(bf(0xFF80), kDefault).bits == Bf16::kPosZero);
  CHECK(exp_bf16(bf(0x7FC0), kDefault).bits == Bf16::kCanonicalNan);
  CHECK(exp_bf16(bf(0xFFFF), kDefault).bits == Bf16::kCanonicalNan);
  CHECK(exp_bf16(bf(0x7F81), kDefault).bits == Bf16::kCanonicalNan);
}

TEST_CASE("exp accuracy spot checks") {
  for (double x : {-10.0, -3.5, -1.0, -0.25, 0.125, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const Bf16 in = bf16_from_real(x);
    const double truth = std::exp(in.to_double());
    const double got = exp_bf16(in, kDefault).to_double();
    CAPTURE(x);
    CHECK(std::fabs(got - truth) / truth < 0.0085);
  }
}

TEST_CASE("real-valued approximation tracks exp") {
  for (double x = -20.0; x <= 20.0; x += 0.37) {
    const double truth = std::exp(x);
    CAPTURE(x);
    CHECK(std::fabs(exp_ref_real(x, kDefault) - truth) / truth < 0.01);
  }
  ExpUnitParams plain = kDefault;
  plain.poly_correction = false;
  CHECK(exp_ref_real(0.5 * std::log(2.0), plain) == doctest::Approx(1.5));
}

TEST_CASE("vector form applies the scalar unit per lane") {
  const PackedVec64 v{{bf(0x3F80), bf(0xC120), bf(0x7FC3), bf(0x0000)}};
  const PackedVec64 r = vfexp(v, kDefault);
  for (int i = 0; i < 4; ++i) CHECK(r.lanes[i] == exp_bf16(v.lanes[i], kDefault));
}

TEST_CASE("selection rounding names") {
  for (auto mode : {SelectRounding::kHalfUp, SelectRounding::kTruncate, SelectRounding::kNearestEven}) {
    CHECK(select_rounding_from_string(to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(select_rounding_from_string("up"), std::invalid_argument);
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(kDefault.validate());
  ExpUnitParams p = kDefault;
  p.coeff_frac_bits = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = kDefault;
  p.alpha = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = kDefault;
  p.poly_b_bias_eighths = 8;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = kDefault;
  p.log2e_frac_bits = 4;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("other widths still agree with the independent route") {
  for (int wc : {12, 16, 20}) {
    for (auto mode : {SelectRounding::kTruncate, SelectRounding::kNearestEven}) {
      ExpUnitParams p = kDefault;
      p.log2e_frac_bits = wc;
      p.select_rounding = mode;
      unsigned mismatches = 0;
      for (std::uint32_t b = 0; b <= 0xFFFF; ++b) {
        const Bf16 x = bf(static_cast<std::uint16_t>(b));
        if (exp_bf16(x, p) != exp_ref_fixed(x, p)) ++mismatches;
      }
      CAPTURE(wc);
      CHECK(mismatches == 0);
    }
  }
}
