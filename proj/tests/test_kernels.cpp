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
#include <numeric>
#include <stdexcept>

#include "doctest.h"

#include "bfexp/kernels.hpp"
#include "test_util.hpp"

using namespace bfexp;
using test::bf;

namespace {

const ExpUnitParams kP{};

Matrix random_matrix(CounterRng& rng, std::size_t r, std::size_t c) {
  Matrix m(r, c);
  for (auto& v : m.data) v = bf16_from_real(rng.normal());
  return m;
}

}  // namespace

TEST_CASE("reference softmax closed forms") {
  const std::vector<double> uniform{7.5, 7.5, 7.5, 7.5};
  for (double y : softmax_reference(uniform)) CHECK(y == 0.25);
  CHECK(softmax_reference(std::vector<double>{-3.0})[0] == 1.0);
  const auto y = softmax_reference(std::vector<double>{0.0, std::log(2.0)});
  CHECK(y[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(y[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(softmax_reference(std::vector<double>{}), ShapeError);
}

TEST_CASE("optimized softmax closed forms") {
  for (auto acc : {AccumMode::kFaithful, AccumMode::kWide}) {
    const std::vector<Bf16> row(4, bf16_from_real(-1.75));
    const auto y = softmax_optimized(row, kP, acc);
    for (Bf16 v : y) CHECK(v.bits == bf16_from_real(0.25).bits);
    CHECK(softmax_optimized(std::vector<Bf16>{bf(0x4120)}, kP, acc)[0].bits == Bf16::kOne);
    const std::vector<Bf16> three(3, bf(0x3F80));
    for (Bf16 v : softmax_optimized(three, kP, acc)) CHECK(v == bf16_from_real(1.0 / 3.0));
    CHECK_THROWS_AS(softmax_optimized(std::vector<Bf16>{}, kP, acc), ShapeError);
  }
}

TEST_CASE("optimized softmax handles the scalar tail") {
  CounterRng rng(11);
  for (std::size_t n : {1u, 2u, 3u, 5u, 6u, 7u, 9u, 13u}) {
    const auto row = test::normal_row(rng, n);
    const auto ref = softmax_reference(test::widen(row));
    const auto y = softmax_optimized(row, kP, AccumMode::kFaithful);
    REQUIRE(y.size() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(y[i].to_double() >= 0.0);
      CHECK(y[i].to_double() <= 1.0);
      CHECK(std::fabs(y[i].to_double() - ref[i]) < 0.02);
    }
  }
}

TEST_CASE("baseline softmax") {
  const std::vector<Bf16> two(2, bf(0xC0A0));
  for (Bf16 v : softmax_baseline(two)) CHECK(bf16_ulp_distance(v, bf(0x3F00)) <= 1);
  const auto y = softmax_baseline(std::vector<Bf16>{bf(0x0000), bf16_from_real(std::log(2.0))});
  CHECK(y[0] == bf16_from_real(1.0 / 3.0));
  CHECK(y[1] == bf16_from_real(2.0 / 3.0));
  CHECK_THROWS_AS(softmax_baseline(std::vector<Bf16>{}), ShapeError);

  CounterRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto row = test::normal_row(rng, 64);
    const auto ref = softmax_reference(test::widen(row));
    const auto out = softmax_baseline(row);
    for (std::size_t i = 0; i < row.size(); ++i) {
      // Output rounding plus the binary32 summation error.
      CHECK(std::fabs(out[i].to_double() - ref[i]) <= 0x1.0p-8 + 64 * 0x1.0p-24);
    }
  }
}

TEST_CASE("partial softmax first block") {
  const std::vector<Bf16> block{bf(0x3F80), bf(0x4000), bf(0xBF80)};
  const PartialSoftmaxResult r = partial_softmax_update(RowStats{}, block, kP, AccumMode::kFaithful);
  CHECK(r.rescale.bits == Bf16::kPosZero);
  CHECK(r.stats.m.bits == 0x4000);
  CHECK(r.weights[1].bits == Bf16::kOne);
  CHECK(r.weights[0] == exp_bf16(bf16_sub(block[0], block[1]), kP));
  CHECK(r.stats.l > 0.0f);
  CHECK_THROWS_AS(partial_softmax_update(RowStats{}, std::vector<Bf16>{}, kP, AccumMode::kWide), ShapeError);
}

TEST_CASE("partial softmax of an all -inf block keeps the state") {
  const std::vector<Bf16> block(3, bf(Bf16::kNegInf));
  const PartialSoftmaxResult r = partial_softmax_update(RowStats{}, block, kP, AccumMode::kFaithful);
  CHECK(r.stats.l == 0.0f);
  for (Bf16 w : r.weights) CHECK(w.bits == Bf16::kPosZero);
}

TEST_CASE("one block equals the monolithic kernel bit for bit") {
  CounterRng rng(3);
  for (auto acc : {AccumMode::kFaithful, AccumMode::kWide}) {
    for (std::size_t n : {1u, 4u, 17u, 64u, 255u}) {
      const auto row = test::normal_row(rng, n, 2.0);
      const PartialSoftmaxResult r = partial_softmax_update(RowStats{}, row, kP, acc);
      CHECK(normalize_weights(r.weights, r.stats.l, acc) == softmax_optimized(row, kP, acc));
    }
  }
}

TEST_CASE("gemm") {
  CounterRng rng(9);
  const Matrix a = random_matrix(rng, 5, 6);
  Matrix eye(6, 6);
  for (std::size_t i = 0; i < 6; ++i) eye.at(i, i) = bf(Bf16::kOne);
  CHECK(gemm_bf16(a, eye) == a);

  Matrix x(1, 1);
  Matrix y(1, 1);
  x.at(0, 0) = bf(0x3FC0);
  y.at(0, 0) = bf(0xC0A0);
  CHECK(gemm_bf16(x, y).at(0, 0) == bf16_mul(x.at(0, 0), y.at(0, 0)));

  const Matrix p = random_matrix(rng, 8, 8);
  const Matrix q = random_matrix(rng, 8, 8);
  const Matrix c = gemm_bf16(p, q);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      long double exact = 0.0L;
      for (std::size_t k = 0; k < 8; ++k) {
        exact += static_cast<long double>(p.at(i, k).to_double()) * q.at(k, j).to_double();
      }
      CHECK(bf16_ulp_distance(c.at(i, j), bf16_from_real(static_cast<double>(exact))) <= 1);
    }
  }
  CHECK_THROWS_AS(gemm_bf16(random_matrix(rng, 2, 3), random_matrix(rng, 2, 3)), ShapeError);
  CHECK(transpose(transpose(p)) == p);
}

TEST_CASE("attention config") {
  const auto cfg = AttentionConfig::make(16, 16, 64, 8, 8);
  CHECK(cfg.scale == 0.125);
  AttentionConfig bad = cfg;
  bad.tile_kv = 0;
  CHECK_THROWS_AS(bad.validate(), ShapeError);
  bad = cfg;
  bad.scale = -1.0;
  CHECK_THROWS_AS(bad.validate(), ShapeError);
  CHECK(accum_mode_from_string(to_string(AccumMode::kWide)) == AccumMode::kWide);
  CHECK(accum_mode_from_string("faithful") == AccumMode::kFaithful);
  CHECK_THROWS_AS(accum_mode_from_string("double"), std::invalid_argument);
}

TEST_CASE("attention with a single key returns V") {
  CounterRng rng(21);
  const Matrix q = random_matrix(rng, 12, 8);
  const Matrix k = random_matrix(rng, 1, 8);
  const Matrix v = random_matrix(rng, 1, 8);
  for (auto acc : {AccumMode::kFaithful, AccumMode::kWide}) {
    const Matrix o = flash_attention_2(q, k, v, AttentionConfig::make(12, 1, 8, 4, 1), kP, acc);
    for (std::size_t r = 0; r < o.rows; ++r) CHECK(std::equal(o.row(r).begin(), o.row(r).end(), v.row(0).begin()));
  }
}

TEST_CASE("identical keys average V") {
  CounterRng rng(22);
  const Matrix q = random_matrix(rng, 8, 4);
  Matrix k(16, 4);
  const Matrix k_row = random_matrix(rng, 1, 4);
  for (std::size_t r = 0; r < 16; ++r) std::copy(k_row.data.begin(), k_row.data.end(), k.row(r).begin());
  const Matrix v = random_matrix(rng, 16, 4);
  const Matrix o = flash_attention_2(q, k, v, AttentionConfig::make(8, 16, 4, 4, 4), kP, AccumMode::kWide);
  for (std::size_t c = 0; c < 4; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < 16; ++r) mean += v.at(r, c).to_double();
    mean /= 16.0;
    for (std::size_t r = 0; r < 8; ++r) CHECK(std::fabs(o.at(r, c).to_double() - mean) <= 0x1.0p-7);
  }
}

TEST_CASE("attention matches the reference") {
  CounterRng rng(23);
  const Matrix q = random_matrix(rng, 32, 8);
  const Matrix k = random_matrix(rng, 32, 8);
  const Matrix v = random_matrix(rng, 32, 8);
  const RealMatrix ref = attention_reference(q, k, v, 1.0 / std::sqrt(8.0));
  double ref_max = 0.0;
  for (double x : ref.data) ref_max = std::max(ref_max, std::fabs(x));
  for (std::size_t tile : {5u, 8u, 12u, 32u, 64u}) {
    const Matrix o = flash_attention_2(q, k, v, AttentionConfig::make(32, 32, 8, 8, tile), kP, AccumMode::kWide);
    double worst = 0.0;
    for (std::size_t i = 0; i < o.data.size(); ++i) {
      worst = std::max(worst, std::fabs(o.data[i].to_double() - ref.data[i]) / ref_max);
    }
    CAPTURE(tile);
    CHECK(worst < 0.02);
  }
}

TEST_CASE("attention shape errors") {
  CounterRng rng(24);
  const Matrix q = random_matrix(rng, 4, 8);
  const Matrix k = random_matrix(rng, 4, 8);
  const Matrix v = random_matrix(rng, 3, 8);
  CHECK_THROWS_AS(flash_attention_2(q, k, v, AttentionConfig::make(4, 4, 8, 2, 2), kP, AccumMode::kWide),
                  ShapeError);
  CHECK_THROWS_AS(flash_attention_2(q, k, k, AttentionConfig::make(4, 4, 6, 2, 2), kP, AccumMode::kWide),
                  ShapeError);
}
