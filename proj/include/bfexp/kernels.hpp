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

#ifndef BFEXP_KERNELS_HPP
#define BFEXP_KERNELS_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfexp/bf16.hpp"
#include "bfexp/expunit.hpp"

namespace bfexp {

/// Raised for empty rows and mismatched matrix shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Row-major bf16 matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Bf16> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Bf16& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  Bf16 at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::span<Bf16> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const Bf16> row(std::size_t r) const { return {data.data() + r * cols, cols}; }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
  }
};

/// Real-valued row-major matrix for references.
struct RealMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

enum class AccumMode {
  /// Four bf16 lane accumulators with a final pairwise reduction.
  kFaithful,
  /// binary32 accumulation.
  kWide,
};

std::string to_string(AccumMode mode);
AccumMode accum_mode_from_string(const std::string& name);

/// Running statistics of an online softmax row.
struct RowStats {
  Bf16 m = Bf16::from_bits(Bf16::kNegInf);
  /// Holds bf16 values in faithful mode.
  float l = 0.0f;
};

struct AttentionConfig {
  std::size_t seq_len_q = 0;
  std::size_t seq_len_kv = 0;
  std::size_t head_dim = 0;
  std::size_t tile_q = 0;
  std::size_t tile_kv = 0;
  double scale = 0.0;

  /// Scale defaults to 1/sqrt(head_dim).
  static AttentionConfig make(std::size_t lq, std::size_t lkv, std::size_t d, std::size_t tq, std::size_t tkv);
  void validate() const;
};

// Softmax ---------------------------------------------------------------------

/// exp(x - max) / sum in binary64. Throws ShapeError on an empty row.
std::vector<double> softmax_reference(std::span<const double> row);

/// MAX / EXP / NORM phases built from packed vfmax, vfsub, vfexp, vfadd and
/// vfmul, with a scalar tail for lengths not divisible by four.
std::vector<Bf16> softmax_optimized(std::span<const Bf16> row, const ExpUnitParams& p, AccumMode acc);

/// Scalar kernel with a correctly rounded exponential and per-element division.
std::vector<Bf16> softmax_baseline(std::span<const Bf16> row);

struct PartialSoftmaxResult {
  RowStats stats;
  std::vector<Bf16> weights;
  Bf16 rescale;
};

/// Folds one block into the running statistics. The returned weights are
/// exp(block - m') and `rescale` = exp(m - m') is the factor previous partial
/// sums must be multiplied by.
PartialSoftmaxResult partial_softmax_update(const RowStats& stats, std::span<const Bf16> block,
                                            const ExpUnitParams& p, AccumMode acc);

/// Divides weights by the final running sum (reciprocal, then multiply).
std::vector<Bf16> normalize_weights(std::span<const Bf16> weights, float sum, AccumMode acc);

// Attention -------------------------------------------------------------------

/// A * B with binary64 accumulation, rounded once to bf16.
Matrix gemm_bf16(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);

/// Tiled attention with the online softmax; the output accumulator is
/// rescaled and then incremented for every KV tile. The output accumulator
/// is binary32 in both modes (it continues the P*V dot products across
/// tiles); `acc` selects the precision of the running sum and the final
/// normalization.
Matrix flash_attention_2(const Matrix& q, const Matrix& k, const Matrix& v, const AttentionConfig& cfg,
                         const ExpUnitParams& p, AccumMode acc);

/// softmax(scale * Q K^T) V on the exact bf16 inputs, in long double.
RealMatrix attention_reference(const Matrix& q, const Matrix& k, const Matrix& v, double scale);

}  // namespace bfexp

#endif  // BFEXP_KERNELS_HPP
