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

#include "bfexp/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bfexp {

std::string to_string(AccumMode mode) { return mode == AccumMode::kFaithful ? "faithful" : "wide"; }

AccumMode accum_mode_from_string(const std::string& name) {
  if (name == "faithful") return AccumMode::kFaithful;
  if (name == "wide") return AccumMode::kWide;
  throw std::invalid_argument("unknown accumulation mode '" + name + "'");
}

AttentionConfig AttentionConfig::make(std::size_t lq, std::size_t lkv, std::size_t d, std::size_t tq,
                                      std::size_t tkv) {
  AttentionConfig cfg;
  cfg.seq_len_q = lq;
  cfg.seq_len_kv = lkv;
  cfg.head_dim = d;
  cfg.tile_q = tq;
  cfg.tile_kv = tkv;
  cfg.scale = d > 0 ? 1.0 / std::sqrt(static_cast<double>(d)) : 0.0;
  return cfg;
}

void AttentionConfig::validate() const {
  if (seq_len_q == 0 || seq_len_kv == 0 || head_dim == 0) throw ShapeError("attention dimensions must be positive");
  if (tile_q == 0 || tile_kv == 0) throw ShapeError("tile sizes must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ShapeError("attention scale must be positive");
}

namespace {

constexpr std::size_t kLanes = 4;

Bf16 neg_inf() { return Bf16::from_bits(Bf16::kNegInf); }
Bf16 pos_zero() { return Bf16::from_bits(Bf16::kPosZero); }

PackedVec64 load_group(std::span<const Bf16> row, std::size_t offset) {
  PackedVec64 v;
  for (std::size_t i = 0; i < kLanes; ++i) v.lanes[i] = row[offset + i];
  return v;
}

void store_group(std::span<Bf16> out, std::size_t offset, const PackedVec64& v) {
  for (std::size_t i = 0; i < kLanes; ++i) out[offset + i] = v.lanes[i];
}

// MAX phase: packed max over whole groups, scalar max over the tail, then
// a pairwise horizontal reduction.
Bf16 max_phase(std::span<const Bf16> row) {
  const std::size_t body = row.size() / kLanes * kLanes;
  PackedVec64 acc = PackedVec64::broadcast(neg_inf());
  for (std::size_t i = 0; i < body; i += kLanes) acc = vfmax(acc, load_group(row, i));
  Bf16 tail = neg_inf();
  for (std::size_t i = body; i < row.size(); ++i) tail = bf16_max(tail, row[i]);
  const Bf16 lanes = bf16_max(bf16_max(acc.lanes[0], acc.lanes[1]), bf16_max(acc.lanes[2], acc.lanes[3]));
  return bf16_max(lanes, tail);
}

// EXP phase: weights[i] = exp(row[i] - max); returns the sum, which is a
// bf16 value in faithful mode.
float exp_phase(std::span<const Bf16> row, Bf16 max, const ExpUnitParams& p, AccumMode acc,
                std::span<Bf16> weights) {
  const std::size_t body = row.size() / kLanes * kLanes;
  const PackedVec64 max_vec = PackedVec64::broadcast(max);

  if (acc == AccumMode::kFaithful) {
    PackedVec64 sums = PackedVec64::broadcast(pos_zero());
    for (std::size_t i = 0; i < body; i += kLanes) {
      const PackedVec64 e = vfexp(vfsub(load_group(row, i), max_vec), p);
      store_group(weights, i, e);
      sums = vfadd(sums, e);
    }
    Bf16 tail = pos_zero();
    for (std::size_t i = body; i < row.size(); ++i) {
      weights[i] = exp_bf16(bf16_sub(row[i], max), p);
      tail = bf16_add(tail, weights[i]);
    }
    const Bf16 total =
        bf16_add(bf16_add(bf16_add(sums.lanes[0], sums.lanes[1]), bf16_add(sums.lanes[2], sums.lanes[3])), tail);
    return total.to_float();
  }

  std::array<float, kLanes> sums{};
  for (std::size_t i = 0; i < body; i += kLanes) {
    const PackedVec64 e = vfexp(vfsub(load_group(row, i), max_vec), p);
    store_group(weights, i, e);
    for (std::size_t l = 0; l < kLanes; ++l) sums[l] += e.lanes[l].to_float();
  }
  float tail = 0.0f;
  for (std::size_t i = body; i < row.size(); ++i) {
    weights[i] = exp_bf16(bf16_sub(row[i], max), p);
    tail += weights[i].to_float();
  }
  return ((sums[0] + sums[1]) + (sums[2] + sums[3])) + tail;
}

}  // namespace

std::vector<double> softmax_reference(std::span<const double> row) {
  if (row.empty()) throw ShapeError("softmax of an empty row");
  const long double max = *std::max_element(row.begin(), row.end());
  std::vector<long double> e(row.size());
  long double sum = 0.0L;
  for (std::size_t i = 0; i < row.size(); ++i) {
    e[i] = std::exp(static_cast<long double>(row[i]) - max);
    sum += e[i];
  }
  std::vector<double> out(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out[i] = static_cast<double>(e[i] / sum);
  return out;
}

std::vector<Bf16> normalize_weights(std::span<const Bf16> weights, float sum, AccumMode acc) {
  std::vector<Bf16> out(weights.size());
  if (acc == AccumMode::kFaithful) {
    const Bf16 r = bf16_recip(bf16_from_real(sum));
    const PackedVec64 r_vec = PackedVec64::broadcast(r);
    const std::size_t body = weights.size() / kLanes * kLanes;
    for (std::size_t i = 0; i < body; i += kLanes) store_group(out, i, vfmul(load_group(weights, i), r_vec));
    for (std::size_t i = body; i < weights.size(); ++i) out[i] = bf16_mul(weights[i], r);
    return out;
  }
  const float r = 1.0f / sum;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = bf16_from_real(static_cast<double>(weights[i].to_float() * r));
  }
  return out;
}

std::vector<Bf16> softmax_optimized(std::span<const Bf16> row, const ExpUnitParams& p, AccumMode acc) {
  if (row.empty()) throw ShapeError("softmax of an empty row");
  const Bf16 max = max_phase(row);
  std::vector<Bf16> weights(row.size());
  const float sum = exp_phase(row, max, p, acc, weights);
  return normalize_weights(weights, sum, acc);
}

std::vector<Bf16> softmax_baseline(std::span<const Bf16> row) {
  if (row.empty()) throw ShapeError("softmax of an empty row");
  Bf16 max = neg_inf();
  for (Bf16 x : row) {
    if (bf16_less(max, x)) max = x;
  }
  std::vector<Bf16> y(row.size());
  float sum = 0.0f;
  for (std::size_t i = 0; i < row.size(); ++i) {
    const long double d = bf16_sub(row[i], max).to_double();
    y[i] = bf16_from_real(static_cast<double>(std::exp(d)));
    sum += y[i].to_float();
  }
  for (auto& v : y) v = bf16_from_real(v.to_double() / static_cast<double>(sum));
  return y;
}

PartialSoftmaxResult partial_softmax_update(const RowStats& stats, std::span<const Bf16> block,
                                            const ExpUnitParams& p, AccumMode acc) {
  if (block.empty()) throw ShapeError("partial softmax of an empty block");
  PartialSoftmaxResult result;
  result.weights.resize(block.size());

  const Bf16 new_max = bf16_max(stats.m, max_phase(block));
  if (new_max.is_inf() && new_max.sign()) {
    // Nothing finite seen yet: weights are exp(-inf) = 0 and the sum is kept.
    std::fill(result.weights.begin(), result.weights.end(), pos_zero());
    result.stats = stats;
    result.rescale = Bf16::from_bits(Bf16::kOne);
    return result;
  }

  result.rescale = exp_bf16(bf16_sub(stats.m, new_max), p);
  const float block_sum = exp_phase(block, new_max, p, acc, result.weights);
  result.stats.m = new_max;
  if (acc == AccumMode::kFaithful) {
    const Bf16 scaled = bf16_mul(result.rescale, bf16_from_real(stats.l));
    result.stats.l = bf16_add(scaled, bf16_from_real(block_sum)).to_float();
  } else {
    result.stats.l = result.rescale.to_float() * stats.l + block_sum;
  }
  return result;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols, m.rows);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
  }
  return t;
}

Matrix gemm_bf16(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) {
    throw ShapeError("gemm inner dimensions differ: " + std::to_string(a.cols) + " vs " + std::to_string(b.rows));
  }
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) acc += a.at(i, k).to_double() * b.at(k, j).to_double();
      c.at(i, j) = bf16_from_real(acc);
    }
  }
  return c;
}

namespace {

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols);
  std::copy(m.data.begin() + static_cast<std::ptrdiff_t>(begin * m.cols),
            m.data.begin() + static_cast<std::ptrdiff_t>(end * m.cols), out.data.begin());
  return out;
}

void check_attention_shapes(const Matrix& q, const Matrix& k, const Matrix& v) {
  if (q.cols != k.cols) throw ShapeError("Q and K head dimensions differ");
  if (k.rows != v.rows) throw ShapeError("K and V sequence lengths differ");
  if (q.rows == 0 || k.rows == 0 || q.cols == 0 || v.cols == 0) throw ShapeError("empty attention operand");
}

}  // namespace

Matrix flash_attention_2(const Matrix& q, const Matrix& k, const Matrix& v, const AttentionConfig& cfg,
                         const ExpUnitParams& p, AccumMode acc) {
  cfg.validate();
  check_attention_shapes(q, k, v);
  if (q.rows != cfg.seq_len_q || k.rows != cfg.seq_len_kv || q.cols != cfg.head_dim) {
    throw ShapeError("attention operands do not match the configuration");
  }

  const std::size_t d_out = v.cols;
  const Bf16 scale = bf16_from_real(cfg.scale);
  Matrix out(q.rows, d_out);

  for (std::size_t q0 = 0; q0 < q.rows; q0 += cfg.tile_q) {
    const std::size_t q1 = std::min(q.rows, q0 + cfg.tile_q);
    const Matrix q_tile = slice_rows(q, q0, q1);
    const std::size_t rows = q1 - q0;

    std::vector<RowStats> stats(rows);
    std::vector<float> o_acc(rows * d_out, 0.0f);

    for (std::size_t k0 = 0; k0 < k.rows; k0 += cfg.tile_kv) {
      const std::size_t k1 = std::min(k.rows, k0 + cfg.tile_kv);
      const Matrix scores = gemm_bf16(q_tile, transpose(slice_rows(k, k0, k1)));
      const Matrix v_tile = slice_rows(v, k0, k1);

      Matrix weights(rows, k1 - k0);
      std::vector<Bf16> rescale(rows);
      for (std::size_t r = 0; r < rows; ++r) {
        std::vector<Bf16> s(scores.row(r).begin(), scores.row(r).end());
        for (auto& x : s) x = bf16_mul(x, scale);
        PartialSoftmaxResult upd = partial_softmax_update(stats[r], s, p, acc);
        stats[r] = upd.stats;
        rescale[r] = upd.rescale;
        std::copy(upd.weights.begin(), upd.weights.end(), weights.row(r).begin());
      }

      const Matrix pv = gemm_bf16(weights, v_tile);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < d_out; ++c) {
          float& o = o_acc[r * d_out + c];
          o = rescale[r].to_float() * o + pv.at(r, c).to_float();
        }
      }
    }

    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Bf16> o_row(d_out);
      for (std::size_t c = 0; c < d_out; ++c) o_row[c] = bf16_from_real(o_acc[r * d_out + c]);
      if (acc == AccumMode::kWide) {
        for (std::size_t c = 0; c < d_out; ++c) {
          out.at(q0 + r, c) = bf16_from_real(static_cast<double>(o_acc[r * d_out + c] / stats[r].l));
        }
        continue;
      }
      const std::vector<Bf16> normalized = normalize_weights(o_row, stats[r].l, acc);
      std::copy(normalized.begin(), normalized.end(), out.row(q0 + r).begin());
    }
  }
  return out;
}

RealMatrix attention_reference(const Matrix& q, const Matrix& k, const Matrix& v, double scale) {
  check_attention_shapes(q, k, v);
  RealMatrix out{q.rows, v.cols, std::vector<double>(q.rows * v.cols)};
  std::vector<long double> s(k.rows);
  for (std::size_t i = 0; i < q.rows; ++i) {
    long double max = -std::numeric_limits<long double>::infinity();
    for (std::size_t j = 0; j < k.rows; ++j) {
      long double dot = 0.0L;
      for (std::size_t c = 0; c < q.cols; ++c) {
        dot += static_cast<long double>(q.at(i, c).to_double()) * k.at(j, c).to_double();
      }
      s[j] = dot * scale;
      max = std::max(max, s[j]);
    }
    long double sum = 0.0L;
    for (auto& x : s) {
      x = std::exp(x - max);
      sum += x;
    }
    for (std::size_t c = 0; c < v.cols; ++c) {
      long double o = 0.0L;
      for (std::size_t j = 0; j < k.rows; ++j) o += s[j] * v.at(j, c).to_double();
      out.data[i * v.cols + c] = static_cast<double>(o / sum);
    }
  }
  return out;
}

}  // namespace bfexp
