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

#ifndef BFEXP_COST_MODEL_HPP
#define BFEXP_COST_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace bfexp {

/// Where an op is charged: once per loop iteration, once per row, or once per
/// kernel invocation.
enum class OpScope { kLoop, kRow, kKernel };

/// One instruction (or macro-op such as a library call) of a kernel schedule.
///
/// `issue_cost_cycles` is the time the op holds the in-order issue slot,
/// stalls included. Stream accesses through stream registers are ops with
/// `stream = true`: no instruction and no issue cost, but one memory beat per
/// issue. `latency_cycles` only matters at the drain of a hardware loop.
struct ScheduleOp {
  std::string name;
  std::string phase;
  OpScope scope = OpScope::kLoop;
  unsigned simd_width = 1;
  double issue_cost_cycles = 1.0;
  unsigned latency_cycles = 1;
  double count_per_iteration = 1.0;
  unsigned instructions = 1;
  bool frep = false;
  bool stream = false;

  void validate() const;
};

struct Schedule {
  std::string name;
  std::string description;
  /// Elements per row; row-scope ops are charged once per row.
  std::size_t row_length = 128;
  /// Stream beats the memory interface accepts per cycle.
  unsigned memory_ports = 1;
  std::vector<ScheduleOp> ops;
  /// Human-readable record of calibrated constants.
  std::string calibration;
};

struct CostReport {
  std::string schedule;
  std::uint64_t outputs = 0;
  double total_instructions = 0.0;
  double total_cycles = 0.0;
  double instructions_per_output = 0.0;
  double cycles_per_output = 0.0;
  /// Loop-body cost per output with no drain and no row or kernel overhead.
  double steady_cycles_per_output = 0.0;
  double steady_instructions_per_output = 0.0;
  std::map<std::string, double> phase_cycles;
  std::map<std::string, double> phase_instructions;
  std::string calibration;
};

/// Throws std::invalid_argument for an empty schedule, zero outputs or an
/// invalid op.
CostReport cost_of_schedule(const Schedule& schedule, std::uint64_t n_outputs);

/// baseline.total_cycles / optimized.total_cycles; throws when the reports
/// cover different output counts.
double speedup(const CostReport& baseline, const CostReport& optimized);

// Built-in schedules -----------------------------------------------------------

/// Names accepted by builtin_schedule().
std::vector<std::string> builtin_schedule_names();
/// "baseline", "sw-optim", "sw-exp-sw", "sw-exp-hw" or "vfexp-loop".
Schedule builtin_schedule(const std::string& name);

/// Default benchmark: 128 rows of 128 elements.
inline constexpr std::size_t kDefaultSoftmaxRows = 128;

// FlashAttention-2 -------------------------------------------------------------

struct FlashCostConfig {
  std::size_t seq_len = 1024;
  std::size_t head_dim = 64;
  std::size_t tile_q = 64;
  std::size_t tile_kv = 64;
  /// Sustained bf16 MACs per cycle of the expanding dot-product GEMM.
  double gemm_macs_per_cycle = 3.6;
};

/// "baseline" or "optimized" partial-softmax variant. The report's phase map
/// holds "gemm" and "softmax" cycles.
CostReport flash_attention_cost(const FlashCostConfig& cfg, const std::string& variant);
double softmax_share(const CostReport& report);

// Serialization ----------------------------------------------------------------

std::string to_string(OpScope scope);
OpScope op_scope_from_string(const std::string& name);

/// Parses the key-value schedule format:
///
///   # comment
///   name = my-kernel
///   row_length = 128
///   memory_ports = 1
///   op name=vfexp phase=exp scope=loop width=4 issue=1 latency=2 count=1 instr=1 frep=1 stream=0
///
/// Unspecified op keys take the ScheduleOp defaults. Throws
/// std::invalid_argument with the offending line number.
Schedule parse_schedule(std::istream& in);
Schedule load_schedule_file(const std::string& path);
void write_schedule(std::ostream& out, const Schedule& schedule);

nlohmann::json to_json(const CostReport& report);
std::string csv_header();
std::string to_csv_row(const CostReport& report);

}  // namespace bfexp

#endif  // BFEXP_COST_MODEL_HPP
