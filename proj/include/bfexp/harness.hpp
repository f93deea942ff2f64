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

#ifndef BFEXP_HARNESS_HPP
#define BFEXP_HARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "bfexp/cost_model.hpp"
#include "bfexp/expunit.hpp"
#include "bfexp/kernels.hpp"

namespace bfexp {

/// Outcome of one harness command. `ok` is false when an embedded invariant
/// check failed; configuration problems throw ConfigError instead.
struct CommandResult {
  nlohmann::json report;
  std::string text;
  bool ok = true;
  std::vector<std::string> files;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::json to_json(const ExpUnitParams& p);

// sweep-exp --------------------------------------------------------------------

/// Exhaustive statistics of exp_bf16 over all 65,536 input patterns.
///
/// The accuracy domain is: finite input, output neither 0 nor inf, and the
/// true exp(x) inside the normal bf16 range. The "nontrivial" figures restrict
/// it further to |x| >= 2^-8, where the result is not simply 1.0.
struct ExpAccuracy {
  std::uint64_t domain_count = 0;
  double mean_rel_error = 0.0;
  double max_rel_error = 0.0;
  Bf16 worst_input;
  std::uint64_t nontrivial_count = 0;
  double nontrivial_mean_rel_error = 0.0;
  double nontrivial_max_rel_error = 0.0;
  std::uint64_t overflow_outputs = 0;
  std::uint64_t zero_outputs = 0;
  std::uint64_t nan_inputs = 0;
  /// NaN inputs not mapped to the canonical NaN.
  std::uint64_t nan_violations = 0;
  /// exp_bf16 vs exp_ref_fixed.
  std::uint64_t ref_mismatches = 0;
  /// Biased exponent > 133 not mapped to +inf / +0.
  std::uint64_t saturation_violations = 0;
  std::uint64_t monotonic_violations = 0;
  /// Non-NaN outputs with the sign bit set.
  std::uint64_t sign_violations = 0;
};

ExpAccuracy measure_exp_accuracy(const ExpUnitParams& p);
nlohmann::json to_json(const ExpAccuracy& a);

struct SweepExpConfig {
  ExpUnitParams params;
  std::string out_dir = ".";
  double mean_bound = 0.0016;
  double max_bound = 0.0085;
};

/// Writes exp_golden.txt, sweep_exp.json, sweep_exp.txt and sweep_exp.csv
/// (per-binade error table) into out_dir.
CommandResult run_sweep_exp(const SweepExpConfig& cfg);

// softmax-eval -----------------------------------------------------------------

struct SoftmaxEvalConfig {
  std::uint64_t seed = 1;
  std::size_t row_length = 512;
  std::size_t rows = 10000;
  /// "normal", "uniform" or "constant".
  std::string distribution = "normal";
  double stddev = 1.0;
  /// Checked against the wide-accumulation MSE; 0 disables the check.
  double mse_bound = 1e-8;
  ExpUnitParams params;
  std::string out_dir = ".";

  void validate() const;
};

struct SoftmaxModeStats {
  double mse = 0.0;
  double max_abs_error = 0.0;
  double max_sum_deviation = 0.0;
  std::uint64_t sum_bound_violations = 0;
  std::uint64_t argmax_eligible = 0;
  std::uint64_t argmax_preserved = 0;
  /// Eligible rows whose true argmax shares the output maximum with another
  /// element after bf16 rounding.
  std::uint64_t argmax_ties = 0;
  /// Histogram of |sum - 1| in bins [0, 2^-10), [2^-10, 2^-8), [2^-8, 2^-6),
  /// [2^-6, 2^-4), [2^-4, inf).
  std::vector<std::uint64_t> sum_deviation_histogram = std::vector<std::uint64_t>(5, 0);
};

struct SoftmaxEvalStats {
  SoftmaxModeStats faithful;
  SoftmaxModeStats wide;
  /// Rows where the wide-mode row MSE exceeds the faithful one.
  std::uint64_t rows_wide_worse = 0;
};

/// Runs both accumulation modes over the configured rows without writing files.
SoftmaxEvalStats evaluate_softmax(const SoftmaxEvalConfig& cfg);

/// Writes softmax_eval.json and softmax_eval.txt.
CommandResult run_softmax_eval(const SoftmaxEvalConfig& cfg);

// attention-eval ---------------------------------------------------------------

struct AttentionEvalConfig {
  std::uint64_t seed = 1;
  std::size_t seq_len = 32;
  std::size_t head_dim = 8;
  std::vector<std::size_t> tile_kv = {8, 16, 32};
  std::size_t tile_q = 8;
  std::size_t instances = 16;
  AccumMode acc = AccumMode::kFaithful;
  ExpUnitParams params;
  FlashCostConfig cost;
  double ulp_bound = 4.0;
  double rel_bound = 0.02;
  double share_bound = 0.10;
  std::string out_dir = ".";

  void validate() const;
};

struct AttentionEvalStats {
  /// Worst |O_a - O_b| across tilings, in bf16 ULPs of the row's largest
  /// output magnitude. This is the checked tiling metric.
  double max_cross_tile_row_ulp = 0.0;
  /// Same difference in ULPs of each element itself. Unbounded for outputs
  /// that nearly cancel, so it is reported only.
  std::uint32_t max_cross_tile_elem_ulp = 0;
  /// max |O - O_ref| / max |O_ref| per instance, worst instance.
  double max_rel_error = 0.0;
  bool lkv1_exact = false;
};

AttentionEvalStats evaluate_attention(const AttentionEvalConfig& cfg);

/// Writes attention_eval.json and attention_eval.txt.
CommandResult run_attention_eval(const AttentionEvalConfig& cfg);

// cost-report ------------------------------------------------------------------

struct CostReportConfig {
  std::vector<std::string> schedules = {"baseline", "sw-optim", "sw-exp-sw", "sw-exp-hw", "vfexp-loop"};
  std::string schedule_file;
  std::uint64_t outputs = kDefaultSoftmaxRows * 128;
  /// "json", "csv" or "text" for the stdout rendering.
  std::string format = "text";
  std::string out_dir = ".";
};

/// Writes cost_report.json and cost_report.csv.
CommandResult run_cost_report(const CostReportConfig& cfg);

}  // namespace bfexp

#endif  // BFEXP_HARNESS_HPP
