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

// bfexp: batch front end for the exp unit, softmax and attention harnesses.
//
// Exit status: 0 when every embedded check passes, 1 when a check fails,
// 2 for usage, configuration or I/O errors.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bfexp/harness.hpp"
#include "bfexp/io.hpp"
#include "bfexp/isa.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads `key = value` lines ('#' starts a comment) and turns them into
// `--key=value` arguments. They are appended after the command line so that
// the file wins over flags.
std::vector<std::string> config_file_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bfexp::ConfigError("cannot read config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw bfexp::ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw bfexp::ConfigError(path + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v == 0) throw bfexp::ConfigError("invalid size '" + item + "' in list '" + text + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw bfexp::ConfigError("empty size list");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Exp-unit overrides shared by every evaluation command.
struct ParamFlags {
  bfexp::ExpUnitParams params;
  std::string rounding = "half-up";

  void attach(CLI::App* cmd) {
    cmd->add_option("--alpha", params.alpha, "P(x) coefficient alpha")->capture_default_str();
    cmd->add_option("--beta", params.beta, "P(x) coefficient beta")->capture_default_str();
    cmd->add_option("--gamma1", params.gamma1, "P(x) coefficient gamma1")->capture_default_str();
    cmd->add_option("--gamma2", params.gamma2, "P(x) coefficient gamma2")->capture_default_str();
    cmd->add_option("--coeff-frac-bits", params.coeff_frac_bits, "fraction bits of the quantized coefficients")
        ->capture_default_str();
    cmd->add_option("--log2e-frac-bits", params.log2e_frac_bits, "fraction bits of the log2(e) constant")
        ->capture_default_str();
    cmd->add_option("--select-rounding", rounding, "half-up, truncate or nearest-even")->capture_default_str();
    cmd->add_option("--poly-a-bias", params.poly_a_bias_eighths, "branch A rounding bias, eighths of an output ULP")
        ->capture_default_str();
    cmd->add_option("--poly-b-bias", params.poly_b_bias_eighths, "branch B rounding bias, eighths of an output ULP")
        ->capture_default_str();
    cmd->add_option("--poly-correction", params.poly_correction, "enable the P(x) stage (false: plain Schraudolph)")
        ->capture_default_str();
  }

  bfexp::ExpUnitParams resolve() const {
    bfexp::ExpUnitParams p = params;
    try {
      p.select_rounding = bfexp::select_rounding_from_string(rounding);
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw bfexp::ConfigError(e.what());
    }
    return p;
  }
};

int finish(const bfexp::CommandResult& r) {
  std::cout << r.text;
  for (const auto& f : r.files) std::cerr << "wrote " << f << '\n';
  return r.ok ? kExitOk : kExitCheckFailed;
}

int run(int argc, char** argv) {
  CLI::App app{"bfloat16 exponential unit, softmax and attention harness"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_dir = ".";
  if (const char* env = std::getenv("BFEXP_OUT_DIR"); env != nullptr && *env != '\0') out_dir = env;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value file; its entries override flags");
    cmd->add_option("--out-dir", out_dir, "output directory (env BFEXP_OUT_DIR)")->capture_default_str();
  };

  // sweep-exp
  auto* sweep = app.add_subcommand("sweep-exp", "exhaustive sweep of all 65,536 inputs, writes golden vectors");
  ParamFlags sweep_params;
  bfexp::SweepExpConfig sweep_cfg;
  add_common(sweep);
  sweep_params.attach(sweep);
  sweep->add_option("--mean-bound", sweep_cfg.mean_bound, "mean relative error bound")->capture_default_str();
  sweep->add_option("--max-bound", sweep_cfg.max_bound, "max relative error bound")->capture_default_str();

  // softmax-eval
  auto* softmax = app.add_subcommand("softmax-eval", "softmax accuracy against a high-precision reference");
  ParamFlags softmax_params;
  bfexp::SoftmaxEvalConfig softmax_cfg;
  add_common(softmax);
  softmax_params.attach(softmax);
  softmax->add_option("--seed", softmax_cfg.seed, "RNG seed")->capture_default_str();
  softmax->add_option("--row-length", softmax_cfg.row_length, "elements per row")->capture_default_str();
  softmax->add_option("--rows", softmax_cfg.rows, "number of rows")->capture_default_str();
  softmax->add_option("--distribution", softmax_cfg.distribution, "normal, uniform or constant")
      ->capture_default_str();
  softmax->add_option("--stddev", softmax_cfg.stddev, "logit standard deviation")->capture_default_str();
  softmax->add_option("--mse-bound", softmax_cfg.mse_bound, "wide-mode MSE bound (0 disables)")
      ->capture_default_str();

  // attention-eval
  auto* attention = app.add_subcommand("attention-eval", "FlashAttention-2 tiling invariance and cost share");
  ParamFlags attention_params;
  bfexp::AttentionEvalConfig attention_cfg;
  std::string tiles = "8,16,32";
  std::string acc = "faithful";
  add_common(attention);
  attention_params.attach(attention);
  attention->add_option("--seed", attention_cfg.seed, "RNG seed")->capture_default_str();
  attention->add_option("--seq-len", attention_cfg.seq_len, "sequence length L")->capture_default_str();
  attention->add_option("--head-dim", attention_cfg.head_dim, "head dimension d")->capture_default_str();
  attention->add_option("--tile-kv", tiles, "comma-separated KV tile sizes")->capture_default_str();
  attention->add_option("--tile-q", attention_cfg.tile_q, "query tile size")->capture_default_str();
  attention->add_option("--instances", attention_cfg.instances, "random instances")->capture_default_str();
  attention->add_option("--acc", acc, "faithful or wide")->capture_default_str();
  attention->add_option("--ulp-bound", attention_cfg.ulp_bound, "cross-tile ULP bound")->capture_default_str();
  attention->add_option("--rel-bound", attention_cfg.rel_bound, "relative error bound")->capture_default_str();
  attention->add_option("--share-bound", attention_cfg.share_bound, "optimized softmax share bound")
      ->capture_default_str();
  attention->add_option("--cost-seq-len", attention_cfg.cost.seq_len, "cost model sequence length")
      ->capture_default_str();
  attention->add_option("--cost-head-dim", attention_cfg.cost.head_dim, "cost model head dimension")
      ->capture_default_str();
  attention->add_option("--cost-tile", attention_cfg.cost.tile_kv, "cost model tile size (Q and KV)")
      ->capture_default_str();
  attention->add_option("--gemm-macs-per-cycle", attention_cfg.cost.gemm_macs_per_cycle, "GEMM throughput")
      ->capture_default_str();

  // cost-report
  auto* cost = app.add_subcommand("cost-report", "cycle and instruction model of the softmax schedules");
  bfexp::CostReportConfig cost_cfg;
  std::string schedules = "baseline,sw-optim,sw-exp-sw,sw-exp-hw,vfexp-loop";
  add_common(cost);
  cost->add_option("--schedules", schedules, "comma-separated built-in schedules")->capture_default_str();
  cost->add_option("--schedule-file", cost_cfg.schedule_file, "additional schedule in key-value format");
  cost->add_option("--outputs", cost_cfg.outputs, "outputs to cost")->capture_default_str();
  cost->add_option("--format", cost_cfg.format, "json, csv or text")->capture_default_str();

  // codec
  auto* codec = app.add_subcommand("codec", "encode or decode FEXP / VFEXP words");
  codec->require_subcommand(1);
  auto* enc = codec->add_subcommand("encode", "encode MNEMONIC RD RS1");
  std::string mnemonic;
  unsigned rd = 0;
  unsigned rs1 = 0;
  enc->add_option("mnemonic", mnemonic, "FEXP or VFEXP")->required();
  enc->add_option("rd", rd, "destination register")->required();
  enc->add_option("rs1", rs1, "source register")->required();
  auto* dec = codec->add_subcommand("decode", "decode a 32-bit hex word");
  std::string word_text;
  dec->add_option("word", word_text, "instruction word, e.g. 3E1000D3")->required();

  // Locate --config before the real parse so its entries can be appended.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (!config_path.empty()) {
    const auto extra = config_file_args(config_path);
    args.insert(args.end(), extra.begin(), extra.end());
  }
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  if (*sweep) {
    sweep_cfg.params = sweep_params.resolve();
    sweep_cfg.out_dir = out_dir;
    return finish(bfexp::run_sweep_exp(sweep_cfg));
  }
  if (*softmax) {
    softmax_cfg.params = softmax_params.resolve();
    softmax_cfg.out_dir = out_dir;
    return finish(bfexp::run_softmax_eval(softmax_cfg));
  }
  if (*attention) {
    attention_cfg.params = attention_params.resolve();
    attention_cfg.tile_kv = parse_size_list(tiles);
    attention_cfg.cost.tile_q = attention_cfg.cost.tile_kv;
    try {
      attention_cfg.acc = bfexp::accum_mode_from_string(acc);
    } catch (const std::invalid_argument& e) {
      throw bfexp::ConfigError(e.what());
    }
    attention_cfg.out_dir = out_dir;
    return finish(bfexp::run_attention_eval(attention_cfg));
  }
  if (*cost) {
    cost_cfg.schedules = parse_name_list(schedules);
    cost_cfg.out_dir = out_dir;
    return finish(bfexp::run_cost_report(cost_cfg));
  }
  if (*enc) {
    bfexp::ExpInstruction instr;
    if (mnemonic == "FEXP" || mnemonic == "fexp") {
      instr.kind = bfexp::ExpKind::kScalar;
    } else if (mnemonic == "VFEXP" || mnemonic == "vfexp") {
      instr.kind = bfexp::ExpKind::kVector;
    } else {
      throw bfexp::ConfigError("unknown mnemonic '" + mnemonic + "' (FEXP, VFEXP)");
    }
    try {
      instr.rd = bfexp::RegIndex(rd);
      instr.rs1 = bfexp::RegIndex(rs1);
    } catch (const std::out_of_range& e) {
      throw bfexp::ConfigError(e.what());
    }
    std::ostringstream os;
    os << std::uppercase << std::hex << std::setw(8) << std::setfill('0') << bfexp::encode(instr);
    std::cout << os.str() << '\n';
    return kExitOk;
  }
  if (*dec) {
    std::string t = word_text;
    if (t.rfind("0x", 0) == 0 || t.rfind("0X", 0) == 0) t = t.substr(2);
    std::size_t pos = 0;
    unsigned long long word = 0;
    try {
      word = std::stoull(t, &pos, 16);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (t.empty() || pos != t.size() || word > 0xFFFFFFFFull) {
      throw bfexp::ConfigError("invalid instruction word '" + word_text + "'");
    }
    std::cout << bfexp::disassemble(bfexp::decode(static_cast<std::uint32_t>(word))) << '\n';
    return kExitOk;
  }
  return kExitConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}
