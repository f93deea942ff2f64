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

#ifndef BFEXP_ISA_HPP
#define BFEXP_ISA_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace bfexp {

/// Index into the 32-entry floating-point register file.
class RegIndex {
 public:
  /// Throws std::out_of_range for values above 31.
  explicit RegIndex(unsigned value);
  constexpr unsigned value() const { return value_; }
  friend bool operator==(RegIndex a, RegIndex b) { return a.value_ == b.value_; }

 private:
  unsigned value_;
};

enum class ExpKind {
  kScalar,  // FEXP
  kVector,  // VFEXP, four packed lanes
};

struct ExpInstruction {
  ExpKind kind = ExpKind::kScalar;
  RegIndex rd{0};
  RegIndex rs1{0};

  friend bool operator==(const ExpInstruction& a, const ExpInstruction& b) {
    return a.kind == b.kind && a.rd == b.rd && a.rs1 == b.rs1;
  }
};

class DecodeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Word layout (both kinds share the OP-FP major opcode):
//   [31:25] funct7  0011111 (FEXP) / 1011111 (VFEXP)
//   [24:20] 00000
//   [19:15] rs1
//   [14:12] 000
//   [11:7]  rd
//   [6:0]   1010011
inline constexpr std::uint32_t kFexpFunct7 = 0b0011111;
inline constexpr std::uint32_t kVfexpFunct7 = 0b1011111;
inline constexpr std::uint32_t kOpFp = 0b1010011;

std::uint32_t encode(const ExpInstruction& instr);

/// Nullopt when the word is not an FEXP/VFEXP encoding.
std::optional<ExpInstruction> try_decode(std::uint32_t word);
/// Throws DecodeError when the word is not an FEXP/VFEXP encoding.
ExpInstruction decode(std::uint32_t word);

/// "fexp f1, f2" / "vfexp f1, f2".
std::string disassemble(const ExpInstruction& instr);

}  // namespace bfexp

#endif  // BFEXP_ISA_HPP
