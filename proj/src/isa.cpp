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

#include "bfexp/isa.hpp"

#include <iomanip>
#include <sstream>

namespace bfexp {

RegIndex::RegIndex(unsigned value) : value_(value) {
  if (value > 31) throw std::out_of_range("register index " + std::to_string(value) + " out of range [0, 31]");
}

std::uint32_t encode(const ExpInstruction& instr) {
  const std::uint32_t funct7 = instr.kind == ExpKind::kVector ? kVfexpFunct7 : kFexpFunct7;
  return (funct7 << 25) | (instr.rs1.value() << 15) | (instr.rd.value() << 7) | kOpFp;
}

std::optional<ExpInstruction> try_decode(std::uint32_t word) {
  const std::uint32_t opcode = word & 0x7F;
  const std::uint32_t funct3 = (word >> 12) & 0x7;
  const std::uint32_t rs2 = (word >> 20) & 0x1F;
  const std::uint32_t funct7 = word >> 25;
  if (opcode != kOpFp || funct3 != 0 || rs2 != 0) return std::nullopt;

  ExpKind kind;
  if (funct7 == kFexpFunct7) {
    kind = ExpKind::kScalar;
  } else if (funct7 == kVfexpFunct7) {
    kind = ExpKind::kVector;
  } else {
    return std::nullopt;
  }
  return ExpInstruction{kind, RegIndex((word >> 7) & 0x1F), RegIndex((word >> 15) & 0x1F)};
}

ExpInstruction decode(std::uint32_t word) {
  if (auto instr = try_decode(word)) return *instr;
  std::ostringstream os;
  os << "0x" << std::uppercase << std::hex << std::setw(8) << std::setfill('0') << word
     << " is not an FEXP/VFEXP instruction";
  throw DecodeError(os.str());
}

std::string disassemble(const ExpInstruction& instr) {
  std::ostringstream os;
  os << (instr.kind == ExpKind::kVector ? "vfexp" : "fexp") << " f" << instr.rd.value() << ", f" << instr.rs1.value();
  return os.str();
}

}  // namespace bfexp
