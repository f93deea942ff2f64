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

#include "bfexp/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bfexp {

void write_golden_vectors(std::ostream& out, const ExpUnitParams& p) {
  for (std::uint32_t b = 0; b <= 0xFFFF; ++b) {
    const Bf16 x = Bf16::from_bits(static_cast<std::uint16_t>(b));
    out << to_hex(x) << ' ' << to_hex(exp_bf16(x, p)) << '\n';
  }
}

std::vector<std::pair<Bf16, Bf16>> read_golden_vectors(std::istream& in) {
  std::vector<std::pair<Bf16, Bf16>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a;
    std::string b;
    if (!(fields >> a >> b)) throw IoError("golden line " + std::to_string(line_no) + ": expected two patterns");
    try {
      rows.emplace_back(bf16_from_hex(a), bf16_from_hex(b));
    } catch (const std::invalid_argument& e) {
      throw IoError("golden line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream data(path, std::ios::binary);
  if (!data) throw IoError("cannot write '" + path + "'");
  for (Bf16 v : m.data) {
    const char bytes[2] = {static_cast<char>(v.bits & 0xFF), static_cast<char>(v.bits >> 8)};
    data.write(bytes, 2);
  }
  std::ofstream shape(path + ".shape");
  if (!shape) throw IoError("cannot write '" + path + ".shape'");
  shape << m.rows << ' ' << m.cols << '\n';
  if (!data || !shape) throw IoError("write failed for '" + path + "'");
}

Matrix load_matrix(const std::string& path) {
  std::ifstream shape(path + ".shape");
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!shape || !(shape >> rows >> cols)) throw IoError("cannot read shape sidecar '" + path + ".shape'");
  std::ifstream data(path, std::ios::binary);
  if (!data) throw IoError("cannot read '" + path + "'");
  Matrix m(rows, cols);
  for (auto& v : m.data) {
    unsigned char bytes[2];
    if (!data.read(reinterpret_cast<char*>(bytes), 2)) throw IoError("'" + path + "' is shorter than its shape");
    v = Bf16::from_bits(static_cast<std::uint16_t>(bytes[0] | (bytes[1] << 8)));
  }
  if (data.peek() != std::char_traits<char>::eof()) throw IoError("'" + path + "' is longer than its shape");
  return m;
}

Matrix read_matrix_hex(std::istream& in) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (!(in >> rows >> cols)) throw IoError("hex matrix: missing 'rows cols' header");
  Matrix m(rows, cols);
  for (auto& v : m.data) {
    std::string token;
    if (!(in >> token)) throw IoError("hex matrix: fewer entries than rows*cols");
    try {
      v = bf16_from_hex(token);
    } catch (const std::invalid_argument& e) {
      throw IoError(std::string("hex matrix: ") + e.what());
    }
  }
  return m;
}

void write_matrix_hex(std::ostream& out, const Matrix& m) {
  out << m.rows << ' ' << m.cols << '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) out << (c ? " " : "") << to_hex(m.at(r, c));
    out << '\n';
  }
}

}  // namespace bfexp
