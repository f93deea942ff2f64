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

#ifndef BFEXP_IO_HPP
#define BFEXP_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bfexp/expunit.hpp"
#include "bfexp/kernels.hpp"

namespace bfexp {

/// Raised for unreadable or unwritable files and malformed file contents.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One "IIII OOOO" line per input pattern, 0000 through FFFF.
void write_golden_vectors(std::ostream& out, const ExpUnitParams& p);
std::vector<std::pair<Bf16, Bf16>> read_golden_vectors(std::istream& in);

/// Writes `path` as little-endian 16-bit words and `path.shape` holding
/// "rows cols".
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

/// Text fixture: a "rows cols" line followed by rows*cols hex patterns.
Matrix read_matrix_hex(std::istream& in);
void write_matrix_hex(std::ostream& out, const Matrix& m);

}  // namespace bfexp

#endif  // BFEXP_IO_HPP
