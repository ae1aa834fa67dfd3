// Copyright 2026 The dsrm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Plain comma-separated files: header line first, LF line ends, reals with
// 17 significant digits so that write-then-parse is bit exact.

#ifndef DSRM_CSV_HPP_
#define DSRM_CSV_HPP_

#include <string>
#include <vector>

#include "dsrm/numerics.hpp"

namespace dsrm {

std::string format_real(double v);
// Throws ParseError(0, ...) unless the whole field is a number.
double parse_real(const std::string& field);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column position by name; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

// Throws ShapeMismatch on ragged rows and IoError when the file cannot be written.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Throws IoError on a missing file or ragged rows.
CsvTable read_csv(const std::string& path);

// Header c0,...,c{cols-1}; one line per matrix row.
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(const std::string& path);

}  // namespace dsrm

#endif  // DSRM_CSV_HPP_
