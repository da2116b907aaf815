// Copyright 2026 The bcert Authors
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

#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace bcert::harness {

/// Locale-independent, 17 significant digits (exact round trip for doubles);
/// "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// Comma-separated writer with a fixed header. Cells are written verbatim.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  std::size_t columns() const { return header_.size(); }

  static std::string cell(double x) { return format_number(x); }
  static std::string cell(bool b) { return b ? "1" : "0"; }

 private:
  std::ostream& out_;
  std::vector<std::string> header_;
};

}  // namespace bcert::harness
