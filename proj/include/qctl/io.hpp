// Copyright 2026 The qctl Authors
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

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qctl/util.hpp"

namespace qctl::io {

using nlohmann::json;

/// Shared matrix schema: {"dim": N, "re": [[...]], "im": [[...]]}, row-major;
/// "im" may be omitted for real matrices.
json mat_to_json(const CMat& m);
CMat mat_from_json(const json& j, const std::string& what = "matrix");

/// Vectors use 1-D "re"/"im" arrays.
json vec_to_json(const CVec& v);
CVec vec_from_json(const json& j, const std::string& what = "vector");

/// 17 significant digits; doubles round-trip exactly.
std::string fmt17(double x);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  size_t width_;
};

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace qctl::io
