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

#include "qctl/io.hpp"

#include <cstdio>

namespace qctl::io {

json mat_to_json(const CMat& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json rrow = json::array(), irow = json::array();
    for (int j = 0; j < m.cols(); ++j) {
      rrow.push_back(m(i, j).real());
      irow.push_back(m(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return json{{"dim", m.rows()}, {"re", re}, {"im", im}};
}

CMat mat_from_json(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array())
    throw ValidationError(what + ": expected an object with a \"re\" array");
  const auto& re = j["re"];
  const int rows = static_cast<int>(re.size());
  if (rows == 0) throw ValidationError(what + ": empty matrix");
  const int cols = static_cast<int>(re[0].size());
  if (j.contains("dim") && (j["dim"].get<int>() != rows || rows != cols))
    throw ValidationError(what + ": \"dim\" disagrees with the \"re\" shape");
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(re[i].size()) != cols)
      throw ValidationError(what + ": ragged \"re\" rows");
    for (int k = 0; k < cols; ++k) m(i, k) = Complex(re[i][k].get<double>(), 0.0);
  }
  if (j.contains("im")) {
    const auto& im = j["im"];
    if (static_cast<int>(im.size()) != rows)
      throw ValidationError(what + ": \"im\" shape differs from \"re\"");
    for (int i = 0; i < rows; ++i) {
      if (static_cast<int>(im[i].size()) != cols)
        throw ValidationError(what + ": ragged \"im\" rows");
      for (int k = 0; k < cols; ++k)
        m(i, k) += Complex(0.0, im[i][k].get<double>());
    }
  }
  return m;
}

json vec_to_json(const CVec& v) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return json{{"dim", v.size()}, {"re", re}, {"im", im}};
}

CVec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_object() || !j.contains("re") || !j["re"].is_array())
    throw ValidationError(what + ": expected an object with a \"re\" array");
  const auto& re = j["re"];
  const int n = static_cast<int>(re.size());
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(re[i].get<double>(), 0.0);
  if (j.contains("im")) {
    const auto& im = j["im"];
    if (static_cast<int>(im.size()) != n)
      throw ValidationError(what + ": \"im\" length differs from \"re\"");
    for (int i = 0; i < n; ++i) v(i) += Complex(0.0, im[i].get<double>());
  }
  return v;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& header)
    : out_(path), width_(header.size()) {
  if (!out_) throw ValidationError("cannot open for writing: " + path);
  for (size_t i = 0; i < header.size(); ++i)
    out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_)
    throw ValidationError("CsvWriter: row width mismatch");
  for (size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << fmt17(values[i]);
  out_ << "\n";
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw ValidationError("CsvWriter: row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << "\n";
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw ValidationError("invalid JSON in " + path + ": " + err.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << text;
}

}  // namespace qctl::io
