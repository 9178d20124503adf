// Copyright 2026 The qficd Authors
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

#include <filesystem>
#include <string>
#include <vector>

namespace qficd {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

/// Writes `table` column-major data as rows. Throws std::invalid_argument on
/// ragged columns and std::runtime_error when the file cannot be written.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Self-contained SVG line chart. Non-positive values are skipped on
/// logarithmic axes.
std::string svg_line_plot(const std::vector<Series>& series, const PlotSpec& spec);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qficd
