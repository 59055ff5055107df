// Copyright 2026 The gridsim Authors
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

#ifndef GRIDSIM_IO_HPP_
#define GRIDSIM_IO_HPP_

#include <string>
#include <vector>

#include "json.hpp"

namespace gridsim {

// Writes via a temporary sibling file and rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
void write_json_atomic(const std::string& path, const nlohmann::json& j);

// Columns of equal length, written with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  std::string str() const;
};

std::string format_number(double x);

// Heatmap of values[j * points + i] on [-extent, extent]^2 (i along Re beta,
// j along Im beta). Linear diverging colour map on [-vmax, vmax]; gridlines at
// multiples of `grid_spacing`.
std::string svg_heatmap(const std::vector<double>& values, int points, double extent,
                        double grid_spacing, const std::string& title);

}  // namespace gridsim

#endif  // GRIDSIM_IO_HPP_
