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

#include "gridsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridsim/error.hpp"

namespace gridsim {

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorKind::kInvalidArgument, "cannot open " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error(ErrorKind::kInvalidArgument, "write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw Error(ErrorKind::kInvalidArgument, "csv row width does not match header");
  }
  rows.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// Blue at -1, white at 0, red at +1, linear in between.
std::string colour(double t) {
  t = std::clamp(t, -1.0, 1.0);
  int r, g, b;
  if (t >= 0) {
    r = 255;
    g = b = static_cast<int>(std::lround(255 * (1 - t)));
  } else {
    b = 255;
    r = g = static_cast<int>(std::lround(255 * (1 + t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string svg_heatmap(const std::vector<double>& values, int points, double extent,
                        double grid_spacing, const std::string& title) {
  if (points < 1 || values.size() != static_cast<size_t>(points) * points) {
    throw Error(ErrorKind::kInvalidArgument, "heatmap needs points^2 values");
  }
  const double size = 480.0, margin = 60.0;
  const double cell = size / points;
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  if (vmax == 0.0) vmax = 1.0;
  auto px = [&](double x) { return margin + (x + extent) / (2 * extent) * size; };
  auto py = [&](double y) { return margin + (extent - y) / (2 * extent) * size; };

  std::ostringstream os;
  const double total = size + 2 * margin;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(total) << "\" height=\""
     << fmt(total + 20) << "\">\n";
  os << "<text x=\"" << fmt(total / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n";
  for (int j = 0; j < points; ++j) {
    for (int i = 0; i < points; ++i) {
      const double x = margin + i * cell;
      const double y = margin + (points - 1 - j) * cell;
      os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(cell + 0.05)
         << "\" height=\"" << fmt(cell + 0.05) << "\" fill=\""
         << colour(values[j * points + i] / vmax) << "\"/>\n";
    }
  }
  if (grid_spacing > 0) {
    const int kmax = static_cast<int>(std::floor(extent / grid_spacing));
    for (int k = -kmax; k <= kmax; ++k) {
      const double v = k * grid_spacing;
      os << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(py(extent)) << "\" x2=\""
         << fmt(px(v)) << "\" y2=\"" << fmt(py(-extent))
         << "\" stroke=\"#555\" stroke-width=\"0.5\"/>\n";
      os << "<line x1=\"" << fmt(px(-extent)) << "\" y1=\"" << fmt(py(v)) << "\" x2=\""
         << fmt(px(extent)) << "\" y2=\"" << fmt(py(v))
         << "\" stroke=\"#555\" stroke-width=\"0.5\"/>\n";
      os << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(margin + size + 18)
         << "\" text-anchor=\"middle\" font-size=\"10\">" << fmt(v) << "</text>\n";
      os << "<text x=\"" << fmt(margin - 6) << "\" y=\"" << fmt(py(v) + 3)
         << "\" text-anchor=\"end\" font-size=\"10\">" << fmt(v) << "</text>\n";
    }
  }
  os << "<text x=\"" << fmt(total / 2) << "\" y=\"" << fmt(margin + size + 40)
     << "\" text-anchor=\"middle\" font-size=\"12\">Re(beta)</text>\n";
  os << "<text x=\"16\" y=\"" << fmt(total / 2) << "\" font-size=\"12\" transform=\"rotate(-90 16 "
     << fmt(total / 2) << ")\" text-anchor=\"middle\">Im(beta)</text>\n";
  os << "<text x=\"" << fmt(total - margin) << "\" y=\"" << fmt(total + 10)
     << "\" text-anchor=\"end\" font-size=\"10\">colour scale: [-" << format_number(vmax) << ", "
     << format_number(vmax) << "]</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace gridsim
