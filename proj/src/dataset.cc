/*
 * Copyright 2026 The pdforest Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pdforest/dataset.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdforest/errors.h"

namespace pdforest {
namespace {

// Splits one CSV record. Quotes are honoured; embedded newlines are not.
std::vector<std::string> SplitRecord(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  if (quoted) {
    throw Error(ErrorKind::kParse,
                "line " + std::to_string(line_no) + ": unterminated quote");
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double ParseCell(std::string_view raw, std::size_t line_no, std::size_t column,
                 const std::string& column_name) {
  std::string_view cell = Trim(raw);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    throw Error(ErrorKind::kInput,
                "line " + std::to_string(line_no) + ", column " +
                    std::to_string(column + 1) + " ('" + column_name +
                    "'): not a finite number: '" + std::string(raw) + "'");
  }
  return value;
}

std::vector<double> SampleSorted(std::span<const double> sorted, int k,
                                 SamplingMode mode) {
  std::vector<double> out(static_cast<std::size_t>(k));
  if (mode == SamplingMode::kUniform) {
    const double lo = sorted.front();
    const double hi = sorted.back();
    for (int t = 0; t < k; ++t) {
      out[t] = k == 1 ? lo + (hi - lo) / 2
                      : (t == k - 1 ? hi : lo + (hi - lo) * t / (k - 1));
    }
  } else {
    for (int t = 0; t < k; ++t) {
      out[t] = Quantile(sorted, k == 1 ? 0.5 : static_cast<double>(t) / (k - 1));
    }
  }
  return out;
}

std::vector<double> SortedUnique(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

double Below(double t, double delta) {
  const double v = t - delta;
  return v < t ? v : std::nextafter(t, -std::numeric_limits<double>::infinity());
}

double Above(double t, double delta) {
  const double v = t + delta;
  return v > t ? v : std::nextafter(t, std::numeric_limits<double>::infinity());
}

std::vector<double> RepresentativePoints(const std::vector<double>& thresholds) {
  std::vector<double> points;
  if (thresholds.empty()) return points;
  const double first = thresholds.front();
  const double last = thresholds.back();
  const double span = last - first;
  const double delta =
      0.05 * (span > 0 ? span : std::max(std::abs(first), 1.0));
  points.push_back(Below(first, delta));
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    points.push_back(thresholds[i]);
    if (i + 1 < thresholds.size()) {
      const double mid =
          thresholds[i] + (thresholds[i + 1] - thresholds[i]) / 2;
      if (mid > thresholds[i] && mid < thresholds[i + 1]) points.push_back(mid);
    }
  }
  points.push_back(Above(last, delta));
  return points;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> columns,
                 const std::vector<std::vector<double>>& rows, DatasetRole role)
    : columns_(std::move(columns)), num_rows_(rows.size()), role_(role) {
  values_.assign(columns_.size() * num_rows_, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns_.size()) {
      throw Error(ErrorKind::kInput,
                  "row " + std::to_string(r) + " has " +
                      std::to_string(rows[r].size()) + " values, expected " +
                      std::to_string(columns_.size()));
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (!std::isfinite(rows[r][c])) {
        throw Error(ErrorKind::kInput, "row " + std::to_string(r) +
                                           ", column " + std::to_string(c) +
                                           ": non-finite value");
      }
      values_[c * num_rows_ + r] = rows[r][c];
    }
  }
}

Dataset Dataset::FromColumns(std::vector<std::string> columns,
                             std::size_t num_rows, std::vector<double> values,
                             DatasetRole role) {
  if (values.size() != columns.size() * num_rows) {
    throw Error(ErrorKind::kContract, "column-major storage has wrong size");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kInput, "non-finite value in dataset");
    }
  }
  Dataset out;
  out.columns_ = std::move(columns);
  out.num_rows_ = num_rows;
  out.values_ = std::move(values);
  out.role_ = role;
  return out;
}

std::vector<double> Dataset::Row(std::size_t row) const {
  std::vector<double> out(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) out[c] = at(row, c);
  return out;
}

int Dataset::ColumnIndex(std::string_view name) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    if (columns_[c] == name) return static_cast<int>(c);
  }
  return -1;
}

Dataset Dataset::SelectColumns(const std::vector<std::string>& names) const {
  std::vector<double> values;
  values.reserve(names.size() * num_rows_);
  for (const std::string& name : names) {
    const int c = ColumnIndex(name);
    if (c < 0) {
      throw Error(ErrorKind::kInput, "dataset has no column '" + name + "'");
    }
    const auto col = column(static_cast<std::size_t>(c));
    values.insert(values.end(), col.begin(), col.end());
  }
  return FromColumns(names, num_rows_, std::move(values), role_);
}

Dataset ParseCsv(std::string_view text, DatasetRole role) {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> columns_data;
  std::size_t line_no = 0;
  std::size_t num_rows = 0;
  bool header_done = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitRecord(line, line_no);
    if (!header_done) {
      for (auto& field : fields) columns.emplace_back(Trim(field));
      std::set<std::string> unique(columns.begin(), columns.end());
      if (unique.size() != columns.size()) {
        throw Error(ErrorKind::kInput, "line 1: duplicate column name");
      }
      columns_data.resize(columns.size());
      header_done = true;
      continue;
    }
    if (fields.size() != columns.size()) {
      throw Error(ErrorKind::kInput,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(columns.size()) + " cells, found " +
                      std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      columns_data[c].push_back(ParseCell(fields[c], line_no, c, columns[c]));
    }
    ++num_rows;
  }
  if (!header_done) throw Error(ErrorKind::kParse, "CSV has no header row");
  std::vector<double> values;
  values.reserve(columns.size() * num_rows);
  for (auto& col : columns_data) values.insert(values.end(), col.begin(), col.end());
  return Dataset::FromColumns(std::move(columns), num_rows, std::move(values),
                              role);
}

Dataset LoadCsv(const std::string& path, DatasetRole role) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, path + ": cannot open CSV file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseCsv(buffer.str(), role);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

const char* SamplingModeName(SamplingMode mode) {
  switch (mode) {
    case SamplingMode::kQuantile:
      return "quantile";
    case SamplingMode::kUniform:
      return "uniform";
    case SamplingMode::kThresholds:
      return "thresholds";
  }
  return "?";
}

double Quantile(std::span<const double> sorted, double probability) {
  if (sorted.empty()) throw Error(ErrorKind::kContract, "quantile of empty data");
  const double pos = probability * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

PdpGrid BuildPdpGrid(const Dataset& background, int k, SamplingMode mode) {
  if (k < 1) throw Error(ErrorKind::kContract, "k must be at least 1");
  if (background.empty()) {
    throw Error(ErrorKind::kContract, "cannot sample a grid from empty data");
  }
  if (mode == SamplingMode::kThresholds) {
    throw Error(ErrorKind::kContract,
                "threshold grids are built from the model, not the data");
  }
  PdpGrid out;
  out.grid.mode = mode;
  const std::size_t f = background.num_columns();
  std::vector<double> values;
  values.reserve(f * static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < f; ++c) {
    std::vector<double> sorted(background.column(c).begin(),
                               background.column(c).end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> sampled = SampleSorted(sorted, k, mode);
    values.insert(values.end(), sampled.begin(), sampled.end());
    out.grid.values.push_back(SortedUnique(std::move(sampled)));
  }
  out.consumer = Dataset::FromColumns(background.columns(),
                                      static_cast<std::size_t>(k),
                                      std::move(values), DatasetRole::kConsumer);
  return out;
}

FullPdpGrid BuildFullPdpGrid(const TreeEnsemble& ensemble) {
  const std::size_t f = ensemble.feature_names.size();
  std::vector<std::vector<double>> thresholds(f);
  for (const Tree& tree : ensemble.trees) {
    for (const Node& node : tree.nodes) {
      if (!node.IsLeaf()) thresholds.at(node.feature).push_back(node.threshold);
    }
  }
  FullPdpGrid out;
  out.thresholds.mode = SamplingMode::kThresholds;
  std::size_t rows = 1;
  for (auto& t : thresholds) {
    t = SortedUnique(std::move(t));
    out.points.push_back(RepresentativePoints(t));
    rows = std::max(rows, out.points.back().size());
    out.thresholds.values.push_back(std::move(t));
  }
  std::vector<double> values(f * rows, 0.0);
  for (std::size_t c = 0; c < f; ++c) {
    const auto& pts = out.points[c];
    for (std::size_t r = 0; r < rows && !pts.empty(); ++r) {
      values[c * rows + r] = pts[std::min(r, pts.size() - 1)];
    }
  }
  out.consumer = Dataset::FromColumns(ensemble.feature_names, rows,
                                      std::move(values), DatasetRole::kConsumer);
  return out;
}

PdpGrid BuildThresholdSampledGrid(const TreeEnsemble& ensemble, int k,
                                  SamplingMode mode) {
  if (k < 1) throw Error(ErrorKind::kContract, "k must be at least 1");
  const FullPdpGrid full = BuildFullPdpGrid(ensemble);
  PdpGrid out;
  out.grid.mode = mode;
  const std::size_t f = ensemble.feature_names.size();
  std::vector<double> values;
  values.reserve(f * static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < f; ++c) {
    std::vector<double> sampled(static_cast<std::size_t>(k), 0.0);
    if (!full.points[c].empty()) {
      sampled = SampleSorted(full.points[c], k,
                             mode == SamplingMode::kThresholds
                                 ? SamplingMode::kQuantile
                                 : mode);
    }
    values.insert(values.end(), sampled.begin(), sampled.end());
    out.grid.values.push_back(SortedUnique(std::move(sampled)));
  }
  out.consumer =
      Dataset::FromColumns(ensemble.feature_names, static_cast<std::size_t>(k),
                           std::move(values), DatasetRole::kConsumer);
  return out;
}

std::vector<int> Bits(std::size_t i, int width) {
  if (width < 0 || width > 63 || (i >> width) != 0) {
    throw Error(ErrorKind::kContract, "bits(" + std::to_string(i) + ", " +
                                          std::to_string(width) +
                                          "): value does not fit the width");
  }
  std::vector<int> out(static_cast<std::size_t>(width));
  for (int b = 0; b < width; ++b) {
    out[b] = static_cast<int>((i >> (width - 1 - b)) & 1u);
  }
  return out;
}

int JointCodeWidth(std::size_t num_features) {
  if (num_features <= 1) return 0;
  return static_cast<int>(std::bit_width(num_features - 1));
}

JointClipMap::JointClipMap(std::size_t num_features, std::size_t k)
    : num_features_(num_features), k_(k), width_(JointCodeWidth(num_features)) {}

int JointClipMap::BlockIndex(std::size_t a, std::size_t b) const {
  if (a == b || a >= num_features_ || b >= num_features_) {
    throw Error(ErrorKind::kContract, "clip map needs two distinct features");
  }
  return width_ - static_cast<int>(std::bit_width(a ^ b));
}

std::size_t JointClipMap::RowFor(std::size_t a, std::size_t ia, std::size_t b,
                                 std::size_t ib) const {
  const int h = BlockIndex(a, b);
  const bool a_repeated = ((a >> (width_ - 1 - h)) & 1u) != 0;
  const std::size_t repeat_index = a_repeated ? ia : ib;
  const std::size_t tile_index = a_repeated ? ib : ia;
  return static_cast<std::size_t>(h) * k_ * k_ + repeat_index * k_ + tile_index;
}

JointPdpData ConstructJointPdpData(const Dataset& grid) {
  const std::size_t k = grid.num_rows();
  const std::size_t f = grid.num_columns();
  const int width = JointCodeWidth(f);
  const std::size_t block = k * k;
  const std::size_t rows = block * static_cast<std::size_t>(width);
  std::vector<double> values(f * rows);
  for (std::size_t c = 0; c < f; ++c) {
    const auto column = grid.column(c);
    const std::vector<int> code = Bits(c, width);
    double* out = values.data() + c * rows;
    for (int h = 0; h < width; ++h) {
      for (std::size_t r = 0; r < block; ++r) {
        // tile: [v0 v1 v2 v0 v1 v2 ...]; repeat: [v0 v0 v0 v1 v1 v1 ...]
        *out++ = code[h] == 0 ? column[r % k] : column[r / k];
      }
    }
  }
  JointPdpData out;
  out.consumer = Dataset::FromColumns(grid.columns(), rows, std::move(values),
                                      DatasetRole::kConsumer);
  out.clip_map = JointClipMap(f, k);
  return out;
}

std::string ValueGridToJson(const ValueGrid& grid,
                            const std::vector<std::string>& feature_names) {
  nlohmann::json out = nlohmann::json::object();
  out["mode"] = SamplingModeName(grid.mode);
  nlohmann::json features = nlohmann::json::array();
  for (std::size_t f = 0; f < grid.values.size(); ++f) {
    features.push_back({{"feature", feature_names.at(f)},
                        {"values", grid.values[f]}});
  }
  out["features"] = std::move(features);
  return out.dump();
}

std::string ClipMapToJson(const JointClipMap& clip_map,
                          const std::vector<std::string>& feature_names) {
  nlohmann::json out = nlohmann::json::object();
  out["k"] = clip_map.k();
  out["width"] = clip_map.width();
  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t a = 0; a < clip_map.num_features(); ++a) {
    for (std::size_t b = a + 1; b < clip_map.num_features(); ++b) {
      pairs.push_back({{"features", {feature_names.at(a), feature_names.at(b)}},
                       {"block", clip_map.BlockIndex(a, b)},
                       {"rows", {clip_map.BlockBegin(a, b), clip_map.BlockEnd(a, b)}}});
    }
  }
  out["pairs"] = std::move(pairs);
  return out.dump();
}

}  // namespace pdforest
