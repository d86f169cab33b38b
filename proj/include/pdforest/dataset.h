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

// Tabular data and the synthetic consumer datasets used to turn per-row
// attributions into global plots: sampled PDP grids, split-threshold grids
// for full PDPs and the compressed pairwise dataset for joint PDPs.

#ifndef PDFOREST_DATASET_H_
#define PDFOREST_DATASET_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdforest/model.h"

namespace pdforest {

enum class DatasetRole { kBackground, kConsumer };

// Rectangular, NaN-free real matrix stored column-major.
class Dataset {
 public:
  Dataset() = default;
  // Builds from row-major data. Throws Error(kInput) on ragged rows or
  // non-finite cells.
  Dataset(std::vector<std::string> columns,
          const std::vector<std::vector<double>>& rows,
          DatasetRole role = DatasetRole::kBackground);
  // Builds from column-major storage (`values.size() == columns * rows`).
  static Dataset FromColumns(std::vector<std::string> columns,
                             std::size_t num_rows, std::vector<double> values,
                             DatasetRole role = DatasetRole::kBackground);

  std::size_t num_rows() const { return num_rows_; }
  std::size_t num_columns() const { return columns_.size(); }
  bool empty() const { return num_rows_ == 0; }
  const std::vector<std::string>& columns() const { return columns_; }
  DatasetRole role() const { return role_; }
  void set_role(DatasetRole role) { role_ = role; }

  double at(std::size_t row, std::size_t column) const {
    return values_[column * num_rows_ + row];
  }
  std::span<const double> column(std::size_t column) const {
    return {values_.data() + column * num_rows_, num_rows_};
  }
  std::vector<double> Row(std::size_t row) const;

  // Index of the named column, or -1.
  int ColumnIndex(std::string_view name) const;

  // Returns a dataset with exactly `names` as columns, in that order.
  // Missing columns raise Error(kInput).
  Dataset SelectColumns(const std::vector<std::string>& names) const;

 private:
  std::vector<std::string> columns_;
  std::size_t num_rows_ = 0;
  std::vector<double> values_;
  DatasetRole role_ = DatasetRole::kBackground;
};

// Header of feature names followed by numeric rows. Quoted header fields are
// accepted; body cells must be finite decimal numbers ('.' separator).
Dataset ParseCsv(std::string_view text,
                 DatasetRole role = DatasetRole::kBackground);
Dataset LoadCsv(const std::string& path,
                DatasetRole role = DatasetRole::kBackground);

enum class SamplingMode { kQuantile, kUniform, kThresholds };

const char* SamplingModeName(SamplingMode mode);

// Per-feature sampled values, sorted ascending and deduplicated.
struct ValueGrid {
  std::vector<std::vector<double>> values;
  SamplingMode mode = SamplingMode::kQuantile;
};

// Quantile of sorted data using the inclusive linear-interpolation rule.
double Quantile(std::span<const double> sorted, double probability);

struct PdpGrid {
  ValueGrid grid;
  // Exactly k rows; row t holds the t-th sampled value of every feature.
  Dataset consumer;
};

// k evenly spaced quantiles (or k evenly spaced points over [min, max]) per
// column of `background`. With k == 1 the median (resp. mid-range) is used.
PdpGrid BuildPdpGrid(const Dataset& background, int k, SamplingMode mode);

// Same construction for a model without background data: the sampled
// population of each feature is its full-PDP point set. Features that the
// model never splits on are pinned to 0.
PdpGrid BuildThresholdSampledGrid(const TreeEnsemble& ensemble, int k,
                                  SamplingMode mode);

struct FullPdpGrid {
  // Sorted distinct split thresholds per feature (empty for unused ones).
  ValueGrid thresholds;
  // Evaluation points per feature: one point below the first threshold,
  // every threshold, the midpoint of every gap between consecutive
  // thresholds and one point above the last threshold.
  std::vector<std::vector<double>> points;
  // Ragged point lists padded into a rectangle: row t, column f holds
  // points[f][min(t, |points[f]| - 1)] (0 for unused features).
  Dataset consumer;
};

FullPdpGrid BuildFullPdpGrid(const TreeEnsemble& ensemble);

// Binary representation of i, most significant bit first, zero-padded to
// `width` bits. Throws Error(kContract) when i >= 2^width.
std::vector<int> Bits(std::size_t i, int width);

// ceil(log2(f)); 0 for f <= 1.
int JointCodeWidth(std::size_t num_features);

// For every unordered feature pair, the block of the joint dataset in which
// one feature was tiled and the other repeated.
class JointClipMap {
 public:
  JointClipMap() = default;
  JointClipMap(std::size_t num_features, std::size_t k);

  std::size_t num_features() const { return num_features_; }
  std::size_t k() const { return k_; }
  int width() const { return width_; }

  // Index of the first differing bit of the codes of a and b (a != b).
  int BlockIndex(std::size_t a, std::size_t b) const;
  std::size_t BlockBegin(std::size_t a, std::size_t b) const {
    return static_cast<std::size_t>(BlockIndex(a, b)) * k_ * k_;
  }
  std::size_t BlockEnd(std::size_t a, std::size_t b) const {
    return BlockBegin(a, b) + k_ * k_;
  }
  // Row of the joint dataset whose value for `a` is the ia-th grid value
  // and whose value for `b` is the ib-th grid value.
  std::size_t RowFor(std::size_t a, std::size_t ia, std::size_t b,
                     std::size_t ib) const;

 private:
  std::size_t num_features_ = 0;
  std::size_t k_ = 0;
  int width_ = 0;
};

struct JointPdpData {
  Dataset consumer;
  JointClipMap clip_map;
};

// Expands a k-row grid dataset into k^2 * ceil(log2 f) rows: for every bit
// of a feature's index code, a k^2-row block of that column is the grid
// column tiled k times (bit 0) or each value repeated k times (bit 1).
JointPdpData ConstructJointPdpData(const Dataset& grid);

// Debug serializations.
std::string ValueGridToJson(const ValueGrid& grid,
                            const std::vector<std::string>& feature_names);
std::string ClipMapToJson(const JointClipMap& clip_map,
                          const std::vector<std::string>& feature_names);

}  // namespace pdforest

#endif  // PDFOREST_DATASET_H_
