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

#include "pdforest/tasks.h"

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pdforest/errors.h"
#include "pdforest/oracle.h"

namespace pdforest {
namespace {

const Dataset* EngineBackground(const Dataset* background, PdpMode mode) {
  if (mode == PdpMode::kApproximate) return nullptr;
  if (background == nullptr || background->empty()) {
    throw Error(ErrorKind::kContract,
                "exact mode requires a non-empty background dataset");
  }
  return background;
}

// Distinct values of a consumer column mapped to the first row holding them.
std::map<double, std::size_t> FirstRowByValue(const Dataset& data,
                                              std::size_t column) {
  std::map<double, std::size_t> out;
  for (std::size_t r = 0; r < data.num_rows(); ++r) {
    out.emplace(data.at(r, column), r);
  }
  return out;
}

Dataset FirstRows(const Dataset& data, std::size_t rows) {
  std::vector<double> values;
  values.reserve(rows * data.num_columns());
  for (std::size_t c = 0; c < data.num_columns(); ++c) {
    const auto column = data.column(c);
    values.insert(values.end(), column.begin(), column.begin() + rows);
  }
  return Dataset::FromColumns(data.columns(), rows, std::move(values),
                              data.role());
}

}  // namespace

const char* PdpModeName(PdpMode mode) {
  return mode == PdpMode::kExact ? "exact" : "approx";
}

double MeanPrediction(const TreeEnsemble& ensemble, const Dataset& background) {
  if (background.empty()) {
    throw Error(ErrorKind::kContract,
                "mean prediction requires a non-empty background dataset");
  }
  double total = 0.0;
  for (std::size_t r = 0; r < background.num_rows(); ++r) {
    total += Predict(ensemble, background.Row(r));
  }
  return total / static_cast<double>(background.num_rows());
}

double ModeMeanPrediction(const TreeEnsemble& ensemble,
                          const Dataset* background, PdpMode mode) {
  if (mode == PdpMode::kApproximate) return ExpectedPrediction(ensemble);
  return MeanPrediction(ensemble, *EngineBackground(background, mode));
}

double StepFunction::At(double x) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return levels.at(static_cast<std::size_t>(it - breakpoints.begin()));
}

PdpResult ComputePdp(const TreeEnsemble& ensemble, const Dataset* background,
                     const Dataset& grid, PdpMode mode,
                     const EngineOptions& options) {
  const Dataset* engine_background = EngineBackground(background, mode);
  const std::vector<SubsetValueMap> cpdvs = ComputeAttributions(
      ensemble, engine_background, grid, CpdvMetric(), options);
  PdpResult result;
  result.mode = mode;
  result.mean_prediction = ModeMeanPrediction(ensemble, background, mode);
  for (std::size_t f = 0; f < grid.num_columns(); ++f) {
    FeatureCurve curve;
    curve.feature = static_cast<int>(f);
    curve.name = grid.columns()[f];
    const FeatureSubset key{static_cast<int>(f)};
    for (const auto& [value, row] : FirstRowByValue(grid, f)) {
      const double cpdv = cpdvs[row].Get(key);
      curve.points.push_back(
          PdpPoint{value, cpdv + result.mean_prediction, cpdv});
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

PdpResult Wpdp(const TreeEnsemble& ensemble, const Dataset* background, int k,
               PdpMode mode, SamplingMode sampling,
               const EngineOptions& options) {
  if (k < 1) throw Error(ErrorKind::kContract, "k must be at least 1");
  const PdpGrid grid =
      mode == PdpMode::kExact
          ? BuildPdpGrid(*EngineBackground(background, mode), k, sampling)
          : BuildThresholdSampledGrid(ensemble, k, sampling);
  return ComputePdp(ensemble, background, grid.consumer, mode, options);
}

PdpResult FullPdp(const TreeEnsemble& ensemble, const Dataset* background,
                  PdpMode mode, const EngineOptions& options) {
  const FullPdpGrid full = BuildFullPdpGrid(ensemble);
  PdpResult result =
      ComputePdp(ensemble, background, full.consumer, mode, options);
  for (std::size_t f = 0; f < result.curves.size(); ++f) {
    FeatureCurve& curve = result.curves[f];
    const std::vector<double>& thresholds = full.thresholds.values[f];
    if (thresholds.empty()) {
      curve.points.clear();
      continue;
    }
    std::map<double, double> pdv_at;
    for (const PdpPoint& p : curve.points) pdv_at[p.value] = p.pdv;
    StepFunction steps;
    steps.breakpoints = thresholds;
    // Ties go right, so threshold t_j evaluates the level of [t_j, t_{j+1}).
    steps.levels.push_back(pdv_at.at(full.points[f].front()));
    for (double t : thresholds) steps.levels.push_back(pdv_at.at(t));
    curve.steps = std::move(steps);
  }
  return result;
}

std::vector<std::pair<int, int>> AllPairs(int num_features) {
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < num_features; ++a) {
    for (int b = a + 1; b < num_features; ++b) out.emplace_back(a, b);
  }
  return out;
}

JointPdpResult ComputeJointPdp(const TreeEnsemble& ensemble,
                               const Dataset* background, const Dataset& grid,
                               PdpMode mode,
                               const std::vector<std::pair<int, int>>& pairs,
                               const EngineOptions& options) {
  const int f = static_cast<int>(grid.num_columns());
  if (f < 2) {
    throw Error(ErrorKind::kContract,
                "joint partial dependence needs at least two features");
  }
  std::vector<std::pair<int, int>> selected = pairs.empty() ? AllPairs(f) : pairs;
  for (auto& [a, b] : selected) {
    if (a == b || a < 0 || b < 0 || a >= f || b >= f) {
      throw Error(ErrorKind::kContract, "invalid feature pair (" +
                                            std::to_string(a) + ", " +
                                            std::to_string(b) + ")");
    }
    if (a > b) std::swap(a, b);
  }
  const Dataset* engine_background = EngineBackground(background, mode);
  const JointPdpData joint = ConstructJointPdpData(grid);
  const std::vector<SubsetValueMap> pdivs = ComputeAttributions(
      ensemble, engine_background, joint.consumer, PdivOrderLe2Metric(),
      options);

  JointPdpResult result;
  result.mode = mode;
  result.mean_prediction = ModeMeanPrediction(ensemble, background, mode);
  result.k = grid.num_rows();
  const std::size_t k = grid.num_rows();
  for (const auto& [a, b] : selected) {
    PairMatrix matrix;
    matrix.feature_a = a;
    matrix.feature_b = b;
    const FeatureSubset key_a{a}, key_b{b}, key_ab{a, b};
    for (std::size_t i = 0; i < k; ++i) {
      matrix.a_values.push_back(grid.at(i, a));
      matrix.b_values.push_back(grid.at(i, b));
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const SubsetValueMap& row = pdivs.at(joint.clip_map.RowFor(a, i, b, j));
        matrix.pdv.push_back(row.Get(key_ab) + row.Get(key_a) +
                             row.Get(key_b) + result.mean_prediction);
      }
    }
    result.pairs.push_back(std::move(matrix));
  }
  return result;
}

JointPdpResult WJointPdp(const TreeEnsemble& ensemble,
                         const Dataset* background, int k, PdpMode mode,
                         SamplingMode sampling,
                         const std::vector<std::pair<int, int>>& pairs,
                         const EngineOptions& options) {
  if (k < 1) throw Error(ErrorKind::kContract, "k must be at least 1");
  const PdpGrid grid =
      mode == PdpMode::kExact
          ? BuildPdpGrid(*EngineBackground(background, mode), k, sampling)
          : BuildThresholdSampledGrid(ensemble, k, sampling);
  return ComputeJointPdp(ensemble, background, grid.consumer, mode, pairs,
                         options);
}

AttributionResult AnyOrderPdivs(const TreeEnsemble& ensemble,
                                const Dataset& consumer,
                                const Dataset* background,
                                const AnyOrderOptions& options) {
  if (consumer.empty()) {
    throw Error(ErrorKind::kContract, "consumer dataset is empty");
  }
  if (options.row_limit == 0) {
    throw Error(ErrorKind::kContract, "row limit must be positive");
  }
  const bool exact = background != nullptr && !background->empty();
  const std::size_t rows = std::min(consumer.num_rows(), options.row_limit);
  const Dataset limited = rows == consumer.num_rows()
                              ? Dataset()
                              : FirstRows(consumer, rows);
  const Dataset& used = rows == consumer.num_rows() ? consumer : limited;

  AttributionResult result;
  result.mode = exact ? PdpMode::kExact : PdpMode::kApproximate;
  result.background_rows = exact ? background->num_rows() : 0;
  result.model_fingerprint = Fingerprint(ensemble);
  result.consumer_rows = rows;
  result.aggregated = options.aggregate;
  const Dataset* engine_background = exact ? background : nullptr;
  if (options.aggregate) {
    result.mean = ComputeMeanAttribution(ensemble, engine_background, used,
                                         PdivMetric(), options.engine);
  } else {
    result.rows = ComputeAttributions(ensemble, engine_background, used,
                                      PdivMetric(), options.engine);
  }
  return result;
}

}  // namespace pdforest
