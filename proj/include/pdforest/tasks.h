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

// End-to-end pipelines: sampled and full partial dependence plots, joint
// partial dependence over feature pairs and per-row interaction values of
// every order.
//
// Exact mode averages over a background dataset; approximate mode uses the
// training covers stored in the model and never reads background data.

#ifndef PDFOREST_TASKS_H_
#define PDFOREST_TASKS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pdforest/dataset.h"
#include "pdforest/metrics.h"
#include "pdforest/model.h"
#include "pdforest/wdnf.h"

namespace pdforest {

enum class PdpMode { kExact, kApproximate };

const char* PdpModeName(PdpMode mode);

// Mean of Predict over the background. Throws Error(kContract) when empty.
double MeanPrediction(const TreeEnsemble& ensemble, const Dataset& background);

// Mean prediction for the mode: background mean (exact) or cover-weighted
// expected prediction (approximate; `background` is ignored).
double ModeMeanPrediction(const TreeEnsemble& ensemble,
                          const Dataset* background, PdpMode mode);

struct PdpPoint {
  double value = 0.0;
  double pdv = 0.0;
  double cpdv = 0.0;
};

// Piecewise-constant curve: levels[j] holds on [breakpoints[j-1],
// breakpoints[j]) with open ends at both extremes.
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> levels;

  double At(double x) const;
};

struct FeatureCurve {
  int feature = -1;
  std::string name;
  // One point per distinct grid value, ascending.
  std::vector<PdpPoint> points;
  // Full PDP only.
  std::optional<StepFunction> steps;
};

struct PdpResult {
  PdpMode mode = PdpMode::kExact;
  double mean_prediction = 0.0;
  std::vector<FeatureCurve> curves;
};

// Sampled PDP for every feature. Exact mode samples the grid from the
// background; approximate mode samples it from the model's split thresholds.
// Features are identified with background columns by index.
PdpResult Wpdp(const TreeEnsemble& ensemble, const Dataset* background, int k,
               PdpMode mode, SamplingMode sampling,
               const EngineOptions& options = {});

// PDP on an explicit grid: curve values for feature f are the distinct values
// of consumer column f.
PdpResult ComputePdp(const TreeEnsemble& ensemble, const Dataset* background,
                     const Dataset& grid, PdpMode mode,
                     const EngineOptions& options = {});

// PDP evaluated around every split threshold; every curve of a feature that
// the model splits on carries its exact step function.
PdpResult FullPdp(const TreeEnsemble& ensemble, const Dataset* background,
                  PdpMode mode, const EngineOptions& options = {});

struct PairMatrix {
  int feature_a = -1;
  int feature_b = -1;
  // Grid values in consumer-row order (k each, duplicates possible).
  std::vector<double> a_values;
  std::vector<double> b_values;
  // pdv[i * k + j]: a fixed to a_values[i], b fixed to b_values[j].
  std::vector<double> pdv;
};

struct JointPdpResult {
  PdpMode mode = PdpMode::kExact;
  double mean_prediction = 0.0;
  std::size_t k = 0;
  std::vector<PairMatrix> pairs;
};

// All unordered pairs (a < b) of `num_features` features.
std::vector<std::pair<int, int>> AllPairs(int num_features);

// Joint PDPs of the requested pairs (all pairs when empty) on the k-row grid.
JointPdpResult WJointPdp(const TreeEnsemble& ensemble,
                         const Dataset* background, int k, PdpMode mode,
                         SamplingMode sampling,
                         const std::vector<std::pair<int, int>>& pairs = {},
                         const EngineOptions& options = {});

// Joint PDPs on an explicit k-row grid.
JointPdpResult ComputeJointPdp(const TreeEnsemble& ensemble,
                               const Dataset* background, const Dataset& grid,
                               PdpMode mode,
                               const std::vector<std::pair<int, int>>& pairs = {},
                               const EngineOptions& options = {});

struct AttributionResult {
  PdpMode mode = PdpMode::kExact;
  std::size_t background_rows = 0;
  std::uint64_t model_fingerprint = 0;
  std::size_t consumer_rows = 0;  // rows processed
  bool aggregated = false;
  // Per processed row (empty when aggregated).
  std::vector<SubsetValueMap> rows;
  // Per-subset mean over processed rows (aggregated only).
  SubsetValueMap mean;
};

struct AnyOrderOptions {
  std::size_t row_limit = 10000;
  bool aggregate = false;
  EngineOptions engine;
};

// Interaction values of every order for the first `row_limit` consumer rows.
// A null or empty background selects approximate mode.
AttributionResult AnyOrderPdivs(const TreeEnsemble& ensemble,
                                const Dataset& consumer,
                                const Dataset* background,
                                const AnyOrderOptions& options = {});

}  // namespace pdforest

#endif  // PDFOREST_TASKS_H_
