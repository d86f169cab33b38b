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

// Brute-force reference implementations of partial dependence values and
// interaction values. Cost is exponential in the coalition size and linear
// in the background size; intended for tests and spot checks only.

#ifndef PDFOREST_ORACLE_H_
#define PDFOREST_ORACLE_H_

#include <vector>

#include "pdforest/dataset.h"
#include "pdforest/model.h"

namespace pdforest {

// Features fixed to values; `features` and `values` are aligned.
struct Coalition {
  std::vector<int> features;
  std::vector<double> values;
};

// Coalition of `features` taking their values from `row`.
Coalition CoalitionFromRow(const std::vector<int>& features,
                           const std::vector<double>& row);

// Arithmetic mean of Predict over the rows of `background`.
double OracleMeanPrediction(const TreeEnsemble& ensemble,
                            const Dataset& background);

// Average prediction over background rows with the coalition's features
// overridden. Throws Error(kContract) on empty background or malformed
// coalitions.
double OraclePdv(const TreeEnsemble& ensemble, const Dataset& background,
                 const Coalition& coalition);

// Inclusion-exclusion over all subsets of the coalition (at most 20
// features).
double OraclePdiv(const TreeEnsemble& ensemble, const Dataset& background,
                  const Coalition& coalition);

// Cover-weighted counterparts: features outside the coalition are
// marginalised by following both children of a split in proportion to their
// training covers. Throws Error(kDegenerateModel) on missing or zero covers.
double OraclePdvPathDependent(const TreeEnsemble& ensemble,
                              const Coalition& coalition);
double OraclePdivPathDependent(const TreeEnsemble& ensemble,
                               const Coalition& coalition);

// OraclePdvPathDependent with an empty coalition.
double ExpectedPrediction(const TreeEnsemble& ensemble);

}  // namespace pdforest

#endif  // PDFOREST_ORACLE_H_
