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

#include "pdforest/metrics.h"

#include <algorithm>
#include <bit>
#include <vector>

#include "pdforest/errors.h"

namespace pdforest {

double SubsetValueMap::Get(const FeatureSubset& subset) const {
  const auto it = entries_.find(subset);
  return it == entries_.end() ? 0.0 : it->second;
}

void SubsetValueMap::DropZeros() {
  std::erase_if(entries_, [](const auto& item) { return item.second == 0.0; });
}

SubsetValueMap CubeMetric::Apply(const Cube& cube) const {
  FeatureSubset variables = cube.positive;
  variables.insert(variables.end(), cube.negative.begin(), cube.negative.end());
  std::sort(variables.begin(), variables.end());
  variables.erase(std::unique(variables.begin(), variables.end()),
                  variables.end());
  if (variables.size() > 31) {
    throw Error(ErrorKind::kCapacity, "cube has more than 31 variables");
  }
  auto to_mask = [&](const FeatureSubset& features) {
    Mask mask = 0;
    for (int f : features) {
      const auto pos = std::lower_bound(variables.begin(), variables.end(), f) -
                       variables.begin();
      mask |= Mask{1} << pos;
    }
    return mask;
  };
  std::vector<MetricTerm> terms;
  Evaluate(to_mask(cube.positive), to_mask(cube.negative), &terms);
  SubsetValueMap out;
  FeatureSubset key;
  for (const MetricTerm& term : terms) {
    key.clear();
    for (Mask m = term.subset; m != 0; m &= m - 1) {
      key.push_back(variables[std::countr_zero(m)]);
    }
    out.Add(key, cube.weight * term.coefficient);
  }
  return out;
}

void CpdvMetric::Evaluate(Mask positive, Mask negative,
                          std::vector<MetricTerm>* out) const {
  if (positive == 0) {
    for (Mask m = negative; m != 0; m &= m - 1) {
      out->push_back({m & (~m + 1), -1.0});
    }
  } else if (std::has_single_bit(positive) && (positive & negative) == 0) {
    out->push_back({positive, 1.0});
  }
}

void PdivMetric::Evaluate(Mask positive, Mask negative,
                          std::vector<MetricTerm>* out) const {
  if ((positive & negative) != 0) return;
  // Every subset Y of the negative literals; the sign is (-1)^|Y|.
  Mask y = negative;
  while (true) {
    out->push_back({positive | y, (std::popcount(y) & 1) ? -1.0 : 1.0});
    if (y == 0) break;
    y = (y - 1) & negative;
  }
}

void PdivOrderLe2Metric::Evaluate(Mask positive, Mask negative,
                                  std::vector<MetricTerm>* out) const {
  if ((positive & negative) != 0) return;
  switch (std::popcount(positive)) {
    case 0:
      for (Mask a = negative; a != 0; a &= a - 1) {
        const Mask low = a & (~a + 1);
        out->push_back({low, -1.0});
        for (Mask b = a & (a - 1); b != 0; b &= b - 1) {
          out->push_back({low | (b & (~b + 1)), 1.0});
        }
      }
      break;
    case 1:
      out->push_back({positive, 1.0});
      for (Mask a = negative; a != 0; a &= a - 1) {
        out->push_back({positive | (a & (~a + 1)), -1.0});
      }
      break;
    case 2:
      out->push_back({positive, 1.0});
      break;
    default:
      break;
  }
}

}  // namespace pdforest
