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

#include "pdforest/oracle.h"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pdforest/errors.h"

namespace pdforest {
namespace {

void CheckCoalition(const Coalition& coalition) {
  if (coalition.features.size() != coalition.values.size()) {
    throw Error(ErrorKind::kContract,
                "coalition features and values differ in length");
  }
  std::vector<int> sorted = coalition.features;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kContract, "coalition repeats a feature");
  }
  if (!sorted.empty() && sorted.front() < 0) {
    throw Error(ErrorKind::kContract, "negative feature index in coalition");
  }
}

Coalition Restrict(const Coalition& coalition, unsigned subset) {
  Coalition out;
  for (std::size_t i = 0; i < coalition.features.size(); ++i) {
    if ((subset >> i) & 1u) {
      out.features.push_back(coalition.features[i]);
      out.values.push_back(coalition.values[i]);
    }
  }
  return out;
}

double InclusionExclusion(const Coalition& coalition,
                          const std::function<double(const Coalition&)>& pdv) {
  CheckCoalition(coalition);
  const std::size_t h = coalition.features.size();
  if (h > 20) {
    throw Error(ErrorKind::kContract,
                "coalitions above 20 features are not supported");
  }
  double total = 0.0;
  for (unsigned s = 0; s < (1u << h); ++s) {
    const int sign = ((h - std::popcount(s)) % 2 == 0) ? 1 : -1;
    total += sign * pdv(Restrict(coalition, s));
  }
  return total;
}

double TreeExpectation(const Tree& tree, int index,
                       const std::vector<double>& fixed,
                       const std::vector<char>& is_fixed) {
  const Node& node = tree.nodes[index];
  if (node.IsLeaf()) return node.leaf_value;
  const std::size_t f = static_cast<std::size_t>(node.feature);
  if (f < is_fixed.size() && is_fixed[f]) {
    return TreeExpectation(tree, fixed[f] < node.threshold ? node.yes : node.no,
                           fixed, is_fixed);
  }
  const Node& yes = tree.nodes[node.yes];
  const Node& no = tree.nodes[node.no];
  if (!node.HasCover() || !yes.HasCover() || !no.HasCover() ||
      !(node.cover > 0)) {
    throw Error(ErrorKind::kDegenerateModel,
                "node " + std::to_string(node.source_id) +
                    " lacks a positive cover");
  }
  return yes.cover / node.cover * TreeExpectation(tree, node.yes, fixed, is_fixed) +
         no.cover / node.cover * TreeExpectation(tree, node.no, fixed, is_fixed);
}

}  // namespace

Coalition CoalitionFromRow(const std::vector<int>& features,
                           const std::vector<double>& row) {
  Coalition out;
  for (int f : features) {
    out.features.push_back(f);
    out.values.push_back(row.at(static_cast<std::size_t>(f)));
  }
  return out;
}

double OracleMeanPrediction(const TreeEnsemble& ensemble,
                            const Dataset& background) {
  return OraclePdv(ensemble, background, Coalition{});
}

double OraclePdv(const TreeEnsemble& ensemble, const Dataset& background,
                 const Coalition& coalition) {
  CheckCoalition(coalition);
  if (background.empty()) {
    throw Error(ErrorKind::kContract, "oracle requires a non-empty background");
  }
  double total = 0.0;
  for (std::size_t r = 0; r < background.num_rows(); ++r) {
    std::vector<double> row = background.Row(r);
    for (std::size_t i = 0; i < coalition.features.size(); ++i) {
      row.at(static_cast<std::size_t>(coalition.features[i])) =
          coalition.values[i];
    }
    total += Predict(ensemble, row);
  }
  return total / static_cast<double>(background.num_rows());
}

double OraclePdiv(const TreeEnsemble& ensemble, const Dataset& background,
                  const Coalition& coalition) {
  return InclusionExclusion(coalition, [&](const Coalition& c) {
    return OraclePdv(ensemble, background, c);
  });
}

double OraclePdvPathDependent(const TreeEnsemble& ensemble,
                              const Coalition& coalition) {
  CheckCoalition(coalition);
  std::size_t width = 0;
  for (int f : coalition.features) width = std::max(width, std::size_t(f) + 1);
  std::vector<double> fixed(width, 0.0);
  std::vector<char> is_fixed(width, 0);
  for (std::size_t i = 0; i < coalition.features.size(); ++i) {
    fixed[coalition.features[i]] = coalition.values[i];
    is_fixed[coalition.features[i]] = 1;
  }
  double total = ensemble.base_score;
  for (const Tree& tree : ensemble.trees) {
    total += TreeExpectation(tree, 0, fixed, is_fixed);
  }
  return total;
}

double OraclePdivPathDependent(const TreeEnsemble& ensemble,
                               const Coalition& coalition) {
  return InclusionExclusion(coalition, [&](const Coalition& c) {
    return OraclePdvPathDependent(ensemble, c);
  });
}

double ExpectedPrediction(const TreeEnsemble& ensemble) {
  return OraclePdvPathDependent(ensemble, Coalition{});
}

}  // namespace pdforest
