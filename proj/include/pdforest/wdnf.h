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

// Weighted-DNF compilation of tree ensembles.
//
// For a consumer row c, a coalition S and a leaf whose merged path
// conditions are cond_0..cond_{d-1} (each on a distinct feature), the
// background-averaged contribution of the leaf is
//
//   leaf * E_b prod_i [ x_i * 1{c sat cond_i} + (1 - x_i) * 1{b sat cond_i} ]
//
// with x_i = 1 iff the feature of cond_i is in S. For one (c, b) pair every
// factor is 1 (both satisfy: variable absent), x_i (only c: positive
// literal), not x_i (only b: negative literal) or 0. Grouping by the
// resulting cube, a cube with positive set P, negative set N and absent set
// A arises exactly for consumers whose condition mask equals P | A and for
// background rows whose mask equals N | A, so its weight is
//
//   leaf * Pr_b[mask(b) == N | A]
//
// Background rows are therefore summarised per leaf by the histogram of
// their condition masks, and the metric is pre-evaluated for every possible
// consumer mask. In path-dependent mode the background probability is
// replaced by the product of training-cover ratios along the path.

#ifndef PDFOREST_WDNF_H_
#define PDFOREST_WDNF_H_

#include <cstdint>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pdforest/dataset.h"
#include "pdforest/metrics.h"
#include "pdforest/model.h"

namespace pdforest {

inline constexpr int kMaxMaskWidth = 31;

struct EngineOptions {
  // Longest merged path accepted; deeper paths raise Error(kCapacity).
  int max_conditions = 30;
  // Worker threads; results do not depend on this value.
  int threads = 1;
};

// Assigns dense ids to feature subsets. Thread-safe.
class SubsetInterner {
 public:
  std::uint32_t Intern(const FeatureSubset& subset);
  // Valid for ids returned by Intern; not synchronised against Intern.
  const FeatureSubset& Lookup(std::uint32_t id) const { return subsets_[id]; }
  std::size_t size() const { return subsets_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const FeatureSubset& s) const;
  };
  std::mutex mutex_;
  std::unordered_map<FeatureSubset, std::uint32_t, Hash> ids_;
  std::vector<FeatureSubset> subsets_;
};

struct TableEntry {
  std::uint32_t subset_id;  // id in the interner used to build the table
  double value;
};

// Per consumer mask, the metric value of all cubes that mask activates.
struct MetricTable {
  std::vector<std::uint32_t> offsets;  // 2^d + 1 once built
  std::vector<TableEntry> entries;
  // Local variable mask of each entry, parallel to `entries`.
  std::vector<Mask> entry_masks;

  bool built() const { return !offsets.empty(); }
  std::span<const TableEntry> Row(Mask consumer_mask) const {
    return {entries.data() + offsets[consumer_mask],
            entries.data() + offsets[consumer_mask + 1]};
  }
  std::span<const Mask> RowMasks(Mask consumer_mask) const {
    return {entry_masks.data() + offsets[consumer_mask],
            entry_masks.data() + offsets[consumer_mask + 1]};
  }
};

enum class CoverageMode { kBackground, kPathDependent };

struct LeafCompilation {
  LeafPath leaf;
  CoverageMode mode = CoverageMode::kBackground;
  // coverage[m]: probability that a background row satisfies every
  // condition in m (superset sums of pattern_weight).
  std::vector<double> coverage;
  // pattern_weight[m]: probability that a background row satisfies exactly
  // the conditions in m.
  std::vector<double> pattern_weight;
  // Path-dependent mode: per-condition product of branch cover ratios.
  std::vector<double> pd_weights;
  MetricTable table;

  int num_conditions() const { return leaf.num_conditions(); }
  Mask full_mask() const {
    return num_conditions() == 0 ? 0 : (~Mask{0} >> (32 - num_conditions()));
  }
  // Feature of local variable i.
  int feature(int i) const { return leaf.conditions[i].feature; }
};

// A cube over the local variables of one leaf. `weight` excludes the
// consumer factor, which is 1 exactly for consumers whose condition mask
// equals `consumer_mask` (= positive | absent).
struct LeafCube {
  Mask positive = 0;
  Mask negative = 0;
  Mask absent = 0;
  double weight = 0.0;
  Mask consumer_mask() const { return positive | absent; }
};

// Throws Error(kCapacity) when the merged path is longer than allowed.
void CheckCapacity(const LeafPath& leaf, const EngineOptions& options);

// Histogram of background condition masks followed by a superset-sum
// transform. Background mode requires at least one row.
LeafCompilation CompileLeafBackground(const LeafPath& leaf,
                                      const Dataset& background,
                                      const EngineOptions& options = {});

// Cover-ratio weights; `tree` must be the tree the path was extracted from.
// Throws Error(kDegenerateModel) on missing or zero covers.
LeafCompilation CompileLeafPathDependent(const LeafPath& leaf, const Tree& tree,
                                         const EngineOptions& options = {});

// Compiles every reachable leaf of a tree. A null background selects
// path-dependent mode. The background pass visits every node once per row.
std::vector<LeafCompilation> CompileTree(const Tree& tree, int tree_index,
                                         const Dataset* background,
                                         const EngineOptions& options = {});

// Superset-sum (zeta) transform in place: a[m] <- sum_{t >= m} a[t].
void SupersetSumTransform(std::span<double> values);
// Its inverse (Moebius transform over supersets).
void SupersetDifferenceTransform(std::span<double> values);

// All cubes of a compiled leaf with at most `max_positive_arity` positive
// literals (-1: no cap), in (consumer mask, positive mask) order.
void EnumerateCubes(const LeafCompilation& comp, int max_positive_arity,
                    const std::function<void(const LeafCube&)>& visit);

// Feature-space form of EnumerateCubes: weights include the leaf value but
// not the consumer factor.
std::vector<Cube> LeafCubes(const LeafCompilation& comp,
                            int max_positive_arity = -1);

// Builds comp->table. Throws Error(kNumeric) on non-finite values.
void EvaluateMetric(LeafCompilation* comp, const CubeMetric& metric,
                    SubsetInterner* interner);

// Mask of the leaf's merged conditions that `row` satisfies.
Mask ConsumerMask(const LeafPath& leaf, std::span<const double> row);
Mask ConsumerMask(const LeafPath& leaf, const Dataset& data, std::size_t row);

// Adds table[mask(row)] of every compilation into accumulators[row].
using RowAccumulator = std::unordered_map<std::uint32_t, double>;
void AggregateConsumers(std::span<const LeafCompilation> comps,
                        const Dataset& consumer,
                        std::vector<RowAccumulator>* accumulators);

SubsetValueMap FinishAccumulator(const RowAccumulator& acc,
                                 const SubsetInterner& interner);

// Calls visit(path_index, masks) for every reachable leaf of `tree`, in
// ExtractTreePaths order, with the condition masks of rows [begin, end).
void VisitLeafMasks(const Tree& tree, const Dataset& data, std::size_t begin,
                    std::size_t end,
                    const std::function<void(std::size_t, std::span<const Mask>)>&
                        visit);

// Evaluates the compiled formula for one consumer row at the 0/1 assignment
// of `coalition` (sorted feature indices), base score included. Debug entry
// point for faithfulness checks.
double EvaluateAssignment(const TreeEnsemble& ensemble,
                          const Dataset* background,
                          std::span<const double> consumer_row,
                          const FeatureSubset& coalition,
                          const EngineOptions& options = {});

// Runs the metric over all trees, one batch of trees at a time, and returns
// one sparse map per consumer row (exact zeros removed). The base score is
// treated as a condition-free leaf. A null background selects
// path-dependent mode.
std::vector<SubsetValueMap> ComputeAttributions(const TreeEnsemble& ensemble,
                                                const Dataset* background,
                                                const Dataset& consumer,
                                                const CubeMetric& metric,
                                                const EngineOptions& options = {});

// Mean of ComputeAttributions over consumer rows, computed from per-leaf
// consumer-mask counts without per-row state.
SubsetValueMap ComputeMeanAttribution(const TreeEnsemble& ensemble,
                                      const Dataset* background,
                                      const Dataset& consumer,
                                      const CubeMetric& metric,
                                      const EngineOptions& options = {});

// JSON debug dumps ({"pos": [...], "neg": [...], "w": x} per cube).
std::string CubesToJson(const LeafCompilation& comp, int max_positive_arity = -1);
std::string CompilationToJson(const LeafCompilation& comp);

}  // namespace pdforest

#endif  // PDFOREST_WDNF_H_
