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

#include "pdforest/wdnf.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "parallel.h"
#include "pdforest/errors.h"

namespace pdforest {
namespace {

std::size_t TableSize(int d) { return std::size_t{1} << d; }

// Submasks of m with at most `cap` bits (cap < 0: all), ascending.
std::vector<Mask> CappedSubmasks(Mask m, int cap) {
  std::vector<Mask> out;
  if (cap < 0 || cap >= std::popcount(m)) {
    Mask s = 0;
    while (true) {
      out.push_back(s);
      if (s == m) break;
      s = (s - m) & m;
    }
    return out;
  }
  std::vector<Mask> bits;
  for (Mask r = m; r != 0; r &= r - 1) bits.push_back(r & (~r + 1));
  auto gen = [&](auto&& self, std::size_t from, Mask acc, int left) -> void {
    out.push_back(acc);
    if (left == 0) return;
    for (std::size_t i = from; i < bits.size(); ++i) {
      self(self, i + 1, acc | bits[i], left - 1);
    }
  };
  gen(gen, 0, 0, cap);
  std::sort(out.begin(), out.end());
  return out;
}

FeatureSubset FeaturesOf(const LeafCompilation& comp, Mask mask) {
  FeatureSubset out;
  for (Mask m = mask; m != 0; m &= m - 1) {
    out.push_back(comp.feature(std::countr_zero(m)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Where(const LeafPath& leaf) {
  return "tree " + std::to_string(leaf.tree_index) + ", leaf node " +
         std::to_string(leaf.leaf_node);
}

void CheckColumns(const TreeEnsemble& ensemble, const Dataset& data,
                  const char* role) {
  int needed = 0;
  for (const Tree& tree : ensemble.trees) {
    for (const Node& node : tree.nodes) {
      if (!node.IsLeaf()) needed = std::max(needed, node.feature + 1);
    }
  }
  if (static_cast<int>(data.num_columns()) < needed) {
    throw Error(ErrorKind::kInput,
                std::string(role) + " data has " +
                    std::to_string(data.num_columns()) +
                    " columns but the model uses feature index " +
                    std::to_string(needed - 1));
  }
}

LeafCompilation FromCounts(const LeafPath& leaf,
                           const std::vector<std::uint64_t>& counts,
                           std::size_t num_rows) {
  LeafCompilation comp;
  comp.leaf = leaf;
  comp.mode = CoverageMode::kBackground;
  const double n = static_cast<double>(num_rows);
  comp.pattern_weight.resize(counts.size());
  comp.coverage.resize(counts.size());
  for (std::size_t m = 0; m < counts.size(); ++m) {
    comp.coverage[m] = static_cast<double>(counts[m]);
  }
  // Integer-valued sums are exact in double for any realistic row count.
  SupersetSumTransform(comp.coverage);
  for (std::size_t m = 0; m < counts.size(); ++m) {
    comp.pattern_weight[m] = static_cast<double>(counts[m]) / n;
    comp.coverage[m] /= n;
  }
  return comp;
}

LeafCompilation BaseScoreLeaf(double base_score) {
  LeafCompilation comp;
  comp.leaf.tree_index = -1;
  comp.leaf.leaf_node = -1;
  comp.leaf.leaf_value = base_score;
  comp.coverage = {1.0};
  comp.pattern_weight = {1.0};
  return comp;
}

}  // namespace

std::size_t SubsetInterner::Hash::operator()(const FeatureSubset& s) const {
  std::uint64_t h = 14695981039346656037ull;
  for (int f : s) {
    h ^= static_cast<std::uint32_t>(f);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h ^ s.size());
}

std::uint32_t SubsetInterner::Intern(const FeatureSubset& subset) {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto [it, inserted] =
      ids_.try_emplace(subset, static_cast<std::uint32_t>(subsets_.size()));
  if (inserted) subsets_.push_back(subset);
  return it->second;
}

void CheckCapacity(const LeafPath& leaf, const EngineOptions& options) {
  const int limit = std::min(options.max_conditions, kMaxMaskWidth);
  if (leaf.num_conditions() > limit) {
    throw Error(ErrorKind::kCapacity,
                Where(leaf) + ": path has " +
                    std::to_string(leaf.num_conditions()) +
                    " merged conditions, capacity is " + std::to_string(limit));
  }
}

void SupersetSumTransform(std::span<double> values) {
  const std::size_t n = values.size();
  for (std::size_t bit = 1; bit < n; bit <<= 1) {
    for (std::size_t m = 0; m < n; ++m) {
      if ((m & bit) == 0) values[m] += values[m | bit];
    }
  }
}

void SupersetDifferenceTransform(std::span<double> values) {
  const std::size_t n = values.size();
  for (std::size_t bit = 1; bit < n; bit <<= 1) {
    for (std::size_t m = 0; m < n; ++m) {
      if ((m & bit) == 0) values[m] -= values[m | bit];
    }
  }
}

Mask ConsumerMask(const LeafPath& leaf, std::span<const double> row) {
  Mask mask = 0;
  for (int i = 0; i < leaf.num_conditions(); ++i) {
    const SplitCondition& cond = leaf.conditions[i];
    if (cond.feature >= static_cast<int>(row.size())) {
      throw Error(ErrorKind::kInput, "row has no value for feature " +
                                         std::to_string(cond.feature));
    }
    if (cond.Satisfied(row[cond.feature])) mask |= Mask{1} << i;
  }
  return mask;
}

Mask ConsumerMask(const LeafPath& leaf, const Dataset& data, std::size_t row) {
  Mask mask = 0;
  for (int i = 0; i < leaf.num_conditions(); ++i) {
    const SplitCondition& cond = leaf.conditions[i];
    if (cond.feature >= static_cast<int>(data.num_columns())) {
      throw Error(ErrorKind::kInput, "data has no column for feature " +
                                         std::to_string(cond.feature));
    }
    if (cond.Satisfied(data.at(row, cond.feature))) mask |= Mask{1} << i;
  }
  return mask;
}

LeafCompilation CompileLeafBackground(const LeafPath& leaf,
                                      const Dataset& background,
                                      const EngineOptions& options) {
  CheckCapacity(leaf, options);
  if (background.empty()) {
    throw Error(ErrorKind::kContract,
                "background mode requires at least one background row");
  }
  std::vector<std::uint64_t> counts(TableSize(leaf.num_conditions()), 0);
  for (std::size_t r = 0; r < background.num_rows(); ++r) {
    ++counts[ConsumerMask(leaf, background, r)];
  }
  return FromCounts(leaf, counts, background.num_rows());
}

LeafCompilation CompileLeafPathDependent(const LeafPath& leaf, const Tree& tree,
                                         const EngineOptions& options) {
  CheckCapacity(leaf, options);
  LeafCompilation comp;
  comp.leaf = leaf;
  comp.mode = CoverageMode::kPathDependent;
  const int d = leaf.num_conditions();
  comp.pd_weights.assign(static_cast<std::size_t>(d), 1.0);
  for (std::size_t s = 0; s < leaf.steps.size(); ++s) {
    const PathStep& step = leaf.steps[s];
    const Node& node = tree.nodes.at(step.node);
    const Node& child = tree.nodes.at(step.took_yes ? node.yes : node.no);
    if (!node.HasCover() || !child.HasCover()) {
      throw Error(ErrorKind::kDegenerateModel,
                  Where(leaf) + ": node " + std::to_string(node.source_id) +
                      " has no cover (required in path-dependent mode)");
    }
    if (!(node.cover > 0)) {
      throw Error(ErrorKind::kDegenerateModel,
                  Where(leaf) + ": node " + std::to_string(node.source_id) +
                      " has zero cover");
    }
    comp.pd_weights[leaf.step_condition[s]] *= child.cover / node.cover;
  }
  const std::size_t size = TableSize(d);
  comp.coverage.assign(size, 1.0);
  comp.pattern_weight.assign(size, 1.0);
  for (std::size_t m = 0; m < size; ++m) {
    for (int i = 0; i < d; ++i) {
      const double r = comp.pd_weights[i];
      if ((m >> i) & 1u) {
        comp.coverage[m] *= r;
        comp.pattern_weight[m] *= r;
      } else {
        comp.pattern_weight[m] *= 1.0 - r;
      }
    }
  }
  return comp;
}

void VisitLeafMasks(
    const Tree& tree, const Dataset& data, std::size_t begin, std::size_t end,
    const std::function<void(std::size_t, std::span<const Mask>)>& visit) {
  const std::size_t rows = end - begin;
  // fail[depth][r]: conditions (by slot) that row r violates so far.
  std::vector<std::vector<Mask>> fail(1, std::vector<Mask>(rows, 0));
  std::vector<Mask> leaf_masks(rows);
  std::vector<int> slot_features;
  std::vector<Interval> slot_intervals;
  std::size_t path_index = 0;

  auto rec = [&](auto&& self, int index, std::size_t depth) -> void {
    const Node& node = tree.nodes[index];
    if (node.IsLeaf()) {
      const int d = static_cast<int>(slot_features.size());
      const Mask full = d == 0 ? 0 : (~Mask{0} >> (32 - d));
      const auto& f = fail[depth];
      for (std::size_t r = 0; r < rows; ++r) leaf_masks[r] = ~f[r] & full;
      visit(path_index++, leaf_masks);
      return;
    }
    if (node.feature >= static_cast<int>(data.num_columns())) {
      throw Error(ErrorKind::kInput, "data has no column for feature " +
                                         std::to_string(node.feature));
    }
    if (fail.size() <= depth + 1) fail.emplace_back(rows, 0);
    const auto column = data.column(static_cast<std::size_t>(node.feature));
    for (const bool take_yes : {true, false}) {
      const SplitCondition branch =
          take_yes ? node.YesCondition() : node.NoCondition();
      int slot = -1;
      for (std::size_t c = 0; c < slot_features.size(); ++c) {
        if (slot_features[c] == node.feature) slot = static_cast<int>(c);
      }
      const bool fresh = slot < 0;
      Interval saved;
      if (fresh) {
        slot = static_cast<int>(slot_features.size());
        slot_features.push_back(node.feature);
        slot_intervals.push_back(branch.interval);
      } else {
        saved = slot_intervals[slot];
        slot_intervals[slot] = saved.Intersect(branch.interval);
      }
      if (!slot_intervals[slot].Empty()) {
        const Mask bit = Mask{1} << slot;
        const auto& parent = fail[depth];
        auto& child = fail[depth + 1];
        for (std::size_t r = 0; r < rows; ++r) {
          const bool goes_yes = column[begin + r] < node.threshold;
          child[r] = parent[r] | (goes_yes == take_yes ? 0 : bit);
        }
        self(self, take_yes ? node.yes : node.no, depth + 1);
      }
      if (fresh) {
        slot_features.pop_back();
        slot_intervals.pop_back();
      } else {
        slot_intervals[slot] = saved;
      }
    }
  };
  rec(rec, 0, 0);
}

std::vector<LeafCompilation> CompileTree(const Tree& tree, int tree_index,
                                         const Dataset* background,
                                         const EngineOptions& options) {
  const std::vector<LeafPath> paths = ExtractTreePaths(tree, tree_index);
  for (const LeafPath& path : paths) CheckCapacity(path, options);
  std::vector<LeafCompilation> comps;
  comps.reserve(paths.size());
  if (background == nullptr) {
    for (const LeafPath& path : paths) {
      comps.push_back(CompileLeafPathDependent(path, tree, options));
    }
    return comps;
  }
  if (background->empty()) {
    throw Error(ErrorKind::kContract,
                "background mode requires at least one background row");
  }
  std::vector<std::vector<std::uint64_t>> counts(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    counts[i].assign(TableSize(paths[i].num_conditions()), 0);
  }
  VisitLeafMasks(tree, *background, 0, background->num_rows(),
                 [&](std::size_t leaf, std::span<const Mask> masks) {
                   auto& hist = counts[leaf];
                   for (Mask m : masks) ++hist[m];
                 });
  for (std::size_t i = 0; i < paths.size(); ++i) {
    comps.push_back(FromCounts(paths[i], counts[i], background->num_rows()));
  }
  return comps;
}

void EnumerateCubes(const LeafCompilation& comp, int max_positive_arity,
                    const std::function<void(const LeafCube&)>& visit) {
  const Mask full = comp.full_mask();
  const std::size_t size = TableSize(comp.num_conditions());
  for (std::size_t mi = 0; mi < size; ++mi) {
    const Mask m = static_cast<Mask>(mi);
    for (Mask p : CappedSubmasks(m, max_positive_arity)) {
      LeafCube cube;
      cube.positive = p;
      cube.negative = full & ~m;
      cube.absent = m & ~p;
      cube.weight = comp.leaf.leaf_value * comp.pattern_weight[full & ~p];
      visit(cube);
    }
  }
}

std::vector<Cube> LeafCubes(const LeafCompilation& comp, int max_positive_arity) {
  std::vector<Cube> out;
  EnumerateCubes(comp, max_positive_arity, [&](const LeafCube& cube) {
    out.push_back(Cube{FeaturesOf(comp, cube.positive),
                       FeaturesOf(comp, cube.negative), cube.weight});
  });
  return out;
}

void EvaluateMetric(LeafCompilation* comp, const CubeMetric& metric,
                    SubsetInterner* interner) {
  const int d = comp->num_conditions();
  const std::size_t size = TableSize(d);
  const Mask full = comp->full_mask();
  const int cap = metric.max_positive_arity();
  const double leaf_value = comp->leaf.leaf_value;

  std::vector<double> scratch(size, 0.0);
  std::vector<char> touched(size, 0);
  std::vector<Mask> touched_list;
  std::vector<std::int64_t> subset_id(size, -1);
  std::vector<MetricTerm> terms;

  MetricTable& table = comp->table;
  table.offsets.assign(size + 1, 0);
  table.entries.clear();
  table.entry_masks.clear();
  for (std::size_t mi = 0; mi < size; ++mi) {
    const Mask m = static_cast<Mask>(mi);
    const Mask negative = full & ~m;
    for (Mask p : CappedSubmasks(m, cap)) {
      const double w = leaf_value * comp->pattern_weight[full & ~p];
      if (w == 0.0) continue;
      terms.clear();
      metric.Evaluate(p, negative, &terms);
      for (const MetricTerm& term : terms) {
        const double v = w * term.coefficient;
        if (!std::isfinite(v)) {
          throw Error(ErrorKind::kNumeric,
                      Where(comp->leaf) + ": metric '" +
                          std::string(metric.name()) +
                          "' produced a non-finite value for cube pos=" +
                          std::to_string(p) + " neg=" +
                          std::to_string(negative));
        }
        if (!touched[term.subset]) {
          touched[term.subset] = 1;
          touched_list.push_back(term.subset);
        }
        scratch[term.subset] += v;
      }
    }
    std::sort(touched_list.begin(), touched_list.end());
    for (Mask s : touched_list) {
      if (scratch[s] != 0.0) {
        if (subset_id[s] < 0) subset_id[s] = interner->Intern(FeaturesOf(*comp, s));
        table.entries.push_back(
            TableEntry{static_cast<std::uint32_t>(subset_id[s]), scratch[s]});
        table.entry_masks.push_back(s);
      }
      scratch[s] = 0.0;
      touched[s] = 0;
    }
    touched_list.clear();
    table.offsets[mi + 1] = static_cast<std::uint32_t>(table.entries.size());
  }
}

void AggregateConsumers(std::span<const LeafCompilation> comps,
                        const Dataset& consumer,
                        std::vector<RowAccumulator>* accumulators) {
  accumulators->resize(consumer.num_rows());
  for (const LeafCompilation& comp : comps) {
    if (!comp.table.built()) {
      throw Error(ErrorKind::kContract, "metric table not built");
    }
    for (std::size_t r = 0; r < consumer.num_rows(); ++r) {
      auto& acc = (*accumulators)[r];
      for (const TableEntry& e :
           comp.table.Row(ConsumerMask(comp.leaf, consumer, r))) {
        acc[e.subset_id] += e.value;
      }
    }
  }
}

SubsetValueMap FinishAccumulator(const RowAccumulator& acc,
                                 const SubsetInterner& interner) {
  SubsetValueMap out;
  for (const auto& [id, value] : acc) {
    if (value != 0.0) out.Add(interner.Lookup(id), value);
  }
  return out;
}

double EvaluateAssignment(const TreeEnsemble& ensemble,
                          const Dataset* background,
                          std::span<const double> consumer_row,
                          const FeatureSubset& coalition,
                          const EngineOptions& options) {
  double total = ensemble.base_score;
  for (std::size_t t = 0; t < ensemble.trees.size(); ++t) {
    for (const LeafCompilation& comp :
         CompileTree(ensemble.trees[t], static_cast<int>(t), background,
                     options)) {
      Mask x = 0;
      for (int i = 0; i < comp.num_conditions(); ++i) {
        if (std::binary_search(coalition.begin(), coalition.end(),
                               comp.feature(i))) {
          x |= Mask{1} << i;
        }
      }
      const Mask consumer = ConsumerMask(comp.leaf, consumer_row);
      EnumerateCubes(comp, -1, [&](const LeafCube& cube) {
        if (cube.consumer_mask() != consumer) return;
        if ((cube.positive & ~x) == 0 && (cube.negative & x) == 0) {
          total += cube.weight;
        }
      });
    }
  }
  return total;
}

namespace {

// Shared driver: compiles trees in batches and hands each tree's compiled
// leaves to `consume` in tree order.
template <typename Consume>
void ForEachCompiledTree(const TreeEnsemble& ensemble, const Dataset* background,
                         const CubeMetric& metric, const EngineOptions& options,
                         SubsetInterner* interner, Consume&& consume) {
  const std::size_t batch = static_cast<std::size_t>(std::max(options.threads, 1));
  for (std::size_t t0 = 0; t0 < ensemble.trees.size(); t0 += batch) {
    const std::size_t t1 = std::min(ensemble.trees.size(), t0 + batch);
    std::vector<std::vector<LeafCompilation>> comps(t1 - t0);
    internal::ParallelFor(t1 - t0, options.threads, [&](std::size_t i) {
      comps[i] = CompileTree(ensemble.trees[t0 + i], static_cast<int>(t0 + i),
                             background, options);
    });
    std::vector<LeafCompilation*> leaves;
    for (auto& tree_comps : comps) {
      for (auto& comp : tree_comps) leaves.push_back(&comp);
    }
    internal::ParallelFor(leaves.size(), options.threads, [&](std::size_t i) {
      EvaluateMetric(leaves[i], metric, interner);
    });
    consume(t0, comps);
  }
}

void CheckInputs(const TreeEnsemble& ensemble, const Dataset* background,
                 const Dataset& consumer) {
  CheckColumns(ensemble, consumer, "consumer");
  if (background != nullptr) {
    CheckColumns(ensemble, *background, "background");
    if (background->empty()) {
      throw Error(ErrorKind::kContract,
                  "background mode requires at least one background row");
    }
  }
}

}  // namespace

std::vector<SubsetValueMap> ComputeAttributions(const TreeEnsemble& ensemble,
                                                const Dataset* background,
                                                const Dataset& consumer,
                                                const CubeMetric& metric,
                                                const EngineOptions& options) {
  CheckInputs(ensemble, background, consumer);
  const std::size_t rows = consumer.num_rows();
  SubsetInterner interner;
  std::vector<RowAccumulator> acc(rows);

  LeafCompilation base = BaseScoreLeaf(ensemble.base_score);
  EvaluateMetric(&base, metric, &interner);
  for (auto& row : acc) {
    for (const TableEntry& e : base.table.Row(0)) row[e.subset_id] += e.value;
  }

  const std::size_t chunks =
      std::min<std::size_t>(rows, static_cast<std::size_t>(std::max(options.threads, 1)));
  ForEachCompiledTree(
      ensemble, background, metric, options, &interner,
      [&](std::size_t t0, std::vector<std::vector<LeafCompilation>>& comps) {
        internal::ParallelFor(chunks, options.threads, [&](std::size_t c) {
          const std::size_t begin = rows * c / chunks;
          const std::size_t end = rows * (c + 1) / chunks;
          for (std::size_t i = 0; i < comps.size(); ++i) {
            const auto& tree_comps = comps[i];
            VisitLeafMasks(
                ensemble.trees[t0 + i], consumer, begin, end,
                [&](std::size_t leaf, std::span<const Mask> masks) {
                  const MetricTable& table = tree_comps[leaf].table;
                  for (std::size_t r = 0; r < masks.size(); ++r) {
                    auto& row = acc[begin + r];
                    for (const TableEntry& e : table.Row(masks[r])) {
                      row[e.subset_id] += e.value;
                    }
                  }
                });
          }
        });
      });

  std::vector<SubsetValueMap> out(rows);
  internal::ParallelFor(rows, options.threads, [&](std::size_t r) {
    out[r] = FinishAccumulator(acc[r], interner);
  });
  return out;
}

SubsetValueMap ComputeMeanAttribution(const TreeEnsemble& ensemble,
                                      const Dataset* background,
                                      const Dataset& consumer,
                                      const CubeMetric& metric,
                                      const EngineOptions& options) {
  CheckInputs(ensemble, background, consumer);
  const std::size_t rows = consumer.num_rows();
  if (rows == 0) return {};
  SubsetInterner interner;
  RowAccumulator sum;

  LeafCompilation base = BaseScoreLeaf(ensemble.base_score);
  EvaluateMetric(&base, metric, &interner);
  for (const TableEntry& e : base.table.Row(0)) {
    sum[e.subset_id] += e.value * static_cast<double>(rows);
  }
  ForEachCompiledTree(
      ensemble, background, metric, options, &interner,
      [&](std::size_t t0, std::vector<std::vector<LeafCompilation>>& comps) {
        for (std::size_t i = 0; i < comps.size(); ++i) {
          const auto& tree_comps = comps[i];
          VisitLeafMasks(
              ensemble.trees[t0 + i], consumer, 0, rows,
              [&](std::size_t leaf, std::span<const Mask> masks) {
                const LeafCompilation& comp = tree_comps[leaf];
                std::vector<std::uint64_t> counts(
                    TableSize(comp.num_conditions()), 0);
                for (Mask m : masks) ++counts[m];
                for (std::size_t m = 0; m < counts.size(); ++m) {
                  if (counts[m] == 0) continue;
                  const double c = static_cast<double>(counts[m]);
                  for (const TableEntry& e :
                       comp.table.Row(static_cast<Mask>(m))) {
                    sum[e.subset_id] += e.value * c;
                  }
                }
              });
        }
      });
  RowAccumulator mean;
  for (const auto& [id, value] : sum) {
    mean[id] = value / static_cast<double>(rows);
  }
  return FinishAccumulator(mean, interner);
}

std::string CubesToJson(const LeafCompilation& comp, int max_positive_arity) {
  nlohmann::json cubes = nlohmann::json::array();
  EnumerateCubes(comp, max_positive_arity, [&](const LeafCube& cube) {
    cubes.push_back({{"pos", FeaturesOf(comp, cube.positive)},
                     {"neg", FeaturesOf(comp, cube.negative)},
                     {"w", cube.weight},
                     {"consumer", FeaturesOf(comp, cube.consumer_mask())}});
  });
  return cubes.dump();
}

std::string CompilationToJson(const LeafCompilation& comp) {
  nlohmann::json out = nlohmann::json::object();
  out["tree"] = comp.leaf.tree_index;
  out["leaf_node"] = comp.leaf.leaf_node;
  out["leaf_value"] = comp.leaf.leaf_value;
  out["mode"] = comp.mode == CoverageMode::kBackground ? "background"
                                                       : "path_dependent";
  nlohmann::json conditions = nlohmann::json::array();
  for (const SplitCondition& cond : comp.leaf.conditions) {
    nlohmann::json c = {{"feature", cond.feature}};
    c["lo"] = std::isfinite(cond.interval.lo) ? nlohmann::json(cond.interval.lo)
                                               : nlohmann::json(nullptr);
    c["hi"] = std::isfinite(cond.interval.hi) ? nlohmann::json(cond.interval.hi)
                                               : nlohmann::json(nullptr);
    conditions.push_back(std::move(c));
  }
  out["conditions"] = std::move(conditions);
  out["coverage"] = comp.coverage;
  out["pattern_weight"] = comp.pattern_weight;
  if (!comp.pd_weights.empty()) out["pd_weights"] = comp.pd_weights;
  return out.dump();
}

}  // namespace pdforest
