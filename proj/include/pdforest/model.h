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

// Tree ensemble representation, the JSON tree-dump parser, prediction and
// root-to-leaf path extraction.
//
// Split convention: an internal node "feature < threshold" sends values
// strictly below the threshold to its "yes" child; ties go to "no".

#ifndef PDFOREST_MODEL_H_
#define PDFOREST_MODEL_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdforest {

// Half-open interval [lo, hi). The whole real line is (-inf, +inf).
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool Contains(double x) const { return lo <= x && x < hi; }
  bool Empty() const { return !(lo < hi); }
  Interval Intersect(const Interval& other) const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// A condition "value of `feature` lies in `interval`". The complement of a
// single split is again an interval; after merging it generally is not, so
// the complement is expressed as the negation of Satisfied().
struct SplitCondition {
  int feature = -1;
  Interval interval;

  bool Satisfied(double value) const { return interval.Contains(value); }

  friend bool operator==(const SplitCondition&, const SplitCondition&) =
      default;
};

struct Node {
  // -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int yes = -1;
  int no = -1;
  double leaf_value = 0.0;
  // Training cover; NaN when the dump does not provide one.
  double cover = std::numeric_limits<double>::quiet_NaN();
  // "nodeid" from the dump when present, otherwise the preorder index.
  int source_id = -1;

  bool IsLeaf() const { return feature < 0; }
  bool HasCover() const { return cover == cover; }
  // Condition satisfied by values routed to the yes (resp. no) child.
  SplitCondition YesCondition() const;
  SplitCondition NoCondition() const;
};

// Node 0 is the root.
struct Tree {
  std::vector<Node> nodes;

  int Depth() const;
  int NumLeaves() const;
};

struct TreeEnsemble {
  std::vector<Tree> trees;
  double base_score = 0.0;
  std::vector<std::string> feature_names;

  int num_features() const { return static_cast<int>(feature_names.size()); }
  // Largest merged condition count over all reachable leaves.
  int MaxPathFeatures() const;
  // True when every node carries a cover.
  bool HasCovers() const;
};

struct PathStep {
  int node = -1;
  bool took_yes = false;
};

// One reachable root-to-leaf path. `conditions` holds one merged condition
// per distinct feature, ordered by first occurrence along the path;
// `step_condition[i]` is the index of the condition that `steps[i]` feeds.
struct LeafPath {
  int tree_index = 0;
  int leaf_node = 0;
  double leaf_value = 0.0;
  std::vector<SplitCondition> conditions;
  std::vector<PathStep> steps;
  std::vector<int> step_condition;

  int depth() const { return static_cast<int>(steps.size()); }
  int num_conditions() const { return static_cast<int>(conditions.size()); }
};

enum class ModelFormat { kTreeDumpJson };

// Parses a JSON tree dump; see docs/model_dump.md. Throws Error(kParse) on
// malformed JSON and Error(kSchema) on schema violations, in both cases with
// the JSON path of the offending node.
TreeEnsemble ParseModel(std::string_view bytes,
                        ModelFormat format = ModelFormat::kTreeDumpJson);
TreeEnsemble LoadModel(const std::string& path);

// Inverse of ParseModel (covers are emitted when present).
std::string SerializeModel(const TreeEnsemble& ensemble);

// Checks structural invariants; throws Error(kSchema).
void ValidateEnsemble(const TreeEnsemble& ensemble);

std::vector<LeafPath> ExtractTreePaths(const Tree& tree, int tree_index);
std::vector<LeafPath> ExtractPaths(const TreeEnsemble& ensemble);

// Sum of one leaf per tree plus base_score. NaN cells are rejected.
double Predict(const TreeEnsemble& ensemble, std::span<const double> row);
double PredictTree(const Tree& tree, std::span<const double> row);

// Rewrites split feature indices so that they refer to `columns` (matched by
// name). Features referenced by a split must be present; the result uses
// `columns` as its feature names.
TreeEnsemble AlignFeatures(const TreeEnsemble& ensemble,
                           const std::vector<std::string>& columns);

// Stable 64-bit FNV-1a fingerprint over structure and values.
std::uint64_t Fingerprint(const TreeEnsemble& ensemble);

}  // namespace pdforest

#endif  // PDFOREST_MODEL_H_
