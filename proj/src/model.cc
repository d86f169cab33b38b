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

#include "pdforest/model.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pdforest/errors.h"

namespace pdforest {
namespace {

using nlohmann::json;

[[noreturn]] void SchemaError(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::kSchema, path + ": " + msg);
}

double RequireNumber(const json& node, const char* key,
                     const std::string& path) {
  const auto it = node.find(key);
  if (it == node.end()) SchemaError(path, std::string("missing key '") + key + "'");
  if (!it->is_number()) {
    SchemaError(path + "." + key, "expected a number");
  }
  return it->get<double>();
}

class DumpParser {
 public:
  explicit DumpParser(int declared_features)
      : declared_features_(declared_features) {}

  Tree ParseTree(const json& root, const std::string& path) {
    Tree tree;
    ParseNode(root, path, &tree);
    return tree;
  }

  int max_feature() const { return max_feature_; }

 private:
  int ParseNode(const json& node, const std::string& path, Tree* tree) {
    if (!node.is_object()) SchemaError(path, "expected a node object");
    for (const auto& item : node.items()) {
      const std::string& key = item.key();
      if (key == "categories" || key == "split_type") {
        SchemaError(path, "categorical / non-numerical splits are not supported");
      }
      if (key != "split_feature" && key != "threshold" && key != "yes" &&
          key != "no" && key != "leaf" && key != "cover" && key != "nodeid" &&
          key != "decision_type" && key != "missing") {
        SchemaError(path, "unknown key '" + key + "'");
      }
    }

    const int index = static_cast<int>(tree->nodes.size());
    tree->nodes.emplace_back();
    Node parsed;
    parsed.source_id = index;
    if (auto it = node.find("nodeid"); it != node.end()) {
      if (!it->is_number_integer()) SchemaError(path + ".nodeid", "expected an integer");
      parsed.source_id = it->get<int>();
    }
    if (auto it = node.find("cover"); it != node.end()) {
      if (!it->is_number()) SchemaError(path + ".cover", "expected a number");
      parsed.cover = it->get<double>();
      if (!(parsed.cover >= 0.0) || !std::isfinite(parsed.cover)) {
        SchemaError(path + ".cover", "cover must be finite and non-negative");
      }
    }

    if (node.contains("leaf")) {
      for (const char* key : {"split_feature", "threshold", "yes", "no"}) {
        if (node.contains(key)) {
          SchemaError(path, std::string("leaf node must not carry '") + key + "'");
        }
      }
      parsed.leaf_value = RequireNumber(node, "leaf", path);
      if (!std::isfinite(parsed.leaf_value)) {
        SchemaError(path + ".leaf", "leaf value must be finite");
      }
      tree->nodes[index] = parsed;
      return index;
    }

    if (auto it = node.find("decision_type"); it != node.end()) {
      if (!it->is_string() || it->get<std::string>() != "<") {
        SchemaError(path + ".decision_type",
                    "unsupported split type (only \"<\" is accepted)");
      }
    }
    const auto feature_it = node.find("split_feature");
    if (feature_it == node.end()) {
      SchemaError(path, "node has neither 'leaf' nor 'split_feature'");
    }
    if (!feature_it->is_number_integer() || feature_it->get<long long>() < 0) {
      SchemaError(path + ".split_feature", "expected a non-negative integer");
    }
    const long long feature = feature_it->get<long long>();
    if (declared_features_ >= 0 && feature >= declared_features_) {
      SchemaError(path + ".split_feature",
                  "unknown feature reference " + std::to_string(feature) +
                      " (model declares " + std::to_string(declared_features_) +
                      " features)");
    }
    if (feature > 1'000'000) {
      SchemaError(path + ".split_feature", "feature index out of range");
    }
    parsed.feature = static_cast<int>(feature);
    max_feature_ = std::max(max_feature_, parsed.feature);
    parsed.threshold = RequireNumber(node, "threshold", path);
    if (std::isnan(parsed.threshold)) {
      SchemaError(path + ".threshold", "threshold must not be NaN");
    }
    for (const char* key : {"yes", "no"}) {
      if (!node.contains(key)) {
        SchemaError(path, std::string("missing key '") + key + "'");
      }
    }
    parsed.yes = ParseNode(node.at("yes"), path + ".yes", tree);
    parsed.no = ParseNode(node.at("no"), path + ".no", tree);
    tree->nodes[index] = parsed;
    return index;
  }

  int declared_features_;
  int max_feature_ = -1;
};

void HashBytes(std::uint64_t* h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    *h ^= bytes[i];
    *h *= 1099511628211ull;
  }
}

template <typename T>
void HashValue(std::uint64_t* h, T value) {
  HashBytes(h, &value, sizeof(value));
}

json NodeToJson(const Tree& tree, int index) {
  const Node& node = tree.nodes[index];
  json out = json::object();
  out["nodeid"] = node.source_id;
  if (node.IsLeaf()) {
    out["leaf"] = node.leaf_value;
  } else {
    out["split_feature"] = node.feature;
    out["threshold"] = node.threshold;
    out["yes"] = NodeToJson(tree, node.yes);
    out["no"] = NodeToJson(tree, node.no);
  }
  if (node.HasCover()) out["cover"] = node.cover;
  return out;
}

}  // namespace

Interval Interval::Intersect(const Interval& other) const {
  return Interval{std::max(lo, other.lo), std::min(hi, other.hi)};
}

SplitCondition Node::YesCondition() const {
  return SplitCondition{feature,
                        Interval{-std::numeric_limits<double>::infinity(),
                                 threshold}};
}

SplitCondition Node::NoCondition() const {
  return SplitCondition{
      feature, Interval{threshold, std::numeric_limits<double>::infinity()}};
}

int Tree::Depth() const {
  int depth = 0;
  std::vector<std::pair<int, int>> stack = {{0, 0}};
  while (!stack.empty()) {
    const auto [index, d] = stack.back();
    stack.pop_back();
    const Node& node = nodes[index];
    if (node.IsLeaf()) {
      depth = std::max(depth, d);
    } else {
      stack.emplace_back(node.yes, d + 1);
      stack.emplace_back(node.no, d + 1);
    }
  }
  return depth;
}

int Tree::NumLeaves() const {
  return static_cast<int>(std::count_if(
      nodes.begin(), nodes.end(), [](const Node& n) { return n.IsLeaf(); }));
}

int TreeEnsemble::MaxPathFeatures() const {
  int best = 0;
  for (std::size_t t = 0; t < trees.size(); ++t) {
    for (const LeafPath& path :
         ExtractTreePaths(trees[t], static_cast<int>(t))) {
      best = std::max(best, path.num_conditions());
    }
  }
  return best;
}

bool TreeEnsemble::HasCovers() const {
  for (const Tree& tree : trees) {
    for (const Node& node : tree.nodes) {
      if (!node.HasCover()) return false;
    }
  }
  return true;
}

TreeEnsemble ParseModel(std::string_view bytes, ModelFormat format) {
  if (format != ModelFormat::kTreeDumpJson) {
    throw Error(ErrorKind::kContract, "unsupported model format");
  }
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse,
                "$: malformed JSON at byte " + std::to_string(e.byte) + ": " +
                    e.what());
  }

  TreeEnsemble ensemble;
  const json* trees = nullptr;
  std::string trees_path = "$";
  int declared_features = -1;
  if (doc.is_array()) {
    trees = &doc;
  } else if (doc.is_object()) {
    for (const auto& item : doc.items()) {
      if (item.key() != "trees" && item.key() != "base_score" &&
          item.key() != "feature_names") {
        SchemaError("$", "unknown key '" + item.key() + "'");
      }
    }
    const auto it = doc.find("trees");
    if (it == doc.end() || !it->is_array()) {
      SchemaError("$.trees", "expected an array of trees");
    }
    trees = &*it;
    trees_path = "$.trees";
    if (auto base = doc.find("base_score"); base != doc.end()) {
      if (!base->is_number()) SchemaError("$.base_score", "expected a number");
      ensemble.base_score = base->get<double>();
    }
    if (auto names = doc.find("feature_names"); names != doc.end()) {
      if (!names->is_array()) SchemaError("$.feature_names", "expected an array");
      for (std::size_t i = 0; i < names->size(); ++i) {
        if (!(*names)[i].is_string()) {
          SchemaError("$.feature_names[" + std::to_string(i) + "]",
                      "expected a string");
        }
        ensemble.feature_names.push_back((*names)[i].get<std::string>());
      }
      declared_features = static_cast<int>(ensemble.feature_names.size());
    }
  } else {
    SchemaError("$", "expected an array of trees or a model object");
  }

  DumpParser parser(declared_features);
  for (std::size_t t = 0; t < trees->size(); ++t) {
    ensemble.trees.push_back(parser.ParseTree(
        (*trees)[t], trees_path + "[" + std::to_string(t) + "]"));
  }
  if (declared_features < 0) {
    for (int f = 0; f <= parser.max_feature(); ++f) {
      ensemble.feature_names.push_back("f" + std::to_string(f));
    }
  }
  return ensemble;
}

TreeEnsemble LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kParse, path + ": cannot open model file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseModel(buffer.str());
}

std::string SerializeModel(const TreeEnsemble& ensemble) {
  json out = json::object();
  out["feature_names"] = ensemble.feature_names;
  out["base_score"] = ensemble.base_score;
  json trees = json::array();
  for (const Tree& tree : ensemble.trees) trees.push_back(NodeToJson(tree, 0));
  out["trees"] = std::move(trees);
  return out.dump(1);
}

void ValidateEnsemble(const TreeEnsemble& ensemble) {
  for (std::size_t t = 0; t < ensemble.trees.size(); ++t) {
    const Tree& tree = ensemble.trees[t];
    const std::string prefix = "trees[" + std::to_string(t) + "]";
    if (tree.nodes.empty()) SchemaError(prefix, "empty tree");
    std::vector<int> parents(tree.nodes.size(), 0);
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      const Node& node = tree.nodes[i];
      const std::string where = prefix + ".nodes[" + std::to_string(i) + "]";
      if (node.HasCover() && node.cover < 0) SchemaError(where, "negative cover");
      if (node.IsLeaf()) continue;
      if (node.feature >= ensemble.num_features()) {
        SchemaError(where, "unknown feature reference " +
                               std::to_string(node.feature));
      }
      for (int child : {node.yes, node.no}) {
        if (child <= 0 || child >= static_cast<int>(tree.nodes.size())) {
          SchemaError(where, "child index out of range");
        }
        ++parents[child];
      }
    }
    for (std::size_t i = 1; i < tree.nodes.size(); ++i) {
      if (parents[i] != 1) {
        SchemaError(prefix + ".nodes[" + std::to_string(i) + "]",
                    "node is not referenced by exactly one parent");
      }
    }
  }
}

std::vector<LeafPath> ExtractTreePaths(const Tree& tree, int tree_index) {
  std::vector<LeafPath> paths;
  if (tree.nodes.empty()) return paths;

  LeafPath current;
  current.tree_index = tree_index;
  // Recursion over the path; the merged state is restored on the way back.
  auto visit = [&](auto&& self, int index) -> void {
    const Node& node = tree.nodes[index];
    if (node.IsLeaf()) {
      current.leaf_node = index;
      current.leaf_value = node.leaf_value;
      paths.push_back(current);
      return;
    }
    for (const bool take_yes : {true, false}) {
      const SplitCondition branch =
          take_yes ? node.YesCondition() : node.NoCondition();
      int slot = -1;
      for (int c = 0; c < current.num_conditions(); ++c) {
        if (current.conditions[c].feature == node.feature) slot = c;
      }
      Interval saved;
      if (slot < 0) {
        slot = current.num_conditions();
        current.conditions.push_back(branch);
      } else {
        saved = current.conditions[slot].interval;
        current.conditions[slot].interval = saved.Intersect(branch.interval);
      }
      const bool reachable = !current.conditions[slot].interval.Empty();
      current.steps.push_back(PathStep{index, take_yes});
      current.step_condition.push_back(slot);
      if (reachable) self(self, take_yes ? node.yes : node.no);
      current.steps.pop_back();
      current.step_condition.pop_back();
      if (slot == current.num_conditions() - 1 &&
          std::count(current.step_condition.begin(),
                     current.step_condition.end(), slot) == 0) {
        current.conditions.pop_back();
      } else {
        current.conditions[slot].interval = saved;
      }
    }
  };
  visit(visit, 0);
  return paths;
}

std::vector<LeafPath> ExtractPaths(const TreeEnsemble& ensemble) {
  std::vector<LeafPath> paths;
  for (std::size_t t = 0; t < ensemble.trees.size(); ++t) {
    auto tree_paths = ExtractTreePaths(ensemble.trees[t], static_cast<int>(t));
    paths.insert(paths.end(), std::make_move_iterator(tree_paths.begin()),
                 std::make_move_iterator(tree_paths.end()));
  }
  return paths;
}

double PredictTree(const Tree& tree, std::span<const double> row) {
  int index = 0;
  while (!tree.nodes[index].IsLeaf()) {
    const Node& node = tree.nodes[index];
    if (node.feature >= static_cast<int>(row.size())) {
      throw Error(ErrorKind::kInput,
                  "row has no value for feature " + std::to_string(node.feature));
    }
    const double value = row[node.feature];
    if (std::isnan(value)) {
      throw Error(ErrorKind::kInput, "missing value for feature " +
                                         std::to_string(node.feature));
    }
    index = value < node.threshold ? node.yes : node.no;
  }
  return tree.nodes[index].leaf_value;
}

double Predict(const TreeEnsemble& ensemble, std::span<const double> row) {
  double sum = ensemble.base_score;
  for (const Tree& tree : ensemble.trees) sum += PredictTree(tree, row);
  return sum;
}

TreeEnsemble AlignFeatures(const TreeEnsemble& ensemble,
                           const std::vector<std::string>& columns) {
  std::unordered_map<std::string, int> by_name;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    by_name.emplace(columns[i], static_cast<int>(i));
  }
  TreeEnsemble aligned = ensemble;
  aligned.feature_names = columns;
  for (Tree& tree : aligned.trees) {
    for (Node& node : tree.nodes) {
      if (node.IsLeaf()) continue;
      const std::string& name = ensemble.feature_names.at(node.feature);
      const auto it = by_name.find(name);
      if (it == by_name.end()) {
        throw Error(ErrorKind::kInput,
                    "data has no column '" + name + "' used by the model");
      }
      node.feature = it->second;
    }
  }
  return aligned;
}

std::uint64_t Fingerprint(const TreeEnsemble& ensemble) {
  std::uint64_t h = 14695981039346656037ull;
  HashValue(&h, ensemble.base_score);
  for (const std::string& name : ensemble.feature_names) {
    HashBytes(&h, name.data(), name.size());
    HashValue(&h, '\0');
  }
  for (const Tree& tree : ensemble.trees) {
    HashValue(&h, tree.nodes.size());
    for (const Node& node : tree.nodes) {
      HashValue(&h, node.feature);
      HashValue(&h, node.threshold);
      HashValue(&h, node.yes);
      HashValue(&h, node.no);
      HashValue(&h, node.leaf_value);
      HashValue(&h, node.HasCover() ? node.cover : -1.0);
    }
  }
  return h;
}

}  // namespace pdforest
