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

// Linear metrics over cubes. A cube is a conjunction of positive and
// negative literals over feature-participation variables; a metric maps a
// unit-weight cube to values on feature subsets and extends to weighted sums
// of cubes by linearity.

#ifndef PDFOREST_METRICS_H_
#define PDFOREST_METRICS_H_

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

namespace pdforest {

// Bitmask over the (at most 31) variables of one leaf.
using Mask = std::uint32_t;

// Sorted, duplicate-free feature indices.
using FeatureSubset = std::vector<int>;

class SubsetValueMap {
 public:
  using Map = std::map<FeatureSubset, double>;

  void Add(const FeatureSubset& subset, double value) { entries_[subset] += value; }
  // 0 for absent keys.
  double Get(const FeatureSubset& subset) const;
  bool Contains(const FeatureSubset& subset) const {
    return entries_.count(subset) != 0;
  }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // Removes entries that are exactly zero.
  void DropZeros();

  Map::const_iterator begin() const { return entries_.begin(); }
  Map::const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

 private:
  Map entries_;
};

struct Cube {
  FeatureSubset positive;
  FeatureSubset negative;
  double weight = 1.0;
};

struct MetricTerm {
  Mask subset;
  double coefficient;
};

class CubeMetric {
 public:
  virtual ~CubeMetric() = default;

  virtual std::string_view name() const = 0;
  // Cubes with more positive literals than this contribute nothing; -1 means
  // unbounded.
  virtual int max_positive_arity() const = 0;
  // Appends the terms of the unit-weight cube given by variable masks.
  virtual void Evaluate(Mask positive, Mask negative,
                        std::vector<MetricTerm>* out) const = 0;

  // Feature-space form: weight-scaled values keyed by feature subsets.
  SubsetValueMap Apply(const Cube& cube) const;
};

// Centered partial dependence: +w for f when S+ = {f} and f not in S-,
// -w for every f in S- when S+ is empty.
class CpdvMetric final : public CubeMetric {
 public:
  std::string_view name() const override { return "cpdv"; }
  int max_positive_arity() const override { return 1; }
  void Evaluate(Mask positive, Mask negative,
                std::vector<MetricTerm>* out) const override;
};

// Interaction values of every order: (-1)^{|X|-|S+|} for each X with
// S+ <= X <= S+ u S-. Unsatisfiable cubes yield nothing.
class PdivMetric final : public CubeMetric {
 public:
  std::string_view name() const override { return "pdiv"; }
  int max_positive_arity() const override { return -1; }
  void Evaluate(Mask positive, Mask negative,
                std::vector<MetricTerm>* out) const override;
};

// PdivMetric restricted to subsets of size one and two.
class PdivOrderLe2Metric final : public CubeMetric {
 public:
  std::string_view name() const override { return "pdiv_order_le2"; }
  int max_positive_arity() const override { return 2; }
  void Evaluate(Mask positive, Mask negative,
                std::vector<MetricTerm>* out) const override;
};

}  // namespace pdforest

#endif  // PDFOREST_METRICS_H_
