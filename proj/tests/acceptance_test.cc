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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (capped at 1). Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pdforest/dataset.h"
#include "pdforest/errors.h"
#include "pdforest/metrics.h"
#include "pdforest/model.h"
#include "pdforest/oracle.h"
#include "pdforest/output.h"
#include "pdforest/tasks.h"
#include "pdforest/wdnf.h"
#include "support/random_model.h"

namespace pdforest {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kOracleTolerance = 1e-9;
constexpr double kArityTolerance = 1e-12;
constexpr double kPdpRuntimeLimitSeconds = 10.0;
constexpr double kMinDepthRatio = 1.3;
constexpr double kMaxDepthRatio = 3.0;
constexpr double kBenchmarkLimitSeconds = 600.0;
constexpr int kBenchmarkTrees = 100;
constexpr int kBenchmarkRows = 50000;
constexpr int kBenchmarkFeatures = 10;
constexpr int kBenchmarkK = 10;
constexpr int kBenchmarkRepetitions = 3;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string Fmt(double value) { return FormatDouble(value); }

class MaxDiff {
 public:
  void Add(double expected, double actual) {
    ++count_;
    const double diff = std::abs(expected - actual);
    if (!(diff <= max_)) max_ = diff;
  }
  double max() const { return max_; }
  std::size_t count() const { return count_; }

 private:
  double max_ = 0.0;
  std::size_t count_ = 0;
};

// Random fixture with dimensions drawn from the given bounds.
testing::RandomFixture Fixture(std::uint64_t seed, int max_features,
                               int max_trees, int max_depth, int max_rows) {
  std::mt19937_64 rng(seed);
  auto draw = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  testing::RandomModelConfig config;
  config.num_features = draw(2, max_features);
  config.num_trees = draw(1, max_trees);
  config.max_depth = draw(1, max_depth);
  config.train_rows = draw(std::min(8, max_rows), max_rows);
  return testing::MakeRandomFixture(config, seed * 7919 + 13);
}

std::vector<FeatureSubset> AllSubsets(int num_features, int max_size) {
  std::vector<FeatureSubset> out;
  for (unsigned s = 0; s < (1u << num_features); ++s) {
    if (std::popcount(s) > max_size) continue;
    FeatureSubset subset;
    for (int f = 0; f < num_features; ++f) {
      if ((s >> f) & 1u) subset.push_back(f);
    }
    out.push_back(subset);
  }
  return out;
}

Outcome PdpOracleEquivalence() {
  const auto start = Clock::now();
  MaxDiff diff;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 6, 10, 4, 64);
    const int k = 1 + static_cast<int>(seed % 8);
    const SamplingMode sampling =
        seed % 2 ? SamplingMode::kQuantile : SamplingMode::kUniform;
    const PdpResult result =
        Wpdp(fx.model, &fx.train, k, PdpMode::kExact, sampling);
    diff.Add(OracleMeanPrediction(fx.model, fx.train), result.mean_prediction);
    for (const FeatureCurve& curve : result.curves) {
      for (const PdpPoint& p : curve.points) {
        diff.Add(OraclePdv(fx.model, fx.train,
                           Coalition{{curve.feature}, {p.value}}),
                 p.pdv);
      }
    }
  }
  const double elapsed = Seconds(start);
  Outcome out;
  out.pass = diff.max() <= kOracleTolerance && elapsed < kPdpRuntimeLimitSeconds;
  out.detail = "20 models, " + std::to_string(diff.count()) +
               " values, max |diff| " + Fmt(diff.max()) + ", " +
               Fmt(std::round(elapsed * 1000) / 1000) + " s (limit " +
               Fmt(kPdpRuntimeLimitSeconds) + " s)";
  return out;
}

Outcome JointPdpOracleEquivalence() {
  MaxDiff diff;
  std::size_t pairs = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 6, 10, 4, 64);
    const int k = 1 + static_cast<int>(seed % 8);
    const SamplingMode sampling =
        seed % 2 ? SamplingMode::kQuantile : SamplingMode::kUniform;
    const JointPdpResult result =
        WJointPdp(fx.model, &fx.train, k, PdpMode::kExact, sampling);
    const std::size_t expected_pairs =
        fx.model.num_features() * (fx.model.num_features() - 1) / 2;
    if (result.pairs.size() != expected_pairs) {
      return {false, "seed " + std::to_string(seed) + ": " +
                         std::to_string(result.pairs.size()) + " pairs, want " +
                         std::to_string(expected_pairs)};
    }
    for (const PairMatrix& pair : result.pairs) {
      ++pairs;
      for (std::size_t i = 0; i < result.k; ++i) {
        for (std::size_t j = 0; j < result.k; ++j) {
          diff.Add(OraclePdv(fx.model, fx.train,
                             Coalition{{pair.feature_a, pair.feature_b},
                                       {pair.a_values[i], pair.b_values[j]}}),
                   pair.pdv[i * result.k + j]);
        }
      }
    }
  }
  return {diff.max() <= kOracleTolerance,
          std::to_string(pairs) + " pairs, " + std::to_string(diff.count()) +
              " cells, max |diff| " + Fmt(diff.max())};
}

Outcome PdivOracleEquivalence() {
  MaxDiff diff;
  std::size_t missing = 0;
  std::size_t oracle_nonzero = 0;
  for (std::uint64_t seed = 101; seed <= 120; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 6, 6, 4, 32);
    const std::size_t n = std::min<std::size_t>(16, fx.train.num_rows() / 2);
    const Dataset background = testing::SliceRows(fx.train, 0, n);
    const Dataset consumer = testing::SliceRows(fx.train, n, 2 * n);
    const AttributionResult result =
        AnyOrderPdivs(fx.model, consumer, &background);
    for (std::size_t r = 0; r < consumer.num_rows(); ++r) {
      const std::vector<double> row = consumer.Row(r);
      for (const auto& [subset, value] : result.rows[r]) {
        diff.Add(OraclePdiv(fx.model, background, CoalitionFromRow(subset, row)),
                 value);
      }
      for (const FeatureSubset& subset :
           AllSubsets(fx.model.num_features(), fx.model.num_features())) {
        const double expected =
            OraclePdiv(fx.model, background, CoalitionFromRow(subset, row));
        if (std::abs(expected) > kOracleTolerance) {
          ++oracle_nonzero;
          if (!result.rows[r].Contains(subset)) ++missing;
        }
      }
    }
  }
  return {diff.max() <= kOracleTolerance && missing == 0,
          "20 models, " + std::to_string(diff.count()) +
              " emitted values, max |diff| " + Fmt(diff.max()) + ", " +
              std::to_string(missing) + " of " +
              std::to_string(oracle_nonzero) +
              " oracle-nonzero subsets missing"};
}

Outcome MoebiusReconstruction() {
  MaxDiff diff;
  for (std::uint64_t seed = 201; seed <= 210; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 6, 8, 4, 32);
    const std::size_t n = fx.train.num_rows() / 2;
    const Dataset background = testing::SliceRows(fx.train, 0, n);
    const Dataset consumer =
        testing::SliceRows(fx.train, n, std::min(2 * n, n + 16));
    for (const bool exact : {true, false}) {
      const AttributionResult result =
          AnyOrderPdivs(fx.model, consumer, exact ? &background : nullptr);
      for (std::size_t r = 0; r < consumer.num_rows(); ++r) {
        const std::vector<double> row = consumer.Row(r);
        for (const FeatureSubset& s : AllSubsets(fx.model.num_features(), 3)) {
          double sum = 0.0;
          for (const auto& [subset, value] : result.rows[r]) {
            if (std::includes(s.begin(), s.end(), subset.begin(),
                              subset.end())) {
              sum += value;
            }
          }
          const Coalition coalition = CoalitionFromRow(s, row);
          diff.Add(exact ? OraclePdv(fx.model, background, coalition)
                         : OraclePdvPathDependent(fx.model, coalition),
                   sum);
        }
      }
    }
  }
  return {diff.max() <= kOracleTolerance,
          "10 models, exact and approximate, " + std::to_string(diff.count()) +
              " subsets, max |diff| " + Fmt(diff.max())};
}

bool SameCurves(const PdpResult& a, const PdpResult& b, std::size_t features) {
  if (a.mean_prediction != b.mean_prediction) return false;
  for (std::size_t f = 0; f < features; ++f) {
    const auto& pa = a.curves[f].points;
    const auto& pb = b.curves[f].points;
    if (pa.size() != pb.size()) return false;
    for (std::size_t i = 0; i < pa.size(); ++i) {
      if (pa[i].value != pb[i].value || pa[i].pdv != pb[i].pdv ||
          pa[i].cpdv != pb[i].cpdv) {
        return false;
      }
    }
    if (a.curves[f].steps.has_value() != b.curves[f].steps.has_value()) {
      return false;
    }
    if (a.curves[f].steps &&
        (a.curves[f].steps->breakpoints != b.curves[f].steps->breakpoints ||
         a.curves[f].steps->levels != b.curves[f].steps->levels)) {
      return false;
    }
  }
  return true;
}

Outcome NullPlayer() {
  constexpr int kDummies = 5;
  std::vector<std::string> failures;
  std::size_t checked_models = 0;
  for (std::uint64_t seed = 301; seed <= 310; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 5, 6, 4, 48);
    std::mt19937_64 rng(seed);
    const Dataset train = testing::AppendDummyColumns(fx.train, kDummies, rng);
    const TreeEnsemble model = AlignFeatures(fx.model, train.columns());
    const std::size_t f = fx.model.num_features();
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    ++checked_models;
    for (const PdpMode mode : {PdpMode::kExact, PdpMode::kApproximate}) {
      const std::string m = std::string(PdpModeName(mode)) + " ";
      const PdpResult base =
          Wpdp(fx.model, &fx.train, 5, mode, SamplingMode::kQuantile);
      const PdpResult padded =
          Wpdp(model, &train, 5, mode, SamplingMode::kQuantile);
      if (!SameCurves(base, padded, f)) failures.push_back(tag + m + "pdp");
      for (std::size_t d = f; d < f + kDummies; ++d) {
        for (const PdpPoint& p : padded.curves[d].points) {
          if (p.cpdv != 0.0) failures.push_back(tag + m + "dummy cpdv");
        }
      }
      const PdpResult full_base = FullPdp(fx.model, &fx.train, mode);
      const PdpResult full_padded = FullPdp(model, &train, mode);
      if (!SameCurves(full_base, full_padded, f)) {
        failures.push_back(tag + m + "full pdp");
      }
      for (std::size_t d = f; d < f + kDummies; ++d) {
        for (const PdpPoint& p : full_padded.curves[d].points) {
          if (p.cpdv != 0.0) failures.push_back(tag + m + "dummy full cpdv");
        }
      }

      const JointPdpResult joint_base =
          WJointPdp(fx.model, &fx.train, 3, mode, SamplingMode::kQuantile);
      const JointPdpResult joint_padded =
          WJointPdp(model, &train, 3, mode, SamplingMode::kQuantile);
      std::map<std::pair<int, int>, const PairMatrix*> padded_pairs;
      for (const PairMatrix& p : joint_padded.pairs) {
        padded_pairs[{p.feature_a, p.feature_b}] = &p;
      }
      for (const PairMatrix& p : joint_base.pairs) {
        const PairMatrix* q = padded_pairs.at({p.feature_a, p.feature_b});
        if (p.pdv != q->pdv || p.a_values != q->a_values ||
            p.b_values != q->b_values) {
          failures.push_back(tag + m + "joint pdp");
        }
      }
      // A pair with a dummy has a zero interaction term: its joint PDV is the
      // other feature's PDV.
      for (const PairMatrix& p : joint_padded.pairs) {
        if (static_cast<std::size_t>(p.feature_b) < f) continue;
        const std::size_t k = joint_padded.k;
        for (std::size_t i = 0; i < k; ++i) {
          const Coalition a{{p.feature_a}, {p.a_values[i]}};
          double pdv_a = base.mean_prediction;
          if (static_cast<std::size_t>(p.feature_a) < f) {
            pdv_a = mode == PdpMode::kExact
                        ? OraclePdv(fx.model, fx.train, a)
                        : OraclePdvPathDependent(fx.model, a);
          }
          for (std::size_t j = 0; j < k; ++j) {
            if (std::abs(p.pdv[i * k + j] - pdv_a) > kOracleTolerance) {
              failures.push_back(tag + m + "dummy joint pdv");
            }
          }
        }
      }

      const Dataset consumer_base = testing::SliceRows(fx.train, 0, 8);
      const Dataset consumer = testing::SliceRows(train, 0, 8);
      const AttributionResult pdiv_base = AnyOrderPdivs(
          fx.model, consumer_base,
          mode == PdpMode::kExact ? &fx.train : nullptr);
      const AttributionResult pdiv_padded = AnyOrderPdivs(
          model, consumer, mode == PdpMode::kExact ? &train : nullptr);
      for (std::size_t r = 0; r < 8; ++r) {
        if (pdiv_base.rows[r].entries() != pdiv_padded.rows[r].entries()) {
          failures.push_back(tag + m + "pdiv");
        }
        for (const auto& [subset, value] : pdiv_padded.rows[r]) {
          if (static_cast<std::size_t>(subset.empty() ? 0 : subset.back()) >= f) {
            failures.push_back(tag + m + "dummy pdiv");
          }
        }
      }
    }
  }
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  Outcome out;
  out.pass = failures.empty();
  out.detail = std::to_string(checked_models) +
               " models x 5 dummies, exact and approximate: ";
  if (failures.empty()) {
    out.detail += "pdp, full pdp, joint pdp and pdiv unchanged, dummies 0";
  } else {
    out.detail += failures.front();
    if (failures.size() > 1) {
      out.detail += " (+" + std::to_string(failures.size() - 1) + " more)";
    }
  }
  return out;
}

Outcome EnumerationCount() {
  const PdivMetric metric;
  std::vector<MetricTerm> terms;
  std::string detail;
  bool pass = true;
  for (int d = 1; d <= 10; ++d) {
    const Mask full = (Mask{1} << d) - 1;
    std::uint64_t pairs = 0;
    std::uint64_t cubes = 0;
    for (Mask positive = 0; positive <= full; ++positive) {
      const Mask rest = full & ~positive;
      for (Mask negative = rest;; negative = (negative - 1) & rest) {
        terms.clear();
        metric.Evaluate(positive, negative, &terms);
        pairs += terms.size();
        ++cubes;
        if (negative == 0) break;
      }
    }
    std::uint64_t four = 1, three = 1;
    for (int i = 0; i < d; ++i) {
      four *= 4;
      three *= 3;
    }
    if (pairs != four || cubes != three) {
      pass = false;
      detail += "d=" + std::to_string(d) + ": " + std::to_string(pairs) +
                " pairs over " + std::to_string(cubes) + " cubes; ";
    }
  }
  if (pass) detail = "d = 1..10: pairs = 4^d over 3^d cubes";
  return {pass, detail};
}

class Uncapped final : public CubeMetric {
 public:
  explicit Uncapped(const CubeMetric& inner) : inner_(inner) {}
  std::string_view name() const override { return "uncapped"; }
  int max_positive_arity() const override { return -1; }
  void Evaluate(Mask positive, Mask negative,
                std::vector<MetricTerm>* out) const override {
    if (std::popcount(positive) > inner_.max_positive_arity()) return;
    inner_.Evaluate(positive, negative, out);
  }

 private:
  const CubeMetric& inner_;
};

Outcome AritySoundness() {
  const CpdvMetric cpdv;
  const PdivOrderLe2Metric le2;
  MaxDiff diff;
  std::size_t key_mismatches = 0;
  for (std::uint64_t seed = 401; seed <= 410; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 6, 8, 4, 48);
    const Dataset consumer = testing::SliceRows(fx.train, 0, 12);
    for (const bool exact : {true, false}) {
      const Dataset* background = exact ? &fx.train : nullptr;
      for (const CubeMetric* metric :
           {static_cast<const CubeMetric*>(&cpdv),
            static_cast<const CubeMetric*>(&le2)}) {
        const Uncapped uncapped(*metric);
        const auto capped =
            ComputeAttributions(fx.model, background, consumer, *metric);
        const auto full =
            ComputeAttributions(fx.model, background, consumer, uncapped);
        for (std::size_t r = 0; r < consumer.num_rows(); ++r) {
          std::set<FeatureSubset> keys;
          for (const auto& [s, v] : capped[r]) keys.insert(s);
          for (const auto& [s, v] : full[r]) keys.insert(s);
          for (const FeatureSubset& s : keys) {
            diff.Add(full[r].Get(s), capped[r].Get(s));
            if (capped[r].Contains(s) != full[r].Contains(s) &&
                std::abs(full[r].Get(s) - capped[r].Get(s)) > kArityTolerance) {
              ++key_mismatches;
            }
          }
        }
      }
    }
  }
  return {diff.max() <= kArityTolerance && key_mismatches == 0,
          "cpdv (|S+| <= 1) and order <= 2 (|S+| <= 2), 10 models, " +
              std::to_string(diff.count()) + " values, max |diff| " +
              Fmt(diff.max())};
}

// 22 depth-2 trees on "amount", each splitting at three of the 66
// thresholds, plus 4 stumps on "age".
TreeEnsemble SixtySixThresholdModel() {
  TreeEnsemble model;
  model.feature_names = {"amount", "age"};
  std::vector<double> thresholds;
  for (int i = 0; i < 66; ++i) thresholds.push_back(250.0 * (i + 1) + 0.5);
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> leaf(-1.0, 1.0);
  auto value = [&] { return std::round(leaf(rng) * 1000.0) / 1000.0 + 0.0005; };
  for (int t = 0; t < 22; ++t) {
    Tree tree;
    const double lo = thresholds[t];
    const double mid = thresholds[t + 22];
    const double hi = thresholds[t + 44];
    auto split = [](int feature, double thr, int yes, int no) {
      Node n;
      n.feature = feature;
      n.threshold = thr;
      n.yes = yes;
      n.no = no;
      return n;
    };
    auto leaf_node = [&]() {
      Node n;
      n.leaf_value = value();
      return n;
    };
    tree.nodes = {split(0, mid, 1, 4), split(0, lo, 2, 3), leaf_node(),
                  leaf_node(),          split(0, hi, 5, 6), leaf_node(),
                  leaf_node()};
    model.trees.push_back(tree);
  }
  for (int t = 0; t < 4; ++t) {
    Tree tree;
    Node root;
    root.feature = 1;
    root.threshold = 30.0 + 10.0 * t;
    root.yes = 1;
    root.no = 2;
    Node a, b;
    a.leaf_value = value();
    b.leaf_value = value();
    tree.nodes = {root, a, b};
    model.trees.push_back(tree);
  }
  return model;
}

Outcome FullPdpExactness() {
  MaxDiff diff;
  std::size_t steps = 0;
  for (std::uint64_t seed = 501; seed <= 510; ++seed) {
    const testing::RandomFixture fx = Fixture(seed, 5, 10, 4, 64);
    const PdpResult result = FullPdp(fx.model, &fx.train, PdpMode::kExact);
    for (const FeatureCurve& curve : result.curves) {
      if (!curve.steps) continue;
      const auto& bp = curve.steps->breakpoints;
      std::vector<double> probes = {bp.front() - 1.0, bp.back() + 1.0};
      for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
        probes.push_back(0.5 * (bp[j] + bp[j + 1]));
      }
      steps += bp.size();
      for (double x : probes) {
        diff.Add(OraclePdv(fx.model, fx.train, Coalition{{curve.feature}, {x}}),
                 curve.steps->At(x));
      }
    }
  }

  const TreeEnsemble model = SixtySixThresholdModel();
  std::vector<std::vector<double>> rows;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amount(0.0, 17000.0), age(18.0, 80.0);
  for (int i = 0; i < 200; ++i) {
    rows.push_back({std::round(amount(rng)), std::round(age(rng))});
  }
  const Dataset background({"amount", "age"}, rows);
  const PdpResult fig = FullPdp(model, &background, PdpMode::kExact);
  const StepFunction& amount_steps = *fig.curves[0].steps;
  std::size_t jumps = 0;
  for (std::size_t i = 0; i + 1 < amount_steps.levels.size(); ++i) {
    if (amount_steps.levels[i] != amount_steps.levels[i + 1]) ++jumps;
  }
  MaxDiff fig_diff;
  const auto& bp = amount_steps.breakpoints;
  for (std::size_t j = 0; j + 1 < bp.size(); ++j) {
    const double x = 0.5 * (bp[j] + bp[j + 1]);
    fig_diff.Add(OraclePdv(model, background, Coalition{{0}, {x}}),
                 amount_steps.At(x));
  }
  const bool pass = diff.max() <= kOracleTolerance &&
                    fig_diff.max() <= kOracleTolerance && bp.size() == 66 &&
                    jumps == 66;
  return {pass, "10 models, " + std::to_string(steps) + " breakpoints, " +
                    std::to_string(diff.count()) + " probes, max |diff| " +
                    Fmt(std::max(diff.max(), fig_diff.max())) +
                    "; threshold fixture: " + std::to_string(bp.size()) +
                    " breakpoints, " + std::to_string(jumps) + " jumps"};
}

Outcome JointDataLaws() {
  std::string failure;
  std::size_t configs = 0;
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::size_t f = 2; f <= 16; ++f) {
      ++configs;
      std::vector<std::string> names;
      std::vector<std::vector<double>> rows(k, std::vector<double>(f));
      for (std::size_t c = 0; c < f; ++c) {
        names.push_back("x" + std::to_string(c));
        for (std::size_t t = 0; t < k; ++t) rows[t][c] = 100.0 * c + t;
      }
      const JointPdpData joint =
          ConstructJointPdpData(Dataset(names, rows, DatasetRole::kConsumer));
      const int width = std::bit_width(f - 1);
      const std::size_t expected = k * k * static_cast<std::size_t>(width);
      const std::string tag =
          "k=" + std::to_string(k) + " f=" + std::to_string(f) + ": ";
      if (joint.consumer.num_rows() != expected) {
        failure = tag + std::to_string(joint.consumer.num_rows()) + " rows";
        break;
      }
      for (std::size_t a = 0; a < f && failure.empty(); ++a) {
        for (std::size_t b = a + 1; b < f && failure.empty(); ++b) {
          std::set<std::pair<double, double>> seen;
          for (std::size_t r = 0; r < joint.consumer.num_rows(); ++r) {
            seen.insert({joint.consumer.at(r, a), joint.consumer.at(r, b)});
          }
          for (std::size_t ia = 0; ia < k; ++ia) {
            for (std::size_t ib = 0; ib < k; ++ib) {
              const std::pair<double, double> cell = {rows[ia][a], rows[ib][b]};
              const std::size_t row = joint.clip_map.RowFor(a, ia, b, ib);
              if (!seen.count(cell) || joint.consumer.at(row, a) != cell.first ||
                  joint.consumer.at(row, b) != cell.second) {
                failure = tag + "pair (" + std::to_string(a) + "," +
                          std::to_string(b) + ") misses a cell";
              }
            }
          }
        }
      }
      if (!failure.empty()) break;
    }
    if (!failure.empty()) break;
  }
  std::vector<std::vector<double>> rows(3, std::vector<double>(8));
  std::vector<std::string> names;
  for (int c = 0; c < 8; ++c) {
    names.push_back("x" + std::to_string(c));
    for (int t = 0; t < 3; ++t) rows[t][c] = t;
  }
  const std::size_t fig =
      ConstructJointPdpData(Dataset(names, rows)).consumer.num_rows();
  if (fig != 27 && failure.empty()) {
    failure = "k=3 f=8 gives " + std::to_string(fig) + " rows";
  }
  return {failure.empty(),
          failure.empty() ? std::to_string(configs) +
                                " (k, f) configurations, all pairs covered; "
                                "k=3 f=8 gives 27 rows"
                          : failure};
}

// Complete binary tree of the given depth whose thresholds are drawn inside
// the interval that reaches each node, so every leaf is reachable.
Tree CompleteTree(int depth, int num_features, std::mt19937_64& rng) {
  Tree tree;
  std::vector<Interval> bounds(num_features, Interval{0.0, 1.0});
  std::uniform_int_distribution<int> pick(0, num_features - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> leaf(0.0, 0.1);
  std::function<int(int)> grow = [&](int level) {
    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (level == depth) {
      tree.nodes[index].leaf_value = leaf(rng);
      return index;
    }
    const int f = pick(rng);
    const Interval saved = bounds[f];
    const double t = saved.lo + (0.1 + 0.8 * unit(rng)) * (saved.hi - saved.lo);
    tree.nodes[index].feature = f;
    tree.nodes[index].threshold = t;
    bounds[f] = Interval{saved.lo, t};
    const int yes = grow(level + 1);
    bounds[f] = Interval{t, saved.hi};
    const int no = grow(level + 1);
    bounds[f] = saved;
    tree.nodes[index].yes = yes;
    tree.nodes[index].no = no;
    return index;
  };
  grow(0);
  return tree;
}

Outcome DepthScaling() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::vector<std::string> names;
  for (int c = 0; c < kBenchmarkFeatures; ++c) {
    names.push_back("x" + std::to_string(c));
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> values(static_cast<std::size_t>(kBenchmarkRows) *
                             kBenchmarkFeatures);
  for (double& v : values) v = unit(rng);
  const Dataset background =
      Dataset::FromColumns(names, kBenchmarkRows, std::move(values));
  EngineOptions options;
  options.threads = 1;

  std::vector<double> times;
  std::string detail = "seconds by depth:";
  for (int depth = 4; depth <= 9; ++depth) {
    TreeEnsemble model;
    model.feature_names = names;
    for (int t = 0; t < kBenchmarkTrees; ++t) {
      model.trees.push_back(CompleteTree(depth, kBenchmarkFeatures, rng));
    }
    double best = 0.0;
    for (int rep = 0; rep < kBenchmarkRepetitions; ++rep) {
      const auto t0 = Clock::now();
      const PdpResult result = Wpdp(model, &background, kBenchmarkK,
                                    PdpMode::kExact, SamplingMode::kQuantile,
                                    options);
      const double elapsed = Seconds(t0);
      if (result.curves.empty()) return {false, "empty result"};
      best = rep == 0 ? elapsed : std::min(best, elapsed);
    }
    times.push_back(best);
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), " d%d=%.3f", depth, best);
    detail += buffer;
  }
  bool pass = true;
  detail += "; ratios:";
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double ratio = times[i + 1] / times[i];
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), " %.2f", ratio);
    detail += buffer;
    if (!(ratio >= kMinDepthRatio && ratio <= kMaxDepthRatio)) pass = false;
  }
  const double total = Seconds(start);
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "; total %.1f s", total);
  detail += buffer;
  if (total >= kBenchmarkLimitSeconds) pass = false;
  return {pass, detail};
}

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string Quote(const std::string& s) { return "'" + s + "'"; }

Outcome CliDeterminism() {
  const fs::path dir = fs::temp_directory_path() / "pdforest_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  testing::RandomModelConfig config;
  config.num_features = 4;
  config.num_trees = 6;
  config.max_depth = 4;
  const testing::RandomFixture fx = testing::MakeRandomFixture(config, 1111);
  const fs::path model = dir / "model.json";
  std::ofstream(model, std::ios::binary) << SerializeModel(fx.model);
  const fs::path data = dir / "data.csv";
  {
    std::ofstream csv(data, std::ios::binary);
    for (std::size_t c = 0; c < fx.train.num_columns(); ++c) {
      csv << (c ? "," : "") << fx.train.columns()[c];
    }
    csv << "\n";
    for (std::size_t r = 0; r < fx.train.num_rows(); ++r) {
      for (std::size_t c = 0; c < fx.train.num_columns(); ++c) {
        csv << (c ? "," : "") << FormatDouble(fx.train.at(r, c));
      }
      csv << "\n";
    }
  }
  const std::string common = " --model " + Quote(model.string()) +
                             " --background " + Quote(data.string()) +
                             " --threads 1";
  const std::vector<std::string> commands = {
      "pdp --k 7",
      "pdp --grid uniform --format json",
      "pdp --grid full --format json",
      "pdp --mode approx --k 5",
      "jointpdp --k 4",
      "jointpdp --mode approx --format json",
      "pdiv --consumer " + Quote(data.string()),
      "pdiv --aggregate --consumer " + Quote(data.string()),
  };
  std::string failure;
  for (std::size_t i = 0; i < commands.size() && failure.empty(); ++i) {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out =
          dir / ("out_" + std::to_string(i) + "_" + std::to_string(run));
      const std::string cmd = Quote(PDFOREST_CLI_PATH) + " " + commands[i] +
                              common + " --out " + Quote(out.string()) +
                              " 2>/dev/null";
      if (std::system(cmd.c_str()) != 0) {
        failure = "'" + commands[i] + "' failed";
        break;
      }
      outputs[run] = ReadBytes(out);
    }
    if (failure.empty() && (outputs[0].empty() || outputs[0] != outputs[1])) {
      failure = "'" + commands[i] + "' differs between runs";
    }
  }
  fs::remove_all(dir);
  return {failure.empty(),
          failure.empty() ? std::to_string(commands.size()) +
                                " commands, two runs each, identical bytes"
                          : failure};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace pdforest

int main(int argc, char** argv) {
  using pdforest::Criterion;
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence, PDP", pdforest::PdpOracleEquivalence},
      {2, "oracle equivalence, joint PDP", pdforest::JointPdpOracleEquivalence},
      {3, "oracle equivalence, any-order PDIVs",
       pdforest::PdivOracleEquivalence},
      {4, "Moebius reconstruction", pdforest::MoebiusReconstruction},
      {5, "null player", pdforest::NullPlayer},
      {6, "enumeration count", pdforest::EnumerationCount},
      {7, "arity pruning soundness", pdforest::AritySoundness},
      {8, "full PDP exactness", pdforest::FullPdpExactness},
      {9, "joint data laws", pdforest::JointDataLaws},
      {10, "depth scaling trend", pdforest::DepthScaling},
      {11, "CLI determinism", pdforest::CliDeterminism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    pdforest::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << c.id
              << " (" << c.name << "): " << outcome.detail << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed"
                            : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
