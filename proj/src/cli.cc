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

#include "pdforest/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iterator>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pdforest/dataset.h"
#include "pdforest/errors.h"
#include "pdforest/model.h"
#include "pdforest/oracle.h"
#include "pdforest/output.h"
#include "pdforest/tasks.h"
#include "pdforest/wdnf.h"

namespace pdforest {
namespace {

constexpr double kVerifyTolerance = 1e-7;
constexpr std::size_t kVerifyPoints = 50;
constexpr std::uint64_t kVerifySeed = 0x9e3779b97f4a7c15ull;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string model;
  std::string background;
  std::string out = "-";
  std::string format;
  std::string mode = "exact";
  int threads = 0;
  int max_conditions = 30;
  bool verify = false;
};

struct PdpFlags {
  int k = 5;
  std::string grid = "quantile";
  std::string plot;
};

struct JointFlags {
  int k = 5;
  std::string grid = "quantile";
  std::string pairs = "all";
};

struct PdivFlags {
  std::string consumer;
  std::size_t max_rows = 10000;
  bool aggregate = false;
};

int ResolveThreads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("PDFOREST_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || value < 1 || value > 4096) {
      throw UsageError(std::string("PDFOREST_THREADS must be a positive "
                                   "integer, got '") + env + "'");
    }
    return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

EngineOptions MakeEngineOptions(const CommonFlags& flags) {
  EngineOptions options;
  options.threads = ResolveThreads(flags.threads);
  options.max_conditions = flags.max_conditions;
  return options;
}

SamplingMode ParseSampling(const std::string& grid) {
  return grid == "uniform" ? SamplingMode::kUniform : SamplingMode::kQuantile;
}

// Loads the model and, in exact mode, the background with the model aligned
// to the background's columns.
struct Inputs {
  TreeEnsemble model;
  std::optional<Dataset> background;
  PdpMode mode = PdpMode::kExact;
};

Inputs LoadInputs(const CommonFlags& flags, std::ostream& err) {
  Inputs inputs;
  inputs.mode = flags.mode == "approx" ? PdpMode::kApproximate : PdpMode::kExact;
  if (inputs.mode == PdpMode::kExact && flags.background.empty()) {
    throw UsageError("--mode exact requires --background");
  }
  const TreeEnsemble model = LoadModel(flags.model);
  if (inputs.mode == PdpMode::kApproximate) {
    if (!flags.background.empty()) {
      err << "warning: --background is ignored in approx mode\n";
    }
    inputs.model = model;
    return inputs;
  }
  inputs.background = LoadCsv(flags.background, DatasetRole::kBackground);
  if (inputs.background->empty()) {
    throw UsageError("background file has no rows");
  }
  inputs.model = AlignFeatures(model, inputs.background->columns());
  return inputs;
}

double OracleValue(const Inputs& inputs, const Coalition& coalition) {
  return inputs.mode == PdpMode::kExact
             ? OraclePdv(inputs.model, *inputs.background, coalition)
             : OraclePdvPathDependent(inputs.model, coalition);
}

// Draws up to kVerifyPoints indices out of `n`, deterministically.
std::vector<std::size_t> VerifySample(std::size_t n) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  if (n <= kVerifyPoints) return all;
  std::mt19937_64 rng(kVerifySeed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(kVerifyPoints);
  std::sort(all.begin(), all.end());
  return all;
}

struct VerifyStats {
  std::size_t checked = 0;
  double max_diff = 0.0;
  std::string worst;

  void Add(double expected, double actual, const std::string& what) {
    ++checked;
    const double diff = std::abs(expected - actual);
    if (!(diff <= max_diff)) {
      max_diff = diff;
      worst = what + ": engine " + FormatDouble(actual) + ", oracle " +
              FormatDouble(expected);
    }
  }

  void Report(std::ostream& err) const {
    err << "verify: checked " << checked << " values, max |diff| = "
        << FormatDouble(max_diff) << '\n';
    if (!(max_diff <= kVerifyTolerance)) {
      throw VerificationError("verification failed at " + worst);
    }
  }
};

void WriteOutput(const std::string& path, std::ostream& out,
                 const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw Error(ErrorKind::kInput, "cannot open output file " + path);
  }
  write(file);
  file.close();
  if (!file) throw Error(ErrorKind::kInput, "failed writing " + path);
}

std::string SafeFileName(const std::string& name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    out += ok ? c : '_';
  }
  return out;
}

int RunPdp(const CommonFlags& flags, const PdpFlags& pdp, std::ostream& out,
           std::ostream& err) {
  const Inputs inputs = LoadInputs(flags, err);
  const EngineOptions options = MakeEngineOptions(flags);
  const Dataset* background =
      inputs.background ? &*inputs.background : nullptr;
  const PdpResult result =
      pdp.grid == "full"
          ? FullPdp(inputs.model, background, inputs.mode, options)
          : Wpdp(inputs.model, background, pdp.k, inputs.mode,
                 ParseSampling(pdp.grid), options);

  if (flags.verify) {
    std::vector<std::pair<std::size_t, std::size_t>> candidates;
    for (std::size_t c = 0; c < result.curves.size(); ++c) {
      for (std::size_t p = 0; p < result.curves[c].points.size(); ++p) {
        candidates.emplace_back(c, p);
      }
    }
    VerifyStats stats;
    for (std::size_t i : VerifySample(candidates.size())) {
      const FeatureCurve& curve = result.curves[candidates[i].first];
      const PdpPoint& point = curve.points[candidates[i].second];
      const double expected = OracleValue(
          inputs, Coalition{{curve.feature}, {point.value}});
      stats.Add(expected, point.pdv,
                curve.name + "=" + FormatDouble(point.value));
    }
    stats.Report(err);
  }

  WriteOutput(flags.out, out, [&](std::ostream& s) {
    if (flags.format == "json") {
      WritePdpJson(result, s);
    } else {
      WritePdpCsv(result, s);
    }
  });
  if (!pdp.plot.empty()) {
    std::filesystem::create_directories(pdp.plot);
    for (const FeatureCurve& curve : result.curves) {
      if (curve.points.empty()) continue;
      const std::filesystem::path path =
          std::filesystem::path(pdp.plot) / ("pdp_" + SafeFileName(curve.name) + ".svg");
      WriteOutput(path.string(), out,
                  [&](std::ostream& s) { s << PdpCurveSvg(curve); });
    }
  }
  return kExitOk;
}

std::vector<std::pair<int, int>> ParsePairs(const std::string& list,
                                            const std::vector<std::string>& names) {
  if (list == "all") return {};
  std::vector<int> selected;
  std::stringstream stream(list);
  std::string name;
  while (std::getline(stream, name, ',')) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      throw UsageError("--pairs: unknown feature '" + name + "'");
    }
    const int index = static_cast<int>(it - names.begin());
    if (std::find(selected.begin(), selected.end(), index) == selected.end()) {
      selected.push_back(index);
    }
  }
  if (selected.size() < 2) {
    throw UsageError("--pairs needs at least two distinct feature names");
  }
  std::sort(selected.begin(), selected.end());
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    for (std::size_t j = i + 1; j < selected.size(); ++j) {
      pairs.emplace_back(selected[i], selected[j]);
    }
  }
  return pairs;
}

int RunJointPdp(const CommonFlags& flags, const JointFlags& joint,
                std::ostream& out, std::ostream& err) {
  const Inputs inputs = LoadInputs(flags, err);
  const std::vector<std::string>& names = inputs.model.feature_names;
  if (names.size() < 2) {
    throw UsageError("joint partial dependence needs at least two features");
  }
  const std::vector<std::pair<int, int>> pairs = ParsePairs(joint.pairs, names);
  const EngineOptions options = MakeEngineOptions(flags);
  const Dataset* background =
      inputs.background ? &*inputs.background : nullptr;
  const JointPdpResult result =
      WJointPdp(inputs.model, background, joint.k, inputs.mode,
                ParseSampling(joint.grid), pairs, options);

  if (flags.verify) {
    const std::size_t cells = result.k * result.k;
    VerifyStats stats;
    for (std::size_t i : VerifySample(result.pairs.size() * cells)) {
      const PairMatrix& pair = result.pairs[i / cells];
      const std::size_t ia = (i % cells) / result.k;
      const std::size_t ib = (i % cells) % result.k;
      const double expected = OracleValue(
          inputs, Coalition{{pair.feature_a, pair.feature_b},
                            {pair.a_values[ia], pair.b_values[ib]}});
      stats.Add(expected, pair.pdv[ia * result.k + ib],
                names[pair.feature_a] + "=" + FormatDouble(pair.a_values[ia]) +
                    ", " + names[pair.feature_b] + "=" +
                    FormatDouble(pair.b_values[ib]));
    }
    stats.Report(err);
  }

  WriteOutput(flags.out, out, [&](std::ostream& s) {
    if (flags.format == "json") {
      WriteJointPdpJson(result, names, s);
    } else {
      WriteJointPdpCsv(result, names, s);
    }
  });
  return kExitOk;
}

int RunPdiv(const CommonFlags& flags, const PdivFlags& pdiv, std::ostream& out,
            std::ostream& err) {
  if (flags.format != "json") {
    throw UsageError("pdiv supports --format json only");
  }
  const Dataset consumer = LoadCsv(pdiv.consumer, DatasetRole::kConsumer);
  if (consumer.empty()) throw UsageError("consumer file has no rows");
  const TreeEnsemble model =
      AlignFeatures(LoadModel(flags.model), consumer.columns());
  std::optional<Dataset> background;
  if (!flags.background.empty()) {
    background = LoadCsv(flags.background, DatasetRole::kBackground)
                     .SelectColumns(consumer.columns());
  }
  AnyOrderOptions options;
  options.row_limit = pdiv.max_rows;
  options.aggregate = pdiv.aggregate;
  options.engine = MakeEngineOptions(flags);
  const AttributionResult result = AnyOrderPdivs(
      model, consumer, background ? &*background : nullptr, options);

  if (flags.verify) {
    const bool exact = result.mode == PdpMode::kExact;
    auto oracle = [&](const FeatureSubset& subset, std::size_t row) {
      const Coalition coalition = CoalitionFromRow(subset, consumer.Row(row));
      return exact ? OraclePdiv(model, *background, coalition)
                   : OraclePdivPathDependent(model, coalition);
    };
    VerifyStats stats;
    if (result.aggregated) {
      std::vector<const std::pair<const FeatureSubset, double>*> entries;
      for (const auto& entry : result.mean) entries.push_back(&entry);
      for (std::size_t i : VerifySample(entries.size())) {
        double expected = 0.0;
        for (std::size_t r = 0; r < result.consumer_rows; ++r) {
          expected += oracle(entries[i]->first, r);
        }
        expected /= static_cast<double>(result.consumer_rows);
        stats.Add(expected, entries[i]->second, "mean subset");
      }
    } else {
      std::vector<std::pair<std::size_t, const FeatureSubset*>> entries;
      std::vector<double> values;
      for (std::size_t r = 0; r < result.rows.size(); ++r) {
        for (const auto& [subset, value] : result.rows[r]) {
          entries.emplace_back(r, &subset);
          values.push_back(value);
        }
      }
      for (std::size_t i : VerifySample(entries.size())) {
        stats.Add(oracle(*entries[i].second, entries[i].first), values[i],
                  "row " + std::to_string(entries[i].first));
      }
    }
    stats.Report(err);
  }

  WriteOutput(flags.out, out,
              [&](std::ostream& s) { WritePdivJsonLines(result, s); });
  return kExitOk;
}

void AddCommonFlags(CLI::App* sub, CommonFlags* flags, bool with_mode,
                    const std::vector<std::string>& formats) {
  sub->add_option("--model", flags->model, "Tree-dump JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--background", flags->background, "Background CSV file");
  if (with_mode) {
    sub->add_option("--mode", flags->mode, "exact or approx")
        ->check(CLI::IsMember({"exact", "approx"}));
  }
  sub->add_option("--out", flags->out, "Output file ('-' for stdout)");
  flags->format = formats.front();
  sub->add_option("--format", flags->format, "Output format")
      ->check(CLI::IsMember(formats));
  sub->add_flag("--verify", flags->verify,
                "Cross-check up to 50 values against brute force");
  sub->add_option("--threads", flags->threads,
                  "Worker threads (default: PDFOREST_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--max-conditions", flags->max_conditions,
                  "Largest merged path length accepted")
      ->check(CLI::Range(1, kMaxMaskWidth));
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Partial dependence and interaction values for tree ensembles",
               "pdforest");
  app.require_subcommand(1);

  CommonFlags pdp_common, joint_common, pdiv_common;
  PdpFlags pdp;
  JointFlags joint;
  PdivFlags pdiv;

  CLI::App* pdp_cmd = app.add_subcommand("pdp", "Partial dependence plots");
  AddCommonFlags(pdp_cmd, &pdp_common, true, {"csv", "json"});
  pdp_cmd->add_option("--k", pdp.k, "Grid points per feature")
      ->check(CLI::PositiveNumber);
  pdp_cmd->add_option("--grid", pdp.grid, "quantile, uniform or full")
      ->check(CLI::IsMember({"quantile", "uniform", "full"}));
  pdp_cmd->add_option("--plot", pdp.plot, "Directory for SVG plots");

  CLI::App* joint_cmd =
      app.add_subcommand("jointpdp", "Joint partial dependence of pairs");
  AddCommonFlags(joint_cmd, &joint_common, true, {"csv", "json"});
  joint_cmd->add_option("--k", joint.k, "Grid points per feature")
      ->check(CLI::PositiveNumber);
  joint_cmd->add_option("--grid", joint.grid, "quantile or uniform")
      ->check(CLI::IsMember({"quantile", "uniform"}));
  joint_cmd->add_option("--pairs", joint.pairs,
                        "'all' or comma-separated feature names");

  CLI::App* pdiv_cmd =
      app.add_subcommand("pdiv", "Interaction values of every order");
  AddCommonFlags(pdiv_cmd, &pdiv_common, false, {"json"});
  pdiv_cmd->add_option("--consumer", pdiv.consumer, "Consumer CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  pdiv_cmd->add_option("--max-rows", pdiv.max_rows, "Consumer rows processed")
      ->check(CLI::PositiveNumber);
  pdiv_cmd->add_flag("--aggregate", pdiv.aggregate,
                     "Emit per-subset means instead of per-row values");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (pdp_cmd->parsed()) return RunPdp(pdp_common, pdp, out, err);
    if (joint_cmd->parsed()) return RunJointPdp(joint_common, joint, out, err);
    return RunPdiv(pdiv_common, pdiv, out, err);
  } catch (const UsageError& e) {
    err << "pdforest: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const VerificationError& e) {
    err << "pdforest: " << e.what() << '\n';
    return kExitVerification;
  } catch (const Error& e) {
    err << "pdforest: " << ErrorKindName(e.kind()) << " error: " << e.what()
        << '\n';
    return e.kind() == ErrorKind::kCapacity ? kExitCapacity : kExitFailure;
  } catch (const std::exception& e) {
    err << "pdforest: error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace pdforest
