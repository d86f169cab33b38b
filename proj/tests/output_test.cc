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

#include "pdforest/output.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "json.hpp"

namespace pdforest {
namespace {

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.0), "0");
  EXPECT_EQ(FormatDouble(-0.0), "0");
  EXPECT_EQ(FormatDouble(1.0), "1");
  EXPECT_EQ(FormatDouble(-0.5), "-0.5");
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(60000.0), "60000");
  const double third = 1.0 / 3.0;
  EXPECT_EQ(std::stod(FormatDouble(third)), third);
}

PdpResult SampleResult() {
  PdpResult result;
  result.mode = PdpMode::kExact;
  result.mean_prediction = 0.5;
  FeatureCurve curve;
  curve.feature = 0;
  curve.name = "age";
  curve.points = {{0.0, 0.0, -0.5}, {1.0, 1.0, 0.5}};
  curve.steps = StepFunction{{0.5}, {0.0, 1.0}};
  result.curves.push_back(curve);
  return result;
}

TEST(WritePdpTest, CsvAndJson) {
  const PdpResult result = SampleResult();
  std::ostringstream csv;
  WritePdpCsv(result, csv);
  EXPECT_EQ(csv.str(), "feature,value,pdv,cpdv\nage,0,0,-0.5\nage,1,1,0.5\n");

  std::ostringstream json;
  WritePdpJson(result, json);
  const nlohmann::json doc = nlohmann::json::parse(json.str());
  EXPECT_EQ(doc["mode"], "exact");
  EXPECT_EQ(doc["mean_prediction"], 0.5);
  EXPECT_EQ(doc["features"][0]["feature"], "age");
  EXPECT_EQ(doc["features"][0]["index"], 0);
  EXPECT_EQ(doc["features"][0]["pdv"], nlohmann::json({0.0, 1.0}));
  EXPECT_EQ(doc["features"][0]["cpdv"], nlohmann::json({-0.5, 0.5}));
  EXPECT_EQ(doc["features"][0]["breakpoints"], nlohmann::json({0.5}));
}

TEST(WriteJointPdpTest, CsvIsAMajor) {
  JointPdpResult result;
  result.k = 2;
  PairMatrix pair;
  pair.feature_a = 0;
  pair.feature_b = 2;
  pair.a_values = {1, 2};
  pair.b_values = {3, 4};
  pair.pdv = {13, 14, 23, 24};
  result.pairs.push_back(pair);
  std::ostringstream csv;
  WriteJointPdpCsv(result, {"a", "b", "c"}, csv);
  EXPECT_EQ(csv.str(),
            "f_a,f_b,a_value,b_value,pdv\na,c,1,3,13\na,c,1,4,14\na,c,2,3,23\n"
            "a,c,2,4,24\n");
  std::ostringstream json;
  WriteJointPdpJson(result, {"a", "b", "c"}, json);
  EXPECT_NO_THROW(nlohmann::json::parse(json.str()));
}

TEST(WritePdivTest, JsonLines) {
  AttributionResult result;
  SubsetValueMap row;
  row.Add({}, 0.5);
  row.Add({0, 1}, -0.25);
  result.rows = {row, SubsetValueMap()};
  std::ostringstream out;
  WritePdivJsonLines(result, out);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  nlohmann::json doc = nlohmann::json::parse(line);
  EXPECT_EQ(doc["row"], 0);
  ASSERT_EQ(doc["pdiv"].size(), 2u);
  EXPECT_EQ(doc["pdiv"][1]["features"], nlohmann::json({0, 1}));
  EXPECT_EQ(doc["pdiv"][1]["value"], -0.25);
  std::getline(lines, line);
  doc = nlohmann::json::parse(line);
  EXPECT_EQ(doc["row"], 1);
  EXPECT_TRUE(doc["pdiv"].empty());
  EXPECT_FALSE(std::getline(lines, line));

  AttributionResult mean;
  mean.aggregated = true;
  mean.consumer_rows = 7;
  mean.mean = row;
  std::ostringstream agg;
  WritePdivJsonLines(mean, agg);
  doc = nlohmann::json::parse(agg.str());
  EXPECT_EQ(doc["rows"], 7);
  EXPECT_EQ(doc["pdiv"].size(), 2u);
}

TEST(PdpCurveSvgTest, ProducesSvgDocument) {
  const PdpResult result = SampleResult();
  const std::string svg = PdpCurveSvg(result.curves[0]);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("age"), std::string::npos);
  FeatureCurve empty;
  empty.name = "unused";
  EXPECT_NE(PdpCurveSvg(empty).find("</svg>"), std::string::npos);
}

}  // namespace
}  // namespace pdforest
