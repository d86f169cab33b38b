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

// Serialisation of task results: CSV tables, JSON documents, JSON lines and
// SVG line plots. Numbers use the shortest decimal form that round-trips.

#ifndef PDFOREST_OUTPUT_H_
#define PDFOREST_OUTPUT_H_

#include <ostream>
#include <string>
#include <vector>

#include "pdforest/tasks.h"

namespace pdforest {

std::string FormatDouble(double value);

// Header "feature,value,pdv,cpdv" followed by one row per curve point.
void WritePdpCsv(const PdpResult& result, std::ostream& out);
void WritePdpJson(const PdpResult& result, std::ostream& out);

// Header "f_a,f_b,a_value,b_value,pdv"; k*k rows per pair, a-major.
void WriteJointPdpCsv(const JointPdpResult& result,
                      const std::vector<std::string>& feature_names,
                      std::ostream& out);
void WriteJointPdpJson(const JointPdpResult& result,
                       const std::vector<std::string>& feature_names,
                       std::ostream& out);

// One line per row: {"row":i,"pdiv":[{"features":[...],"value":x},...]}.
// Aggregated results produce a single {"rows":n,"pdiv":[...]} line.
void WritePdivJsonLines(const AttributionResult& result, std::ostream& out);

// Line plot of one curve (step plot when the curve carries steps).
std::string PdpCurveSvg(const FeatureCurve& curve);

}  // namespace pdforest

#endif  // PDFOREST_OUTPUT_H_
