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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pdforest/errors.h"

namespace pdforest {
namespace {

std::string CsvField(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string JsonString(const std::string& text) {
  std::string out = "\"";
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string JsonNumber(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kNumeric, "cannot serialise a non-finite value");
  }
  return FormatDouble(value);
}

std::string JsonNumbers(const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += JsonNumber(values[i]);
  }
  return out + "]";
}

void WriteSubsetValues(const SubsetValueMap& values, std::ostream& out) {
  out << '[';
  bool first = true;
  for (const auto& [subset, value] : values) {
    if (!first) out << ',';
    first = false;
    out << "{\"features\":[";
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (i > 0) out << ',';
      out << subset[i];
    }
    out << "],\"value\":" << JsonNumber(value) << '}';
  }
  out << ']';
}

}  // namespace

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void WritePdpCsv(const PdpResult& result, std::ostream& out) {
  out << "feature,value,pdv,cpdv\n";
  for (const FeatureCurve& curve : result.curves) {
    for (const PdpPoint& p : curve.points) {
      out << CsvField(curve.name) << ',' << FormatDouble(p.value) << ','
          << FormatDouble(p.pdv) << ',' << FormatDouble(p.cpdv) << '\n';
    }
  }
}

void WritePdpJson(const PdpResult& result, std::ostream& out) {
  out << "{\"mode\":" << JsonString(PdpModeName(result.mode))
      << ",\"mean_prediction\":" << JsonNumber(result.mean_prediction)
      << ",\"features\":[";
  bool first = true;
  for (const FeatureCurve& curve : result.curves) {
    if (curve.points.empty()) continue;
    if (!first) out << ',';
    first = false;
    std::vector<double> values, pdv, cpdv;
    for (const PdpPoint& p : curve.points) {
      values.push_back(p.value);
      pdv.push_back(p.pdv);
      cpdv.push_back(p.cpdv);
    }
    out << "{\"feature\":" << JsonString(curve.name)
        << ",\"index\":" << curve.feature << ",\"value\":" << JsonNumbers(values)
        << ",\"pdv\":" << JsonNumbers(pdv) << ",\"cpdv\":" << JsonNumbers(cpdv);
    if (curve.steps) {
      out << ",\"breakpoints\":" << JsonNumbers(curve.steps->breakpoints)
          << ",\"levels\":" << JsonNumbers(curve.steps->levels);
    }
    out << '}';
  }
  out << "]}\n";
}

void WriteJointPdpCsv(const JointPdpResult& result,
                      const std::vector<std::string>& feature_names,
                      std::ostream& out) {
  out << "f_a,f_b,a_value,b_value,pdv\n";
  const std::size_t k = result.k;
  for (const PairMatrix& pair : result.pairs) {
    const std::string a = CsvField(feature_names.at(pair.feature_a));
    const std::string b = CsvField(feature_names.at(pair.feature_b));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        out << a << ',' << b << ',' << FormatDouble(pair.a_values[i]) << ','
            << FormatDouble(pair.b_values[j]) << ','
            << FormatDouble(pair.pdv[i * k + j]) << '\n';
      }
    }
  }
}

void WriteJointPdpJson(const JointPdpResult& result,
                       const std::vector<std::string>& feature_names,
                       std::ostream& out) {
  out << "{\"mode\":" << JsonString(PdpModeName(result.mode))
      << ",\"mean_prediction\":" << JsonNumber(result.mean_prediction)
      << ",\"k\":" << result.k << ",\"pairs\":[";
  const std::size_t k = result.k;
  for (std::size_t p = 0; p < result.pairs.size(); ++p) {
    const PairMatrix& pair = result.pairs[p];
    if (p > 0) out << ',';
    out << "{\"f_a\":" << JsonString(feature_names.at(pair.feature_a))
        << ",\"f_b\":" << JsonString(feature_names.at(pair.feature_b))
        << ",\"a_values\":" << JsonNumbers(pair.a_values)
        << ",\"b_values\":" << JsonNumbers(pair.b_values) << ",\"pdv\":[";
    for (std::size_t i = 0; i < k; ++i) {
      if (i > 0) out << ',';
      out << JsonNumbers(std::vector<double>(pair.pdv.begin() + i * k,
                                             pair.pdv.begin() + (i + 1) * k));
    }
    out << "]}";
  }
  out << "]}\n";
}

void WritePdivJsonLines(const AttributionResult& result, std::ostream& out) {
  if (result.aggregated) {
    out << "{\"rows\":" << result.consumer_rows << ",\"pdiv\":";
    WriteSubsetValues(result.mean, out);
    out << "}\n";
    return;
  }
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    out << "{\"row\":" << r << ",\"pdiv\":";
    WriteSubsetValues(result.rows[r], out);
    out << "}\n";
  }
}

std::string PdpCurveSvg(const FeatureCurve& curve) {
  constexpr double kWidth = 640, kHeight = 400, kMargin = 48;
  std::vector<double> xs, ys;
  if (curve.steps && !curve.steps->breakpoints.empty()) {
    // Horizontal segments between the first and last evaluation points.
    const auto& bp = curve.steps->breakpoints;
    const auto& levels = curve.steps->levels;
    const double lo = curve.points.front().value;
    const double hi = curve.points.back().value;
    xs.push_back(lo);
    ys.push_back(levels[0]);
    for (std::size_t j = 0; j < bp.size(); ++j) {
      xs.push_back(bp[j]);
      ys.push_back(levels[j]);
      xs.push_back(bp[j]);
      ys.push_back(levels[j + 1]);
    }
    xs.push_back(hi);
    ys.push_back(levels.back());
  } else {
    for (const PdpPoint& p : curve.points) {
      xs.push_back(p.value);
      ys.push_back(p.pdv);
    }
  }
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::string title;
  for (char c : curve.name) {
    if (c == '<') title += "&lt;";
    else if (c == '>') title += "&gt;";
    else if (c == '&') title += "&amp;";
    else title += c;
  }
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">Partial dependence: "
      << title << "</text>\n";
  if (!xs.empty()) {
    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    const auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    const double xspan = *xmax > *xmin ? *xmax - *xmin : 1.0;
    const double yspan = *ymax > *ymin ? *ymax - *ymin : 1.0;
    auto px = [&](double x) {
      return kMargin + (x - *xmin) / xspan * (kWidth - 2 * kMargin);
    };
    auto py = [&](double y) {
      return kHeight - kMargin - (y - *ymin) / yspan * (kHeight - 2 * kMargin);
    };
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin
        << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
        << kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"black\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" "
           "points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) svg << ' ';
      svg << FormatDouble(std::round(px(xs[i]) * 100) / 100) << ','
          << FormatDouble(std::round(py(ys[i]) * 100) / 100);
    }
    svg << "\"/>\n";
    auto label = [&](double x, double y, const std::string& anchor,
                     double value) {
      svg << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\""
          << anchor << "\" font-family=\"sans-serif\" font-size=\"11\">"
          << FormatDouble(value) << "</text>\n";
    };
    label(kMargin, kHeight - kMargin + 16, "start", *xmin);
    label(kWidth - kMargin, kHeight - kMargin + 16, "end", *xmax);
    label(kMargin - 4, kHeight - kMargin, "end", *ymin);
    label(kMargin - 4, kMargin + 4, "end", *ymax);
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace pdforest
