// Copyright 2026 The EigenGreedy Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eigengreedy/records.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "binary_io.hpp"
#include "eigengreedy/error.hpp"

namespace eigengreedy {

using nlohmann::ordered_json;

namespace {

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double ParseDouble(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) Fail(ErrorCode::kFormat, "bad number \"" + text + "\"");
  return v;
}

std::size_t ParseIndex(const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) Fail(ErrorCode::kFormat, "bad integer \"" + text + "\"");
  return v;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) Fail(ErrorCode::kInvalidArgument, "cannot format number");
  return {buf, ptr};
}

std::string CurveToCsv(const Curve& curve) {
  curve.Validate();
  std::string out = std::string(kCurveCsvHeader) + "\n";
  const auto method = std::string(ToString(curve.method));
  for (std::size_t i = 0; i < curve.dim(); ++i) {
    out += method + "," + std::to_string(curve.k_values[i]) + "," + FormatDouble(curve.auroc_values[i]) + ",";
    if (curve.greedy_auroc_values) out += FormatDouble((*curve.greedy_auroc_values)[i]);
    out += ",";
    if (curve.changed_components[i]) out += std::to_string(*curve.changed_components[i]);
    out += "\n";
  }
  return out;
}

Curve CurveFromCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader) {
    Fail(ErrorCode::kFormat, "curve CSV must start with header: " + std::string(kCurveCsvHeader));
  }
  Curve curve;
  bool first = true;
  bool has_greedy = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = SplitFields(line);
    if (f.size() != 5) Fail(ErrorCode::kFormat, "curve CSV row needs 5 fields: " + line);
    const auto method = ParseMethod(f[0]);
    if (first) {
      curve.method = method;
      has_greedy = !f[3].empty();
      if (has_greedy) curve.greedy_auroc_values.emplace();
      first = false;
    } else if (method != curve.method) {
      Fail(ErrorCode::kFormat, "curve CSV mixes methods");
    }
    curve.k_values.push_back(ParseIndex(f[1]));
    curve.auroc_values.push_back(ParseDouble(f[2]));
    if (has_greedy != !f[3].empty()) Fail(ErrorCode::kFormat, "curve CSV greedy column partially empty");
    if (has_greedy) curve.greedy_auroc_values->push_back(ParseDouble(f[3]));
    curve.changed_components.push_back(f[4].empty() ? std::nullopt : std::optional(ParseIndex(f[4])));
  }
  if (first) Fail(ErrorCode::kFormat, "curve CSV has no rows");
  try {
    curve.Validate();
  } catch (const Error& e) {
    Fail(ErrorCode::kFormat, e.what());
  }
  return curve;
}

void WriteCurveCsv(const Curve& curve, const std::filesystem::path& path) {
  detail::WriteText(path.string(), CurveToCsv(curve));
}

Curve ReadCurveCsv(const std::filesystem::path& path) {
  try {
    return CurveFromCsv(detail::ReadText(path.string()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kIo) throw;
    Fail(e.code(), path.string() + ": " + e.what());
  }
}

ordered_json CurveToJson(const Curve& curve) {
  ordered_json j;
  j["method"] = ToString(curve.method);
  j["k_values"] = curve.k_values;
  j["auroc_values"] = curve.auroc_values;
  j["greedy_auroc_values"] = curve.greedy_auroc_values ? ordered_json(*curve.greedy_auroc_values) : ordered_json(nullptr);
  ordered_json changed = ordered_json::array();
  for (const auto& c : curve.changed_components) changed.push_back(c ? ordered_json(*c) : ordered_json(nullptr));
  j["changed_components"] = std::move(changed);
  return j;
}

ordered_json TraceToJson(const SelectionTrace& trace) {
  ordered_json j;
  j["mode"] = ToString(trace.mode);
  j["d"] = trace.dim;
  ordered_json steps = ordered_json::array();
  for (const auto& s : trace.steps) {
    steps.push_back({{"step", s.step}, {"component", s.component}, {"greedy_auroc", s.greedy_auroc}});
  }
  j["steps"] = std::move(steps);
  return j;
}

SelectionTrace TraceFromJson(const ordered_json& j) {
  try {
    SelectionTrace trace;
    trace.mode = ParseSelectionMode(j.at("mode").get<std::string>());
    trace.dim = j.at("d").get<std::size_t>();
    for (const auto& s : j.at("steps")) {
      trace.steps.push_back({s.at("step").get<std::size_t>(), s.at("component").get<std::size_t>(),
                             s.at("greedy_auroc").get<double>()});
    }
    trace.Validate();
    return trace;
  } catch (const ordered_json::exception& e) {
    Fail(ErrorCode::kFormat, std::string("malformed trace JSON: ") + e.what());
  } catch (const Error& e) {
    Fail(ErrorCode::kFormat, std::string("invalid trace: ") + e.what());
  }
}

std::string DumpJson(const ordered_json& json) { return json.dump(2) + "\n"; }

void WriteTraceJson(const SelectionTrace& trace, const std::filesystem::path& path) {
  detail::WriteText(path.string(), DumpJson(TraceToJson(trace)));
}

SelectionTrace ReadTraceJson(const std::filesystem::path& path) {
  ordered_json j;
  try {
    j = ordered_json::parse(detail::ReadText(path.string()));
  } catch (const ordered_json::parse_error& e) {
    Fail(ErrorCode::kFormat, path.string() + ": " + e.what());
  }
  return TraceFromJson(j);
}

}  // namespace eigengreedy
