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

#pragma once

// Text serializations of selection and analysis outputs. Numbers are printed
// in shortest round-trip form with '.' as the decimal separator.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "eigengreedy/selection.hpp"

namespace eigengreedy {

std::string FormatDouble(double value);

inline constexpr const char* kCurveCsvHeader =
    "method,k,auroc_eval,auroc_greedy,component_added_or_removed";

std::string CurveToCsv(const Curve& curve);
Curve CurveFromCsv(const std::string& text);
void WriteCurveCsv(const Curve& curve, const std::filesystem::path& path);
Curve ReadCurveCsv(const std::filesystem::path& path);

nlohmann::ordered_json CurveToJson(const Curve& curve);
nlohmann::ordered_json TraceToJson(const SelectionTrace& trace);
SelectionTrace TraceFromJson(const nlohmann::ordered_json& json);
void WriteTraceJson(const SelectionTrace& trace, const std::filesystem::path& path);
SelectionTrace ReadTraceJson(const std::filesystem::path& path);

// Stable text form of a JSON document (2-space indent, trailing newline).
std::string DumpJson(const nlohmann::ordered_json& json);

}  // namespace eigengreedy
