// Copyright 2026 The Dendroid Authors
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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dendroid/core.hpp"
#include "dendroid/forest.hpp"
#include "dendroid/model.hpp"

// File formats:
//
//   schema   JSON array of {"name", "kind": "discrete"|"gaussian", "labels"}
//   data     CSV with a header row naming every schema variable; discrete
//            cells hold labels, Gaussian cells decimal reals
//   model    JSON object, "format": "dendroid-model", "version": 1
//   forest   JSON object, "format": "dendroid-forest", "version": 1
//
// Reals are written with 17 significant digits so that reading them back
// reproduces the same doubles.

namespace dendroid::io {

using nlohmann::json;

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kForestFormatVersion = 1;

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

VariableSchema schema_from_json(const json& doc);
json schema_to_json(const VariableSchema& schema);
VariableSchema load_schema(const std::string& path);

/// Splits CSV text into records. Double-quoted fields may contain commas and
/// doubled quotes. Blank lines are skipped. Each record remembers its line.
struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> cells;
};
std::vector<CsvRecord> parse_csv(const std::string& text);

/// Header columns are matched to schema variables by name (any order).
Dataset dataset_from_csv(const VariableSchema& schema, const std::string& text);
Dataset load_dataset(const VariableSchema& schema, const std::string& path);
std::string dataset_to_csv(const Dataset& data);

/// 17 significant digits (round-trips exactly); "inf", "-inf" or "nan" for
/// non-finite values.
std::string format_real(double value);

/// JSON has no infinities; non-finite reals become the strings "inf",
/// "-inf" or "nan".
json real_to_json(double value);
double real_from_json(const json& value);

json model_to_json(const DendroidModel& model);
DendroidModel model_from_json(const json& doc);
DendroidModel load_model(const std::string& path);

json scored_edge_to_json(const VariableSchema& schema, const ScoredEdge& edge);

}  // namespace dendroid::io
