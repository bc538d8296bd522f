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

#include "dendroid/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dendroid::io {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Schema

VariableSchema schema_from_json(const json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::ParseError, "schema must be a JSON array");
  std::vector<Variable> vars;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const json& entry = doc[k];
    const std::string where = "schema entry " + std::to_string(k);
    if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
        !entry.contains("kind") || !entry["kind"].is_string()) {
      throw Error(ErrorCode::ParseError, where + ": needs string fields 'name' and 'kind'");
    }
    const std::string kind = entry["kind"];
    if (kind == "gaussian") {
      vars.push_back({entry["name"], VariableKind::gaussian()});
    } else if (kind == "discrete") {
      if (!entry.contains("labels") || !entry["labels"].is_array()) {
        throw Error(ErrorCode::ParseError, where + ": discrete variables need 'labels'");
      }
      std::vector<std::string> labels;
      for (const auto& l : entry["labels"]) {
        if (!l.is_string()) throw Error(ErrorCode::ParseError, where + ": labels must be strings");
        labels.push_back(l);
      }
      vars.push_back({entry["name"], VariableKind::discrete(std::move(labels))});
    } else {
      throw Error(ErrorCode::ParseError, where + ": unknown kind '" + kind + "'");
    }
  }
  return VariableSchema(std::move(vars));
}

json schema_to_json(const VariableSchema& schema) {
  json doc = json::array();
  for (const auto& var : schema.variables()) {
    json entry{{"name", var.name}, {"kind", var.kind.is_discrete() ? "discrete" : "gaussian"}};
    if (var.kind.is_discrete()) entry["labels"] = var.kind.labels();
    doc.push_back(std::move(entry));
  }
  return doc;
}

VariableSchema load_schema(const std::string& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  try {
    return schema_from_json(doc);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

std::vector<CsvRecord> parse_csv(const std::string& text) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string cell;
  std::size_t line = 1;
  std::size_t record_line = 1;
  bool in_quotes = false;
  bool cell_started = false;

  auto end_record = [&] {
    const bool blank = current.cells.empty() && cell.empty() && !cell_started;
    if (!blank) {
      current.cells.push_back(std::move(cell));
      current.line = record_line;
      records.push_back(std::move(current));
    }
    current = CsvRecord{};
    cell.clear();
    cell_started = false;
  };

  for (std::size_t k = 0; k < text.size(); ++k) {
    const char c = text[k];
    if (in_quotes) {
      if (c == '"') {
        if (k + 1 < text.size() && text[k + 1] == '"') {
          cell.push_back('"');
          ++k;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        cell.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        cell_started = true;
        break;
      case ',':
        current.cells.push_back(std::move(cell));
        cell.clear();
        cell_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        record_line = line;
        break;
      default:
        if (current.cells.empty() && cell.empty() && !cell_started) record_line = line;
        cell.push_back(c);
        break;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(record_line) + ": unterminated quote");
  }
  end_record();
  return records;
}

Dataset dataset_from_csv(const VariableSchema& schema, const std::string& text) {
  const std::vector<CsvRecord> records = parse_csv(text);
  if (records.empty()) throw Error(ErrorCode::EmptyDataset, "data has no header row");
  const CsvRecord& header = records.front();

  // position[v] = CSV column holding schema variable v
  std::vector<std::size_t> position(schema.size(), header.cells.size());
  for (std::size_t c = 0; c < header.cells.size(); ++c) {
    const auto v = schema.index_of(header.cells[c]);
    if (!v) {
      throw Error(ErrorCode::SchemaMismatch, "line " + std::to_string(header.line) +
                                                 ": column '" + header.cells[c] +
                                                 "' is not in the schema");
    }
    if (position[*v] != header.cells.size()) {
      throw Error(ErrorCode::SchemaMismatch, "line " + std::to_string(header.line) +
                                                 ": duplicate column '" + header.cells[c] + "'");
    }
    position[*v] = c;
  }
  for (Vertex v = 0; v < schema.size(); ++v) {
    if (position[v] == header.cells.size()) {
      throw Error(ErrorCode::SchemaMismatch, "header lacks column '" + schema[v].name + "'");
    }
  }

  std::vector<RawRecord> rows;
  std::vector<std::size_t> lines;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    if (rec.cells.size() != header.cells.size()) {
      throw Error(ErrorCode::ArityMismatch, "line " + std::to_string(rec.line) + ": expected " +
                                                std::to_string(header.cells.size()) +
                                                " cells, found " + std::to_string(rec.cells.size()));
    }
    RawRecord raw(schema.size());
    for (Vertex v = 0; v < schema.size(); ++v) raw[v] = rec.cells[position[v]];
    rows.push_back(std::move(raw));
    lines.push_back(rec.line);
  }
  return validate_dataset(schema, rows, lines);
}

Dataset load_dataset(const VariableSchema& schema, const std::string& path) {
  const std::string text = read_file(path);
  try {
    return dataset_from_csv(schema, text);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos && !cell.empty() &&
      cell.front() != ' ' && cell.back() != ' ') {
    return cell;
  }
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string dataset_to_csv(const Dataset& data) {
  const VariableSchema& schema = data.schema();
  std::string out;
  for (Vertex v = 0; v < schema.size(); ++v) {
    if (v > 0) out.push_back(',');
    out += csv_escape(schema[v].name);
  }
  out.push_back('\n');
  for (std::size_t r = 0; r < data.rows(); ++r) {
    for (Vertex v = 0; v < schema.size(); ++v) {
      if (v > 0) out.push_back(',');
      if (schema[v].kind.is_discrete()) {
        out += csv_escape(schema[v].kind.labels()[static_cast<std::size_t>(data.categories(v)[r])]);
      } else {
        out += format_real(data.values(v)[r]);
      }
    }
    out.push_back('\n');
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON helpers

json real_to_json(double value) {
  if (std::isfinite(value)) return value;
  return format_real(value);
}

double real_from_json(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value;
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::ParseError, "expected a real number, found " + value.dump());
}

namespace {

std::vector<double> reals_from_json(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw Error(ErrorCode::ParseError, what + " must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& x : arr) out.push_back(real_from_json(x));
  return out;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::ParseError, where + ": missing field '" + key + "'");
  }
  return obj[key];
}

Vertex vertex_by_name(const VariableSchema& schema, const json& name, const std::string& where) {
  if (!name.is_string()) throw Error(ErrorCode::ParseError, where + ": vertex names must be strings");
  const auto v = schema.index_of(name.get<std::string>());
  if (!v) throw Error(ErrorCode::ParseError, where + ": unknown variable " + name.dump());
  return *v;
}

}  // namespace

json model_to_json(const DendroidModel& model) {
  const VariableSchema& schema = model.schema();
  json nodes = json::array();
  for (Vertex v = 0; v < schema.size(); ++v) {
    json node{{"name", schema[v].name}};
    if (const auto* m = std::get_if<DiscreteMarginal>(&model.marginals()[v])) {
      node["kind"] = "discrete";
      node["probs"] = m->probs;
    } else {
      const auto& g = std::get<GaussianMarginal>(model.marginals()[v]);
      node["kind"] = "gaussian";
      node["mean"] = g.mean;
      node["variance"] = g.variance;
    }
    nodes.push_back(std::move(node));
  }

  json edges = json::array();
  for (const auto& factor : model.factors()) {
    json e{{"u", schema[factor.edge.u].name}, {"v", schema[factor.edge.v].name}};
    if (const auto* f = std::get_if<DiscreteFactor>(&factor.params)) {
      const std::size_t av = schema[factor.edge.v].kind.cardinality();
      json rows = json::array();
      for (std::size_t off = 0; off < f->joint.size(); off += av) {
        rows.push_back(std::vector<double>(f->joint.begin() + static_cast<std::ptrdiff_t>(off),
                                           f->joint.begin() + static_cast<std::ptrdiff_t>(off + av)));
      }
      e["kind"] = "discrete";
      e["joint"] = std::move(rows);
    } else if (const auto* f = std::get_if<GaussianFactor>(&factor.params)) {
      e["kind"] = "gaussian";
      e["rho"] = f->rho;
    } else {
      const auto& m = std::get<MixedFactor>(factor.params);
      e["kind"] = "mixed";
      e["gaussian"] = schema[m.gaussian].name;
      e["discrete"] = schema[m.discrete].name;
      e["class_probs"] = m.class_probs;
      e["class_means"] = m.class_means;
      e["variance"] = m.variance;
    }
    edges.push_back(std::move(e));
  }

  return json{{"format", "dendroid-model"},
              {"version", kModelFormatVersion},
              {"n", model.n()},
              {"parameter_count", model.parameter_count()},
              {"schema", schema_to_json(schema)},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
}

DendroidModel model_from_json(const json& doc) {
  const std::string where = "model";
  if (!doc.is_object() || doc.value("format", "") != "dendroid-model") {
    throw Error(ErrorCode::ParseError, "not a dendroid-model document");
  }
  if (field(doc, "version", where) != kModelFormatVersion) {
    throw Error(ErrorCode::ParseError, "unsupported model version " + doc["version"].dump());
  }
  VariableSchema schema = schema_from_json(field(doc, "schema", where));
  const json& nodes = field(doc, "nodes", where);
  if (!nodes.is_array() || nodes.size() != schema.size()) {
    throw Error(ErrorCode::ParseError, "model needs one node entry per variable");
  }
  std::vector<NodeMarginal> marginals;
  for (Vertex v = 0; v < schema.size(); ++v) {
    const std::string w = "node '" + schema[v].name + "'";
    if (schema[v].kind.is_discrete()) {
      marginals.emplace_back(DiscreteMarginal{reals_from_json(field(nodes[v], "probs", w), w)});
    } else {
      marginals.emplace_back(GaussianMarginal{real_from_json(field(nodes[v], "mean", w)),
                                              real_from_json(field(nodes[v], "variance", w))});
    }
  }

  const json& edges = field(doc, "edges", where);
  if (!edges.is_array()) throw Error(ErrorCode::ParseError, "'edges' must be an array");
  std::vector<EdgeFactor> factors;
  std::vector<Edge> forest_edges;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string w = "edge " + std::to_string(k);
    const json& e = edges[k];
    Vertex u = vertex_by_name(schema, field(e, "u", w), w);
    Vertex v = vertex_by_name(schema, field(e, "v", w), w);
    if (u > v) throw Error(ErrorCode::ParseError, w + ": endpoints must be in schema order");
    const std::string kind = field(e, "kind", w).get<std::string>();
    EdgeFactor factor{{u, v}, GaussianFactor{}};
    if (kind == "discrete") {
      DiscreteFactor f;
      for (const auto& row : field(e, "joint", w)) {
        for (double p : reals_from_json(row, w)) f.joint.push_back(p);
      }
      factor.params = std::move(f);
    } else if (kind == "gaussian") {
      factor.params = GaussianFactor{real_from_json(field(e, "rho", w))};
    } else if (kind == "mixed") {
      MixedFactor f;
      f.gaussian = vertex_by_name(schema, field(e, "gaussian", w), w);
      f.discrete = vertex_by_name(schema, field(e, "discrete", w), w);
      f.class_probs = reals_from_json(field(e, "class_probs", w), w);
      f.class_means = reals_from_json(field(e, "class_means", w), w);
      f.variance = real_from_json(field(e, "variance", w));
      factor.params = std::move(f);
    } else {
      throw Error(ErrorCode::ParseError, w + ": unknown kind '" + kind + "'");
    }
    forest_edges.push_back({u, v});
    factors.push_back(std::move(factor));
  }
  Forest forest(schema.size(), forest_edges);
  if (forest.edges() != forest_edges) {
    throw Error(ErrorCode::ParseError, "model edges must be listed in canonical order");
  }
  const auto n = field(doc, "n", where).get<std::size_t>();
  DendroidModel model(std::move(schema), std::move(forest), std::move(marginals),
                      std::move(factors), n);
  if (doc.contains("parameter_count") &&
      doc["parameter_count"].get<std::size_t>() != model.parameter_count()) {
    throw Error(ErrorCode::ParseError, "stored parameter_count does not match the structure");
  }
  return model;
}

DendroidModel load_model(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return model_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

json scored_edge_to_json(const VariableSchema& schema, const ScoredEdge& edge) {
  return json{{"i", edge.i},
              {"j", edge.j},
              {"u", schema[edge.i].name},
              {"v", schema[edge.j].name},
              {"mi", real_to_json(edge.mi)},
              {"penalty", real_to_json(edge.penalty)},
              {"score", real_to_json(edge.score)}};
}

}  // namespace dendroid::io
