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

#include "dendroid/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "dendroid/core.hpp"
#include "dendroid/estimators.hpp"
#include "dendroid/forest.hpp"
#include "dendroid/io.hpp"
#include "dendroid/model.hpp"
#include "dendroid/oracle.hpp"
#include "dendroid/scoring.hpp"

namespace dendroid::cli {

using io::json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidSchema:
    case ErrorCode::UnknownCategory:
    case ErrorCode::NonFiniteValue:
    case ErrorCode::ArityMismatch:
    case ErrorCode::EmptyDataset:
    case ErrorCode::InvalidCount:
    case ErrorCode::InvalidArgument:
    case ErrorCode::TooLarge:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

namespace {

std::string fixed(double value, int digits) {
  if (!std::isfinite(value)) return io::format_real(value);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

Criterion criterion_of(const RunConfig& cfg) {
  if (cfg.d_n && cfg.criterion != "custom") {
    throw Error(ErrorCode::InvalidArgument, "--dn applies only to --criterion custom");
  }
  if (cfg.criterion == "custom" && !cfg.d_n) {
    throw Error(ErrorCode::InvalidArgument, "--criterion custom requires --dn");
  }
  return Criterion::parse(cfg.criterion, cfg.d_n.value_or(-1.0));
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw Error(ErrorCode::InvalidArgument, std::string(flag) + " is required");
}

struct Inputs {
  VariableSchema schema;
  Dataset data;
};

Inputs load_inputs(const RunConfig& cfg) {
  require(cfg.schema_path, "--schema");
  require(cfg.data_path, "--data");
  VariableSchema schema = io::load_schema(cfg.schema_path);
  Dataset data = io::load_dataset(schema, cfg.data_path);
  return {std::move(schema), std::move(data)};
}

std::string to_dot(const VariableSchema& schema, const Forest& forest,
                   const std::vector<ScoredEdge>& edges) {
  std::ostringstream dot;
  dot << "graph dendroid {\n";
  for (const auto& var : schema.variables()) dot << "  " << json(var.name).dump() << ";\n";
  for (const auto& e : forest.edges()) {
    const auto it = std::find_if(edges.begin(), edges.end(), [&](const ScoredEdge& s) {
      return s.i == e.u && s.j == e.v;
    });
    dot << "  " << json(schema[e.u].name).dump() << " -- " << json(schema[e.v].name).dump();
    if (it != edges.end()) {
      dot << " [label=\"I=" << fixed(it->mi, 4) << " J=" << fixed(it->score, 4) << "\"]";
    }
    dot << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

std::string report(const VariableSchema& schema, const std::vector<EdgeDecision>& decisions) {
  std::ostringstream text;
  text << "u\tv\tI_n\tpenalty\tJ_n\tverdict\n";
  for (const auto& d : decisions) {
    text << schema[d.edge.i].name << '\t' << schema[d.edge.j].name << '\t' << fixed(d.edge.mi, 6)
         << '\t' << fixed(d.edge.penalty, 6) << '\t' << fixed(d.edge.score, 6) << '\t'
         << to_string(d.verdict) << '\n';
  }
  return text.str();
}

// ---------------------------------------------------------------------------

int cmd_learn(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string format = cfg.format.empty() ? "json" : cfg.format;
  if (format != "json" && format != "dot" && format != "both") {
    throw Error(ErrorCode::InvalidArgument, "--format must be json, dot or both");
  }
  if (format == "both" && cfg.out_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--format both needs --out");
  }
  const Criterion criterion = criterion_of(cfg);
  validate(cfg.quad);
  const Inputs in = load_inputs(cfg);

  const std::size_t n_vertices = in.schema.size();
  // A single variable has nothing to score; its forest is empty.
  const std::vector<ScoredEdge> edges =
      n_vertices < 2 ? std::vector<ScoredEdge>{}
                     : score_all_pairs(in.data, criterion, cfg.quad, cfg.threads);
  const ForestBuild build = criterion.kind() == Criterion::Kind::MaximumLikelihood
                                ? build_tree_chow_liu_traced(n_vertices, edges)
                                : build_forest_suzuki_traced(n_vertices, edges);
  const DendroidModel model = fit(in.data, build.forest);
  const double ll = log_likelihood(model, in.data);
  const double dn = criterion.d_n(in.data.rows());
  const double dl = description_length(model, in.data, criterion);

  json doc{{"format", "dendroid-forest"},
           {"version", io::kForestFormatVersion},
           {"criterion", criterion.name()},
           {"d_n", io::real_to_json(dn)},
           {"n", in.data.rows()},
           {"vertices", json::array()},
           {"edges", json::array()},
           {"decisions", json::array()},
           {"total_mi", io::real_to_json(total_mi(build.forest, edges))},
           {"total_score", io::real_to_json(total_score(build.forest, edges))},
           {"log_likelihood", io::real_to_json(ll)},
           {"parameter_count", model.parameter_count()},
           {"description_length", io::real_to_json(dl)}};
  for (const auto& var : in.schema.variables()) doc["vertices"].push_back(var.name);
  for (const auto& e : build.forest.edges()) {
    const auto it = std::find_if(edges.begin(), edges.end(), [&](const ScoredEdge& s) {
      return s.i == e.u && s.j == e.v;
    });
    doc["edges"].push_back(io::scored_edge_to_json(in.schema, *it));
  }
  for (const auto& d : build.decisions) {
    json entry = io::scored_edge_to_json(in.schema, d.edge);
    entry["verdict"] = std::string(to_string(d.verdict));
    doc["decisions"].push_back(std::move(entry));
  }

  const std::string json_text = doc.dump(2) + "\n";
  const std::string dot_text = to_dot(in.schema, build.forest, edges);
  if (format == "both") {
    io::write_file(cfg.out_path + ".json", json_text);
    io::write_file(cfg.out_path + ".dot", dot_text);
  } else {
    emit(cfg.out_path, format == "json" ? json_text : dot_text, out);
  }
  if (!cfg.model_out_path.empty()) {
    io::write_file(cfg.model_out_path, io::model_to_json(model).dump(2) + "\n");
  }
  // The report shares stdout only when the artifact went to a file.
  (cfg.out_path.empty() ? err : out) << report(in.schema, build.decisions);
  return kExitOk;
}

std::vector<PairWeight> read_mi_table(const VariableSchema& schema, const std::string& path) {
  const auto records = io::parse_csv(io::read_file(path));
  if (records.empty()) throw Error(ErrorCode::ParseError, path + ": empty MI table");
  const auto& header = records.front().cells;
  if (header != std::vector<std::string>{"u", "v", "mi"}) {
    throw Error(ErrorCode::ParseError, path + ": header must be u,v,mi");
  }
  std::vector<PairWeight> weights;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = path + ": line " + std::to_string(rec.line);
    if (rec.cells.size() != 3) throw Error(ErrorCode::ArityMismatch, where + ": expected 3 cells");
    const auto u = schema.index_of(rec.cells[0]);
    const auto v = schema.index_of(rec.cells[1]);
    if (!u || !v) throw Error(ErrorCode::ParseError, where + ": unknown variable");
    double mi = 0.0;
    const std::string& cell = rec.cells[2];
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), mi);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
      throw Error(ErrorCode::ParseError, where + ": bad mi value '" + cell + "'");
    }
    weights.push_back({*u, *v, mi});
  }
  return weights;
}

int cmd_score(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string format = cfg.format.empty() ? "csv" : cfg.format;
  if (format != "csv" && format != "json") {
    throw Error(ErrorCode::InvalidArgument, "--format must be csv or json");
  }
  const Criterion criterion = criterion_of(cfg);
  validate(cfg.quad);

  std::vector<ScoredEdge> edges;
  std::optional<VariableSchema> schema;
  if (!cfg.mi_table_path.empty()) {
    require(cfg.schema_path, "--schema");
    schema = io::load_schema(cfg.schema_path);
    if (criterion.kind() == Criterion::Kind::MDL && !cfg.n_override) {
      throw Error(ErrorCode::InvalidArgument, "--mi-table with --criterion mdl needs --n");
    }
    const auto weights = read_mi_table(*schema, cfg.mi_table_path);
    edges = score_given_weights(*schema, weights, criterion.d_n(cfg.n_override.value_or(0)));
  } else {
    Inputs in = load_inputs(cfg);
    edges = score_all_pairs(in.data, criterion, cfg.quad, cfg.threads);
    schema = std::move(in.schema);
  }

  std::string text;
  if (format == "json") {
    json rows = json::array();
    for (const auto& e : edges) rows.push_back(io::scored_edge_to_json(*schema, e));
    text = json{{"criterion", criterion.name()}, {"edges", std::move(rows)}}.dump(2) + "\n";
  } else {
    text = "i,j,u,v,mi,penalty,score\n";
    for (const auto& e : edges) {
      text += std::to_string(e.i) + "," + std::to_string(e.j) + "," + (*schema)[e.i].name + "," +
              (*schema)[e.j].name + "," + io::format_real(e.mi) + "," +
              io::format_real(e.penalty) + "," + io::format_real(e.score) + "\n";
    }
  }
  emit(cfg.out_path, text, out);
  return kExitOk;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  require(cfg.model_path, "--model");
  const DendroidModel model = io::load_model(cfg.model_path);
  const Dataset data = sample(model, cfg.count, cfg.seed);
  emit(cfg.out_path, io::dataset_to_csv(data), out);
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const std::string format = cfg.format.empty() ? "text" : cfg.format;
  if (format != "text" && format != "json") {
    throw Error(ErrorCode::InvalidArgument, "--format must be text or json");
  }
  require(cfg.model_path, "--model");
  require(cfg.data_path, "--data");
  const Criterion criterion = criterion_of(cfg);
  const DendroidModel model = io::load_model(cfg.model_path);
  if (!cfg.schema_path.empty() && !(io::load_schema(cfg.schema_path) == model.schema())) {
    throw Error(ErrorCode::SchemaMismatch, "--schema differs from the model's schema");
  }
  const Dataset data = io::load_dataset(model.schema(), cfg.data_path);
  const double ll = log_likelihood(model, data);
  const double dn = criterion.d_n(data.rows());
  const double dl = description_length(model, data, criterion);

  std::string text;
  if (format == "json") {
    text = json{{"criterion", criterion.name()},
                {"n", data.rows()},
                {"log_likelihood", io::real_to_json(ll)},
                {"parameter_count", model.parameter_count()},
                {"d_n", io::real_to_json(dn)},
                {"description_length", io::real_to_json(dl)}}
               .dump(2) +
           "\n";
  } else {
    text = "log_likelihood " + io::format_real(ll) + "\nparameter_count " +
           std::to_string(model.parameter_count()) + "\nd_n " + io::format_real(dn) +
           "\ndescription_length " + io::format_real(dl) + "\n";
  }
  emit(cfg.out_path, text, out);
  return kExitOk;
}

// Debugging aid: greedy structure against exhaustive search on the same scores.
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Criterion criterion = criterion_of(cfg);
  validate(cfg.quad);
  const Inputs in = load_inputs(cfg);
  const std::size_t nv = in.schema.size();
  const auto edges = nv < 2 ? std::vector<ScoredEdge>{}
                            : score_all_pairs(in.data, criterion, cfg.quad, cfg.threads);
  const bool tree = criterion.kind() == Criterion::Kind::MaximumLikelihood;
  const Forest greedy = tree ? build_tree_chow_liu(nv, edges) : build_forest_suzuki(nv, edges);
  const Forest exact = oracle::brute_force_best_forest(nv, edges, tree);
  const auto total = [&](const Forest& f) {
    return tree ? total_mi(f, edges) : total_score(f, edges);
  };
  const auto show = [&](const char* label, const Forest& f) {
    out << label << " total=" << io::format_real(total(f)) << " edges:";
    for (const auto& e : f.edges()) out << ' ' << in.schema[e.u].name << '-' << in.schema[e.v].name;
    out << '\n';
  };
  show("greedy", greedy);
  show("exhaustive", exact);
  const bool agree = total(greedy) == total(exact);
  out << (agree ? "agree\n" : "DISAGREE\n");
  return agree ? kExitOk : kExitRuntime;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Forest-structured graphical models for discrete and Gaussian data", "dendroid"};
  app.require_subcommand(1);
  RunConfig cfg;
  double dn = 0.0;
  std::size_t n_override = 0;

  const auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", cfg.data_path, "CSV file with a header row");
    sub->add_option("--schema", cfg.schema_path, "JSON schema file");
  };
  const auto add_criterion = [&](CLI::App* sub) {
    sub->add_option("--criterion", cfg.criterion, "ml, mdl, aic or custom")
        ->check(CLI::IsMember({"ml", "mdl", "aic", "custom"}));
    sub->add_option("--dn", dn, "penalty weight d_n for --criterion custom");
  };
  const auto add_quad = [&](CLI::App* sub) {
    sub->add_option("--quad-order", cfg.quad.order, "quadrature order (even, >= 8)");
    sub->add_option("--quad-tol", cfg.quad.tolerance, "relative quadrature tolerance");
    sub->add_option("--threads", cfg.threads, "worker threads for pair scoring")
        ->check(CLI::PositiveNumber);
  };
  const auto add_out = [&](CLI::App* sub, const char* formats) {
    sub->add_option("--format", cfg.format, formats);
    sub->add_option("--out", cfg.out_path, "output path (default: stdout)");
  };

  CLI::App* learn = app.add_subcommand("learn", "learn a forest structure from data");
  add_data(learn);
  add_criterion(learn);
  add_quad(learn);
  add_out(learn, "json, dot or both (both writes <out>.json and <out>.dot)");
  learn->add_option("--model-out", cfg.model_out_path, "also write the fitted model JSON");

  CLI::App* score = app.add_subcommand("score", "emit the pairwise score table");
  add_data(score);
  add_criterion(score);
  add_quad(score);
  add_out(score, "csv or json");
  score->add_option("--mi-table", cfg.mi_table_path, "CSV u,v,mi of precomputed I_n values");
  score->add_option("--n", n_override, "sample size for --mi-table with mdl");

  CLI::App* samp = app.add_subcommand("sample", "draw rows from a fitted model");
  samp->add_option("--model", cfg.model_path, "model JSON")->required();
  samp->add_option("--count", cfg.count, "number of rows")->required();
  samp->add_option("--seed", cfg.seed, "random seed");
  samp->add_option("--out", cfg.out_path, "output CSV (default: stdout)");

  CLI::App* eval = app.add_subcommand("eval", "log-likelihood and description length");
  eval->add_option("--model", cfg.model_path, "model JSON")->required();
  add_data(eval);
  add_criterion(eval);
  add_out(eval, "text or json");

  CLI::App* orc = app.add_subcommand("oracle", "");  // hidden: empty description
  orc->group("");
  add_data(orc);
  add_criterion(orc);
  add_quad(orc);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  for (CLI::App* sub : {learn, score, eval, orc}) {
    if (sub->parsed() && sub->count("--dn") > 0) cfg.d_n = dn;
  }
  if (score->parsed() && score->count("--n") > 0) cfg.n_override = n_override;

  try {
    if (learn->parsed()) return cmd_learn(cfg, out, err);
    if (score->parsed()) return cmd_score(cfg, out, err);
    if (samp->parsed()) return cmd_sample(cfg, out, err);
    if (eval->parsed()) return cmd_eval(cfg, out, err);
    if (orc->parsed()) return cmd_oracle(cfg, out, err);
  } catch (const Error& e) {
    err << "dendroid: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "dendroid: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace dendroid::cli
