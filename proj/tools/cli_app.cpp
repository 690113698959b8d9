// Copyright 2026 The mobopc Authors
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

#include "cli_app.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mobopc/errors.hpp"
#include "mobopc/optimizer.hpp"

namespace mobopc::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Small formatting helpers.

std::string format_double(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001B3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd json_to_vector(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  Eigen::Index i = 0;
  for (const auto& item : arr) v[i++] = item.get<double>();
  return v;
}

std::string direction_name(Direction d) {
  return d == Direction::kMinimize ? "min" : "max";
}

Direction direction_from(const std::string& name, const std::string& where) {
  if (name == "min" || name == "minimize" || name == "minimise") return Direction::kMinimize;
  if (name == "max" || name == "maximize" || name == "maximise") return Direction::kMaximize;
  throw InvalidDataError(where + ": unknown direction '" + name + "' (use min/max)");
}

void check_keys(const json& object, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.contains(key)) {
      throw InvalidDataError(where + ": unknown key '" + key + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Config file <-> RunConfig.

struct CliConfig {
  RunConfig run;
  fs::path output_dir;  // resolved against the config file location
  std::string hash;     // over the canonicalised config document
};

RunConfig config_from_json(const json& doc, const fs::path& base_dir) {
  check_keys(doc,
             {"objective", "dataset", "preference_tuples", "iterations", "initial_design",
              "seed", "directions", "bounds", "reference", "mc_rounds", "prob_rounds",
              "constraint_mode", "search", "output_dir"},
             "config");

  RunConfig config;
  if (doc.contains("objective")) config.benchmark = doc.at("objective").get<std::string>();
  if (doc.contains("dataset")) {
    const json& ds = doc.at("dataset");
    check_keys(ds, {"path", "input_columns", "objective_columns", "directions"},
               "config.dataset");
    DatasetSpec dataset;
    dataset.path = (base_dir / ds.at("path").get<std::string>()).string();
    dataset.schema.input_columns = ds.at("input_columns").get<std::vector<std::string>>();
    dataset.schema.objective_columns =
        ds.at("objective_columns").get<std::vector<std::string>>();
    if (ds.contains("directions")) {
      for (const auto& name : ds.at("directions")) {
        dataset.schema.directions.push_back(
            direction_from(name.get<std::string>(), "config.dataset.directions"));
      }
    }
    config.dataset = std::move(dataset);
  }
  if (doc.contains("preference_tuples")) {
    config.preference_tuples = doc.at("preference_tuples").get<std::vector<std::vector<int>>>();
  }
  if (doc.contains("iterations")) config.iterations = doc.at("iterations").get<int>();
  if (doc.contains("initial_design")) config.initial_design = doc.at("initial_design").get<int>();
  if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("directions")) {
    std::vector<Direction> dirs;
    for (const auto& name : doc.at("directions")) {
      dirs.push_back(direction_from(name.get<std::string>(), "config.directions"));
    }
    config.directions_override = std::move(dirs);
  }
  if (doc.contains("bounds")) {
    const auto rows = doc.at("bounds").get<std::vector<std::vector<double>>>();
    DesignBox box;
    box.lo.resize(static_cast<Eigen::Index>(rows.size()));
    box.hi.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 2) throw InvalidDataError("config.bounds: each entry is [lo, hi]");
      box.lo[static_cast<Eigen::Index>(i)] = rows[i][0];
      box.hi[static_cast<Eigen::Index>(i)] = rows[i][1];
    }
    config.bounds_override = std::move(box);
  }
  if (doc.contains("reference")) {
    config.reference_override = json_to_vector(doc.at("reference"));
  }
  if (doc.contains("mc_rounds")) config.mc_rounds = doc.at("mc_rounds").get<int>();
  if (doc.contains("prob_rounds")) config.prob_rounds = doc.at("prob_rounds").get<int>();
  if (doc.contains("constraint_mode")) {
    const std::string mode = doc.at("constraint_mode").get<std::string>();
    if (mode == "conjunction") {
      config.constraint_mode = ConstraintMode::kConjunction;
    } else if (mode == "merge") {
      config.constraint_mode = ConstraintMode::kMerge;
    } else {
      throw InvalidDataError("config.constraint_mode: use conjunction or merge");
    }
  }
  if (doc.contains("search")) {
    const json& search = doc.at("search");
    check_keys(search, {"screen_count", "local_restarts", "refine_evals"}, "config.search");
    if (search.contains("screen_count")) {
      config.search.screen_count = search.at("screen_count").get<int>();
    }
    if (search.contains("local_restarts")) {
      config.search.local_restarts = search.at("local_restarts").get<int>();
    }
    if (search.contains("refine_evals")) {
      config.search.refine_evals = search.at("refine_evals").get<int>();
    }
  }
  return config;
}

json config_to_json(const RunConfig& config) {
  json doc;
  if (!config.benchmark.empty()) doc["objective"] = config.benchmark;
  if (config.dataset.has_value()) {
    json ds;
    ds["path"] = config.dataset->path;
    ds["input_columns"] = config.dataset->schema.input_columns;
    ds["objective_columns"] = config.dataset->schema.objective_columns;
    json dirs = json::array();
    for (Direction d : config.dataset->schema.directions) dirs.push_back(direction_name(d));
    if (!dirs.empty()) ds["directions"] = dirs;
    doc["dataset"] = ds;
  }
  doc["preference_tuples"] = config.preference_tuples;
  doc["iterations"] = config.iterations;
  doc["initial_design"] = config.initial_design;
  doc["seed"] = config.seed;
  if (config.directions_override.has_value()) {
    json dirs = json::array();
    for (Direction d : *config.directions_override) dirs.push_back(direction_name(d));
    doc["directions"] = dirs;
  }
  if (config.bounds_override.has_value()) {
    json rows = json::array();
    for (int i = 0; i < config.bounds_override->dim(); ++i) {
      rows.push_back({config.bounds_override->lo[i], config.bounds_override->hi[i]});
    }
    doc["bounds"] = rows;
  }
  if (config.reference_override.has_value()) {
    doc["reference"] = vector_to_json(*config.reference_override);
  }
  doc["mc_rounds"] = config.mc_rounds;
  doc["prob_rounds"] = config.prob_rounds;
  doc["constraint_mode"] =
      config.constraint_mode == ConstraintMode::kMerge ? "merge" : "conjunction";
  doc["search"] = {{"screen_count", config.search.screen_count},
                   {"local_restarts", config.search.local_restarts},
                   {"refine_evals", config.search.refine_evals}};
  return doc;
}

CliConfig load_config(const std::string& path, const std::optional<std::uint64_t>& seed_override,
                      const std::optional<int>& iterations_override,
                      const std::optional<std::string>& out_override) {
  std::ifstream file(path);
  if (!file) throw InvalidDataError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::exception& e) {
    throw InvalidDataError("config parse error in '" + path + "': " + e.what());
  }

  const fs::path base_dir = fs::absolute(fs::path(path)).parent_path();
  CliConfig out;
  out.run = config_from_json(doc, base_dir);
  if (seed_override.has_value()) out.run.seed = *seed_override;
  if (iterations_override.has_value()) out.run.iterations = *iterations_override;

  std::string dir = doc.contains("output_dir") ? doc.at("output_dir").get<std::string>() : "out";
  if (out_override.has_value()) dir = *out_override;
  fs::path out_path(dir);
  out.output_dir = out_path.is_absolute() ? out_path : base_dir / out_path;

  // Hash the effective configuration (overrides applied) so reruns with the
  // same inputs are identifiable.
  out.hash = fnv1a_hex(config_to_json(out.run).dump());
  return out;
}

// ---------------------------------------------------------------------------
// Output writers.

void write_trace_csv(const fs::path& path, const std::string& hash, std::uint64_t seed,
                     const std::vector<const RunTrace*>& traces) {
  std::ofstream out(path);
  out << "# config_hash=" << hash << " seed=" << seed << "\n";
  const int n = traces.front()->objective.design_dim;
  const int m = traces.front()->objective.num_objectives;
  out << "t";
  for (int d = 0; d < n; ++d) out << ",x" << d;
  for (int i = 0; i < m; ++i) out << ",y" << i;
  out << ",s_x,acquisition,hv\n";
  int row = 0;
  for (const RunTrace* trace : traces) {
    for (const auto& rec : trace->records) {
      out << row++;
      for (int d = 0; d < n; ++d) out << "," << format_double(rec.x[d]);
      for (int i = 0; i < m; ++i) out << "," << format_double(rec.y[i]);
      out << "," << format_double(rec.s_x) << "," << format_double(rec.acquisition) << ","
          << format_double(rec.hypervolume) << "\n";
    }
  }
}

json directions_json(const std::vector<Direction>& directions) {
  json arr = json::array();
  for (Direction d : directions) arr.push_back(direction_name(d));
  return arr;
}

json pareto_json_single(const RunTrace& trace, const std::string& hash) {
  json doc;
  doc["config_hash"] = hash;
  doc["seed"] = trace.config.seed;
  doc["directions"] = directions_json(trace.objective.directions);
  doc["reference_internal"] = vector_to_json(trace.archive.reference);
  json points = json::array();
  for (int idx : trace.dominant) {
    const auto& point = trace.archive.points[static_cast<std::size_t>(idx)];
    json entry;
    entry["x"] = vector_to_json(point.x);
    entry["y"] = vector_to_json(trace.records[static_cast<std::size_t>(idx)].y);
    entry["prob"] = point.prob.has_value() ? json(*point.prob) : json(nullptr);
    points.push_back(entry);
  }
  doc["points"] = points;
  return doc;
}

json pareto_json_merged(const MergedResult& merged, const std::vector<Direction>& directions,
                        const Eigen::VectorXd& reference, const std::string& hash,
                        std::uint64_t seed) {
  json doc;
  doc["config_hash"] = hash;
  doc["seed"] = seed;
  doc["merged"] = true;
  doc["directions"] = directions_json(directions);
  doc["reference_internal"] = vector_to_json(reference);
  doc["prob_sources"] = merged.trace_with_probs;
  json points = json::array();
  for (const auto& point : merged.points) {
    json entry;
    entry["x"] = vector_to_json(point.x);
    entry["y"] = vector_to_json(point.y);
    entry["probs"] = point.probs;
    points.push_back(entry);
  }
  doc["points"] = points;
  return doc;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
}

json compliance_json(const ComplianceResult& result, const std::string& source) {
  return json{{"value", result.value},
              {"vacuous", result.vacuous},
              {"satisfied", result.satisfied},
              {"total", result.total},
              {"source", source}};
}

json run_summary(const RunTrace& trace, const std::string& hash) {
  json summary;
  summary["config"] = config_to_json(trace.config);
  summary["config_hash"] = hash;
  summary["seed"] = trace.config.seed;
  summary["aborted"] = trace.aborted;
  summary["abort_reason"] = trace.abort_reason;
  summary["evaluation_failures"] = trace.evaluation_failures;
  summary["records"] = trace.records.size();
  summary["pareto_size"] = trace.dominant.size();
  summary["final_hypervolume"] = trace.final_hypervolume;
  summary["reference_dropped"] = trace.reference_dropped;
  if (trace.constrained() && !trace.records.empty()) {
    const bool analytic = static_cast<bool>(trace.objective.analytic_gradient);
    const ComplianceResult result =
        compliance(trace, analytic ? GradientSource::kAnalytic : GradientSource::kGp);
    summary["compliance"] = compliance_json(result, analytic ? "analytic" : "gp");
  } else {
    summary["compliance"] = nullptr;
  }
  return summary;
}

// ---------------------------------------------------------------------------
// Re-ingestion of run directories (compliance / merge subcommands).

struct StoredRun {
  RunConfig config;
  std::string hash;
  RunTrace trace;  // records, objective, bases, dominant and archive rebuilt
};

StoredRun load_run_dir(const fs::path& dir) {
  std::ifstream summary_file(dir / "summary.json");
  if (!summary_file) {
    throw InvalidDataError("cannot open '" + (dir / "summary.json").string() + "'");
  }
  json summary;
  try {
    summary = json::parse(summary_file);
  } catch (const json::exception& e) {
    throw ParseError("summary parse error: " + std::string(e.what()));
  }

  StoredRun stored;
  stored.config = config_from_json(summary.at("config"), dir);
  stored.hash = summary.value("config_hash", "");

  RunTrace& trace = stored.trace;
  trace.config = stored.config;
  trace.objective = resolve_objective(stored.config);
  for (const auto& tuple : stored.config.preference_tuples) {
    trace.bases.push_back(build_basis(PreferenceTuple(tuple, trace.objective.num_objectives)));
  }

  std::ifstream csv(dir / "trace.csv");
  if (!csv) throw InvalidDataError("cannot open '" + (dir / "trace.csv").string() + "'");
  const int n = trace.objective.design_dim;
  const int m = trace.objective.num_objectives;
  std::string line;
  bool header_seen = false;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::stringstream row(line);
    std::string cell;
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<int>(values.size()) != 1 + n + m + 3) {
      throw ParseError("trace.csv row has unexpected field count");
    }
    IterationRecord rec;
    rec.index = static_cast<int>(values[0]);
    rec.x = Eigen::Map<Eigen::VectorXd>(values.data() + 1, n);
    rec.y = Eigen::Map<Eigen::VectorXd>(values.data() + 1 + n, m);
    rec.s_x = values[static_cast<std::size_t>(1 + n + m)];
    rec.acquisition = values[static_cast<std::size_t>(1 + n + m) + 1];
    rec.hypervolume = values[static_cast<std::size_t>(1 + n + m) + 2];
    trace.records.push_back(std::move(rec));
  }
  if (trace.records.empty()) throw ParseError("trace.csv has no data rows");

  // Rebuild the internal archive and dominant set from the stored records.
  Eigen::VectorXd signs(m);
  for (int i = 0; i < m; ++i) {
    signs[i] = trace.objective.directions[static_cast<std::size_t>(i)] == Direction::kMaximize
                   ? 1.0
                   : -1.0;
  }
  std::vector<Eigen::VectorXd> internal;
  for (const auto& rec : trace.records) {
    ArchivePoint point;
    point.x = rec.x;
    point.y = signs.cwiseProduct(rec.y);
    internal.push_back(point.y);
    trace.archive.points.push_back(std::move(point));
  }
  trace.dominant = dominant_indices(internal);
  return stored;
}

void refit_models(RunTrace& trace) {
  const int m = trace.objective.num_objectives;
  Eigen::MatrixXd design(static_cast<Eigen::Index>(trace.records.size()),
                         trace.objective.design_dim);
  for (std::size_t r = 0; r < trace.records.size(); ++r) {
    design.row(static_cast<Eigen::Index>(r)) = trace.records[r].x.transpose();
  }
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd targets(static_cast<Eigen::Index>(trace.records.size()));
    for (std::size_t r = 0; r < trace.records.size(); ++r) {
      targets[static_cast<Eigen::Index>(r)] = trace.archive.points[r].y[i];
    }
    trace.final_models.push_back(GpModel::fit(design, targets));
  }
}

// ---------------------------------------------------------------------------
// Subcommands.

int cmd_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
            const std::optional<int>& iterations, const std::optional<std::string>& out_dir) {
  const CliConfig cli = load_config(config_path, seed, iterations, out_dir);
  fs::create_directories(cli.output_dir);

  const auto started = std::chrono::steady_clock::now();
  json summary;
  summary["config"] = config_to_json(cli.run);
  summary["config_hash"] = cli.hash;
  summary["seed"] = cli.run.seed;

  int exit_code = 0;
  if (cli.run.constraint_mode == ConstraintMode::kMerge) {
    const MergedRun out = run_merged(cli.run);
    std::vector<const RunTrace*> traces;
    for (std::size_t k = 0; k < out.traces.size(); ++k) {
      const RunTrace& sub = out.traces[k];
      // Each sub-run gets a complete run directory, reusable by the
      // `compliance` and `merge` subcommands.
      const fs::path sub_dir = cli.output_dir / ("merge_" + std::to_string(k));
      fs::create_directories(sub_dir);
      write_trace_csv(sub_dir / "trace.csv", cli.hash, sub.config.seed, {&sub});
      write_json(sub_dir / "pareto.json", pareto_json_single(sub, cli.hash));
      write_json(sub_dir / "summary.json", run_summary(sub, cli.hash));
      traces.push_back(&sub);
      if (sub.aborted) exit_code = 1;
    }
    write_trace_csv(cli.output_dir / "trace.csv", cli.hash, cli.run.seed, traces);
    write_json(cli.output_dir / "pareto.json",
               pareto_json_merged(out.merged, out.traces.front().objective.directions,
                                  out.traces.front().archive.reference, cli.hash, cli.run.seed));

    summary["merged"] = true;
    summary["aborted"] = exit_code != 0;
    summary["pareto_size"] = out.merged.points.size();
    json compliances = json::array();
    for (const auto& sub : out.traces) {
      const bool analytic = static_cast<bool>(sub.objective.analytic_gradient);
      const ComplianceResult result =
          compliance(sub, analytic ? GradientSource::kAnalytic : GradientSource::kGp);
      compliances.push_back(compliance_json(result, analytic ? "analytic" : "gp"));
    }
    summary["compliance_per_run"] = compliances;
    summary["final_hypervolume"] = out.traces.front().final_hypervolume;
  } else {
    const RunTrace trace = ::mobopc::run(cli.run);
    write_trace_csv(cli.output_dir / "trace.csv", cli.hash, cli.run.seed, {&trace});
    write_json(cli.output_dir / "pareto.json", pareto_json_single(trace, cli.hash));
    summary = run_summary(trace, cli.hash);
    if (trace.aborted) exit_code = 1;
  }
  summary["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  write_json(cli.output_dir / "summary.json", summary);

  std::cerr << "run finished: outputs in " << cli.output_dir.string() << "\n";
  return exit_code;
}

std::vector<int> parse_tuple(const std::string& text) {
  std::vector<int> indices;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    try {
      indices.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw InvalidDataError("--tuple: '" + item + "' is not an objective index");
    }
  }
  return indices;
}

int cmd_compliance(const std::string& run_dir, const std::string& gradients,
                   const std::vector<std::string>& tuple_overrides) {
  StoredRun stored = load_run_dir(run_dir);

  std::vector<ConeBasis> bases = stored.trace.bases;
  if (!tuple_overrides.empty()) {
    bases.clear();
    for (const auto& text : tuple_overrides) {
      bases.push_back(
          build_basis(PreferenceTuple(parse_tuple(text), stored.trace.objective.num_objectives)));
    }
  }
  if (bases.empty()) {
    throw InvalidDataError(
        "compliance: the stored run has no preference tuples (use --tuple to supply one)");
  }

  GradientSource source;
  if (gradients == "analytic") {
    source = GradientSource::kAnalytic;
  } else if (gradients == "gp") {
    source = GradientSource::kGp;
    refit_models(stored.trace);
  } else {
    throw InvalidDataError("compliance: --gradients must be analytic or gp");
  }
  const ComplianceResult result = compliance_against(stored.trace, bases, source);
  std::cout << compliance_json(result, gradients).dump(2) << "\n";
  return 0;
}

int cmd_hv(const std::string& points_path, const std::optional<std::vector<double>>& z_override) {
  std::ifstream file(points_path);
  if (!file) throw InvalidDataError("cannot open '" + points_path + "'");
  json doc;
  try {
    doc = json::parse(file);
  } catch (const json::exception& e) {
    throw ParseError("points parse error: " + std::string(e.what()));
  }

  const auto directions = doc.at("directions");
  Eigen::VectorXd signs(static_cast<Eigen::Index>(directions.size()));
  for (std::size_t i = 0; i < directions.size(); ++i) {
    signs[static_cast<Eigen::Index>(i)] =
        direction_from(directions[i].get<std::string>(), "points.directions") ==
                Direction::kMaximize
            ? 1.0
            : -1.0;
  }

  Eigen::VectorXd reference;
  if (z_override.has_value()) {
    reference = signs.cwiseProduct(
        Eigen::Map<const Eigen::VectorXd>(z_override->data(),
                                          static_cast<Eigen::Index>(z_override->size())));
  } else {
    reference = json_to_vector(doc.at("reference_internal"));
  }

  std::vector<Eigen::VectorXd> points;
  for (const auto& entry : doc.at("points")) {
    points.push_back(signs.cwiseProduct(json_to_vector(entry.at("y"))));
  }
  const double volume = hypervolume(points, reference);
  std::cout << json{{"hypervolume", volume}, {"points", points.size()}}.dump(2) << "\n";
  return 0;
}

int cmd_merge(const std::vector<std::string>& run_dirs, const std::string& out_dir) {
  if (run_dirs.size() < 2) throw InvalidDataError("merge: need at least two run directories");
  std::vector<StoredRun> stored;
  for (const auto& dir : run_dirs) stored.push_back(load_run_dir(dir));

  std::vector<RunTrace> traces;
  for (auto& s : stored) traces.push_back(std::move(s.trace));
  const MergedResult merged = merge_runs(std::span<const RunTrace>(traces));

  // Reference for reporting: same default as the runs, over the union.
  const int m = traces.front().objective.num_objectives;
  Eigen::VectorXd reference(m);
  for (int i = 0; i < m; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& trace : traces) {
      for (const auto& point : trace.archive.points) {
        lo = std::min(lo, point.y[i]);
        hi = std::max(hi, point.y[i]);
      }
    }
    double pad = 0.1 * (hi - lo);
    if (pad <= 0.0) pad = 1e-6 * std::max(1.0, std::abs(lo));
    reference[i] = lo - pad;
  }

  std::string hash_input;
  for (const auto& s : stored) hash_input += s.hash + ";";
  const std::string hash = fnv1a_hex(hash_input);

  fs::create_directories(out_dir);
  write_json(fs::path(out_dir) / "pareto.json",
             pareto_json_merged(merged, traces.front().objective.directions, reference, hash,
                                traces.front().config.seed));
  std::cerr << "merged " << run_dirs.size() << " runs: " << merged.points.size()
            << " Pareto points\n";
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Preference-constrained multi-objective Bayesian optimisation"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Execute an optimisation run from a config file");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> iterations;
  std::optional<std::string> out_dir;
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--iterations", iterations, "Override the iteration count");
  run_cmd->add_option("--out", out_dir, "Override the output directory");

  auto* compliance_cmd =
      app.add_subcommand("compliance", "Recompute constraint compliance from a stored run");
  std::string run_dir;
  std::string gradients = "analytic";
  std::vector<std::string> tuple_overrides;
  compliance_cmd->add_option("--run-dir", run_dir, "Directory written by `mobopc run`")
      ->required();
  compliance_cmd->add_option("--gradients", gradients, "analytic or gp");
  compliance_cmd->add_option("--tuple", tuple_overrides,
                             "Score against this comma-separated preference tuple instead of "
                             "the stored ones (repeatable)");

  auto* hv_cmd = app.add_subcommand("hv", "Hypervolume of a stored Pareto front");
  std::string points_path;
  std::optional<std::vector<double>> z_values;
  hv_cmd->add_option("--points", points_path, "pareto.json file")->required();
  hv_cmd->add_option("--z", z_values, "Reference point in user scale (overrides the stored one)");

  auto* merge_cmd = app.add_subcommand("merge", "Merge the Pareto fronts of several runs");
  std::vector<std::string> merge_dirs;
  std::string merge_out = "merged";
  merge_cmd->add_option("dirs", merge_dirs, "Run directories")->required();
  merge_cmd->add_option("--out", merge_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(config_path, seed, iterations, out_dir);
    if (*compliance_cmd) return cmd_compliance(run_dir, gradients, tuple_overrides);
    if (*hv_cmd) return cmd_hv(points_path, z_values);
    if (*merge_cmd) return cmd_merge(merge_dirs, merge_out);
  } catch (const InvalidDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace mobopc::cli
