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

// End-to-end tests that drive the installed binary the way a user would.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* cli_path() { return MOBOPC_CLI_PATH; }

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

struct TempDir {
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("mobopc_cli_test_" + std::to_string(::getpid()) + "_" +
                                        std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

std::string slurp(const fs::path& file) {
  std::ifstream in(file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& file, const std::string& contents) {
  std::ofstream out(file);
  out << contents;
}

json read_json(const fs::path& file) { return json::parse(slurp(file)); }

std::string schaffer_config(int iterations, bool constrained, const std::string& out_dir) {
  json doc;
  doc["objective"] = "schaffer_n1";
  if (constrained) doc["preference_tuples"] = json::array({json::array({0, 1})});
  doc["iterations"] = iterations;
  doc["initial_design"] = 4;
  doc["seed"] = 11;
  doc["mc_rounds"] = 64;
  doc["prob_rounds"] = 128;
  doc["search"] = {{"screen_count", 20}, {"local_restarts", 2}, {"refine_evals", 6}};
  doc["output_dir"] = out_dir;
  return doc.dump(2);
}

int count_data_rows(const fs::path& csv) {
  std::ifstream in(csv);
  std::string line;
  int rows = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

}  // namespace

TEST_CASE("run writes the three output files with the right shape") {
  TempDir dir;
  write_file(dir.path / "config.json", schaffer_config(3, true, "out"));
  const int rc = run_command(std::string(cli_path()) + " run --config " +
                             (dir.path / "config.json").string() + " 2>/dev/null");
  CHECK(rc == 0);

  const fs::path out = dir.path / "out";
  REQUIRE(fs::exists(out / "trace.csv"));
  REQUIRE(fs::exists(out / "pareto.json"));
  REQUIRE(fs::exists(out / "summary.json"));

  CHECK(count_data_rows(out / "trace.csv") == 4 + 3);

  // Provenance: hash and seed on every artifact.
  const std::string first_line = slurp(out / "trace.csv").substr(0, 200);
  CHECK(first_line.find("config_hash=") != std::string::npos);
  CHECK(first_line.find("seed=11") != std::string::npos);

  const json summary = read_json(out / "summary.json");
  const json pareto = read_json(out / "pareto.json");
  CHECK(summary.at("config_hash") == pareto.at("config_hash"));
  CHECK(summary.at("seed") == 11);
  CHECK(pareto.at("seed") == 11);
  CHECK(summary.at("records") == 7);
  CHECK_FALSE(summary.at("aborted").get<bool>());
  CHECK(summary.at("compliance").at("value").get<double>() >= 0.0);
  CHECK_FALSE(pareto.at("points").empty());
  for (const auto& point : pareto.at("points")) {
    CHECK(point.at("prob").is_number());
  }
}

TEST_CASE("identical config and seed give byte-identical pareto.json") {
  TempDir dir;
  write_file(dir.path / "config.json", schaffer_config(3, true, "out_a"));
  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "config.json").string() + " 2>/dev/null") == 0);
  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "config.json").string() + " --out out_b 2>/dev/null") == 0);
  const std::string a = slurp(dir.path / "out_a" / "pareto.json");
  const std::string b = slurp(dir.path / "out_b" / "pareto.json");
  CHECK(a == b);
  CHECK_FALSE(a.empty());
}

TEST_CASE("hv reproduces the summary hypervolume from pareto.json") {
  TempDir dir;
  write_file(dir.path / "config.json", schaffer_config(4, true, "out"));
  REQUIRE(run_command(std::string(cli_path()) + " run --config " +
                      (dir.path / "config.json").string() + " 2>/dev/null") == 0);
  const int rc = run_command(std::string(cli_path()) + " hv --points " +
                             (dir.path / "out" / "pareto.json").string() + " > " +
                             (dir.path / "hv.json").string() + " 2>/dev/null");
  CHECK(rc == 0);
  const double recomputed = read_json(dir.path / "hv.json").at("hypervolume").get<double>();
  const double stored =
      read_json(dir.path / "out" / "summary.json").at("final_hypervolume").get<double>();
  CHECK(std::abs(recomputed - stored) <= 1e-9 * std::max(1.0, std::abs(stored)));
}

TEST_CASE("compliance recomputes from the stored trace") {
  TempDir dir;
  write_file(dir.path / "config.json", schaffer_config(3, true, "out"));
  REQUIRE(run_command(std::string(cli_path()) + " run --config " +
                      (dir.path / "config.json").string() + " 2>/dev/null") == 0);
  const int rc = run_command(std::string(cli_path()) + " compliance --run-dir " +
                             (dir.path / "out").string() + " --gradients analytic > " +
                             (dir.path / "c.json").string() + " 2>/dev/null");
  CHECK(rc == 0);
  const json recomputed = read_json(dir.path / "c.json");
  const json stored = read_json(dir.path / "out" / "summary.json").at("compliance");
  CHECK(recomputed.at("value") == stored.at("value"));
  CHECK(recomputed.at("total") == stored.at("total"));
}

TEST_CASE("a constrained run complies at least as well as a plain-EHI run") {
  TempDir dir;
  write_file(dir.path / "pc.json", schaffer_config(8, true, "out_pc"));
  write_file(dir.path / "ehi.json", schaffer_config(8, false, "out_ehi"));
  REQUIRE(run_command(std::string(cli_path()) + " run --config " +
                      (dir.path / "pc.json").string() + " 2>/dev/null") == 0);
  REQUIRE(run_command(std::string(cli_path()) + " run --config " +
                      (dir.path / "ehi.json").string() + " 2>/dev/null") == 0);

  // The EHI run stored no tuples; score it against the same preference.
  REQUIRE(run_command(std::string(cli_path()) + " compliance --run-dir " +
                      (dir.path / "out_ehi").string() + " --tuple 0,1 > " +
                      (dir.path / "ehi_c.json").string() + " 2>/dev/null") == 0);
  const double ehi_value = read_json(dir.path / "ehi_c.json").at("value").get<double>();
  const double pc_value = read_json(dir.path / "out_pc" / "summary.json")
                              .at("compliance")
                              .at("value")
                              .get<double>();
  CHECK(pc_value >= ehi_value - 1e-12);
  // The unconstrained summary carries no compliance entry.
  CHECK(read_json(dir.path / "out_ehi" / "summary.json").at("compliance").is_null());
}

TEST_CASE("merge combines stored runs") {
  TempDir dir;
  json config = json::parse(schaffer_config(3, true, "out_a"));
  write_file(dir.path / "a.json", config.dump());
  config["preference_tuples"] = json::array({json::array({1, 0})});
  config["output_dir"] = "out_b";
  config["seed"] = 12;
  write_file(dir.path / "b.json", config.dump());

  REQUIRE(run_command(std::string(cli_path()) + " run --config " + (dir.path / "a.json").string() +
                      " 2>/dev/null") == 0);
  REQUIRE(run_command(std::string(cli_path()) + " run --config " + (dir.path / "b.json").string() +
                      " 2>/dev/null") == 0);
  const int rc = run_command(std::string(cli_path()) + " merge " + (dir.path / "out_a").string() +
                             " " + (dir.path / "out_b").string() + " --out " +
                             (dir.path / "merged").string() + " 2>/dev/null");
  CHECK(rc == 0);
  const json merged = read_json(dir.path / "merged" / "pareto.json");
  CHECK(merged.at("merged").get<bool>());
  REQUIRE_FALSE(merged.at("points").empty());
  for (const auto& point : merged.at("points")) {
    CHECK(point.at("probs").size() == 2);
  }
}

TEST_CASE("merge constraint mode runs sub-optimisations and merges them") {
  TempDir dir;
  json config = json::parse(schaffer_config(4, true, "out"));
  config["preference_tuples"] = json::array({json::array({0, 1}), json::array({1, 0})});
  config["constraint_mode"] = "merge";
  write_file(dir.path / "config.json", config.dump());
  REQUIRE(run_command(std::string(cli_path()) + " run --config " +
                      (dir.path / "config.json").string() + " 2>/dev/null") == 0);
  const fs::path out = dir.path / "out";
  CHECK(fs::exists(out / "merge_0" / "trace.csv"));
  CHECK(fs::exists(out / "merge_1" / "trace.csv"));
  CHECK(fs::exists(out / "pareto.json"));
  const json pareto = read_json(out / "pareto.json");
  CHECK(pareto.at("merged").get<bool>());
  CHECK(pareto.at("prob_sources").size() == 2);

  // Each sub-run directory is itself a complete run directory.
  REQUIRE(fs::exists(out / "merge_0" / "summary.json"));
  const int rc2 = run_command(std::string(cli_path()) + " merge " +
                              (out / "merge_0").string() + " " + (out / "merge_1").string() +
                              " --out " + (dir.path / "remerged").string() + " 2>/dev/null");
  CHECK(rc2 == 0);
  CHECK_FALSE(read_json(dir.path / "remerged" / "pareto.json").at("points").empty());
}

TEST_CASE("invalid configs exit with code 2") {
  TempDir dir;

  write_file(dir.path / "unknown_key.json",
             R"({"objective": "schaffer_n1", "iterations": 2, "frobnicate": 1})");
  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "unknown_key.json").string() + " 2>/dev/null") == 2);

  write_file(dir.path / "bad_benchmark.json", R"({"objective": "nope", "iterations": 2})");
  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "bad_benchmark.json").string() + " 2>/dev/null") == 2);

  write_file(dir.path / "bad_tuple.json",
             R"({"objective": "schaffer_n1", "preference_tuples": [[0, 0]]})");
  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "bad_tuple.json").string() + " 2>/dev/null") == 2);

  write_file(dir.path / "not_json.json", "objective = schaffer\n");
  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "not_json.json").string() + " 2>/dev/null") == 2);

  CHECK(run_command(std::string(cli_path()) + " run --config /nonexistent.json 2>/dev/null") ==
        2);
}

TEST_CASE("exhausting the candidate pool aborts with flagged partial outputs") {
  TempDir dir;
  std::string csv = "a,f0,f1\n";
  for (int i = 0; i < 5; ++i) {
    csv += std::to_string(0.5 * i) + "," + std::to_string(1.0 + i) + "," +
           std::to_string(6.0 - i) + "\n";
  }
  write_file(dir.path / "tiny.csv", csv);

  json config;
  config["dataset"] = {{"path", "tiny.csv"},
                       {"input_columns", json::array({"a"})},
                       {"objective_columns", json::array({"f0", "f1"})}};
  config["iterations"] = 4;  // only 2 candidates remain after the design
  config["initial_design"] = 3;
  config["seed"] = 1;
  config["mc_rounds"] = 16;
  config["search"] = {{"screen_count", 4}, {"local_restarts", 1}, {"refine_evals", 2}};
  config["output_dir"] = "out";
  write_file(dir.path / "config.json", config.dump());

  const int rc = run_command(std::string(cli_path()) + " run --config " +
                             (dir.path / "config.json").string() + " 2>/dev/null");
  CHECK(rc == 1);
  const json summary = read_json(dir.path / "out" / "summary.json");
  CHECK(summary.at("aborted").get<bool>());
  CHECK_FALSE(summary.at("abort_reason").get<std::string>().empty());
  // The partial trace is still written.
  CHECK(count_data_rows(dir.path / "out" / "trace.csv") == 5);
}

TEST_CASE("dataset-driven runs use the candidate rows") {
  TempDir dir;
  // A small synthetic crash-style table.
  std::string csv = "tbumper,thood,HIC,Mass\n";
  for (int i = 0; i < 14; ++i) {
    const double a = 1.0 + 0.3 * i;
    const double b = 5.0 - 0.3 * i;
    csv += std::to_string(a) + "," + std::to_string(b) + "," +
           std::to_string(100.0 + 10.0 * a - 4.0 * b) + "," + std::to_string(20.0 + a + b) + "\n";
  }
  write_file(dir.path / "crash.csv", csv);

  json config;
  config["dataset"] = {{"path", "crash.csv"},
                       {"input_columns", json::array({"tbumper", "thood"})},
                       {"objective_columns", json::array({"HIC", "Mass"})}};
  config["preference_tuples"] = json::array({json::array({0, 1})});
  config["iterations"] = 3;
  config["initial_design"] = 4;
  config["seed"] = 3;
  config["mc_rounds"] = 32;
  config["prob_rounds"] = 64;
  config["output_dir"] = "out";
  write_file(dir.path / "config.json", config.dump());

  CHECK(run_command(std::string(cli_path()) + " run --config " +
                    (dir.path / "config.json").string() + " 2>/dev/null") == 0);
  const json summary = read_json(dir.path / "out" / "summary.json");
  CHECK(summary.at("records") == 7);
  // Tabular objectives have no analytic gradients; compliance came from the
  // fitted models.
  CHECK(summary.at("compliance").at("source") == "gp");
}
