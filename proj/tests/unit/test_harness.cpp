// Copyright 2026 The lowswitch Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "lowswitch/config.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/experiment.hpp"
#include "lowswitch/verify.hpp"

using namespace lowswitch;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string field_of(const std::function<void()>& body) {
  try {
    body();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

struct TempRoot {
  std::filesystem::path path;
  explicit TempRoot(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    setenv("LOWSWITCH_RUN_ROOT", path.c_str(), 1);
  }
  ~TempRoot() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing and overrides") {
  RunConfig c = parse_config_text("# comment\nH = 3\nS=2\nA=2\nK=4096\nmode=theory\nC=0.2\n\nsweep_K=16,32 , 64\n");
  CHECK(c.H == 3);
  CHECK(c.K == 4096);
  CHECK(c.mode == ThresholdMode::kTheory);
  CHECK(*c.C == 0.2);
  CHECK(c.sweep_K == std::vector<std::int64_t>{16, 32, 64});
  apply_override(c, "K=8192");
  CHECK(c.K == 8192);
  CHECK(parse_config_text(config_to_text(c)).K == 8192);
  CHECK(config_to_text(parse_config_text(config_to_text(c))) == config_to_text(c));

  CHECK(field_of([] { parse_config_text("H=two\n"); }) == "H");
  CHECK(field_of([] { parse_config_text("colour=blue\n"); }) == "colour");
  CHECK(field_of([] { parse_config_text("mode=fast\n"); }) == "mode");
  CHECK(field_of([] {
          RunConfig bad;
          bad.delta = 1.5;
          validate_config(bad);
        }) == "delta");
  CHECK(field_of([] {
          RunConfig bad;
          bad.epsilon = 3.0;
          validate_config(bad);
        }) == "epsilon");
  CHECK(field_of([] { load_config("/nonexistent/lowswitch.cfg"); }) == "config");
}

TEST_CASE("metrics CSV schema") {
  std::vector<MetricsRow> rows{{1024, 0, 12.5, 30, 9, 3, 16}, {2048, 1, 0.1 + 0.2, 31, 10, 3, 4}};
  std::stringstream out;
  write_metrics_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.rfind("K,seed,regret,switch_cost,batches,K0,survivors\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  std::stringstream in(text);
  CHECK(read_metrics_csv(in) == rows);
  std::stringstream bad("K,seed\n1,2\n");
  CHECK_THROWS_AS(read_metrics_csv(bad), ConfigError);
}

TEST_CASE("apeve run is reproducible byte for byte") {
  TempRoot root("lowswitch_harness_repro");
  RunConfig c;
  c.K = 1 << 14;
  c.seed = 7;
  run_apeve_experiment(c, false, make_run_dir("first"));
  run_apeve_experiment(c, false, make_run_dir("second"));
  const std::string a = slurp(root.path / "first" / "metrics.csv");
  CHECK(!a.empty());
  CHECK(a == slurp(root.path / "second" / "metrics.csv"));
  CHECK(slurp(root.path / "first" / "stages.jsonl") == slurp(root.path / "second" / "stages.jsonl"));
  CHECK(std::filesystem::exists(root.path / "first" / "config.txt"));
  CHECK(std::filesystem::exists(root.path / "first" / "mdp.json"));
}

TEST_CASE("sweep emits one row per (K, seed)") {
  TempRoot root("lowswitch_harness_sweep");
  RunConfig c;
  for (int e = 10; e <= 16; ++e) c.sweep_K.push_back(std::int64_t{1} << e);
  c.sweep_seeds = 2;
  c.seed = 3;
  const auto rows = run_sweep(c, false);
  REQUIRE(rows.size() == 14);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].K == (std::int64_t{1} << (10 + i / 2)));
    CHECK(rows[i].seed == 3 + i % 2);
  }
  // Parallel rows equal the sequential single runs.
  RunConfig single = c;
  single.K = 1 << 12;
  single.seed = 4;
  CHECK(run_apeve_experiment(single, false, std::nullopt).row == rows[5]);
}

TEST_CASE("reward-free experiment writes a stored model") {
  TempRoot root("lowswitch_harness_rf");
  RunConfig c;
  c.K = 20000;
  const auto dir = make_run_dir("rf");
  const auto result = run_reward_free_experiment(c, 3, dir);
  CHECK(result.suboptimality.size() == 3);
  for (const char* name : {"kernel.json", "exploration_kernel.json", "infrequent_set.json", "metadata.json"}) {
    CHECK(std::filesystem::exists(dir / "model" / name));
  }
}

TEST_CASE("invariant suite passes") {
  for (const auto& r : run_invariant_suite()) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
}
