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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lowswitch/elimination.hpp"

namespace lowswitch {

// Flat key=value run configuration. Lines starting with '#' are comments.
//
// Keys: H S A K delta C mode seed cap c1 epsilon C_rf sparsity, plus
// instance (random|hard), instance_seed, mdp (path to an MDP JSON that
// replaces the generated instance), relaxed, sweep_K (comma list),
// sweep_seeds and workers.
struct RunConfig {
  int H = 2;
  int S = 2;
  int A = 2;
  std::int64_t K = 16384;
  double delta = 0.1;
  std::optional<double> C;
  ThresholdMode mode = ThresholdMode::kCalibrated;
  std::uint64_t seed = 0;
  std::uint64_t cap = 1'000'000;
  double c1 = kDefaultC1;
  double epsilon = 0.1;
  double C_rf = 1.0;
  double sparsity = 1.0;

  std::string instance = "random";
  std::uint64_t instance_seed = 1;
  std::string mdp;
  bool relaxed = false;

  std::vector<std::int64_t> sweep_K;
  int sweep_seeds = 4;
  int workers = 0;  // 0: hardware concurrency
};

// Sets one key from its text value. Throws ConfigError naming the key on an
// unknown key or an unparsable value.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

// Applies "key=value".
void apply_override(RunConfig& config, const std::string& assignment);

RunConfig parse_config_text(const std::string& text);
// Throws ConfigError (field "config") if the file cannot be read.
RunConfig load_config(const std::filesystem::path& path);

// Range checks; throws ConfigError with the offending field.
void validate_config(const RunConfig& config);

// Canonical text form, every key in a fixed order. parse_config_text of the
// result gives back an equal configuration.
std::string config_to_text(const RunConfig& config);

ApeveConfig to_apeve_config(const RunConfig& config);

}  // namespace lowswitch
