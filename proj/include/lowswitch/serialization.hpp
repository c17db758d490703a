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

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lowswitch/absorbing.hpp"
#include "lowswitch/elimination.hpp"
#include "lowswitch/instances.hpp"
#include "lowswitch/kernel.hpp"
#include "lowswitch/simulation.hpp"

namespace lowswitch {

using Json = nlohmann::json;

// {H, S, A, s_init, P: [h][s][a][s'], r: [h][s][a]}. Doubles round-trip
// exactly.
Json mdp_to_json(const TabularMDP& mdp);
TabularMDP mdp_from_json(const Json& json);

// MDP kernel schema plus the s+ column: P is [h][s][a][s'] over original s
// with S+1 entries per row. The s+ row is implied (self-loop).
Json kernel_to_json(const AbsorbingKernel& kernel);
AbsorbingKernel kernel_from_json(const Json& json);

// {H, S, A, threshold, tuples: [[h, s, a, s'], ...]}.
Json infrequent_to_json(const InfrequentSet& set);
InfrequentSet infrequent_from_json(const Json& json);

Json trajectory_to_json(const Trajectory& trajectory);
Trajectory trajectory_from_json(const Json& json);
// One trajectory per line.
void write_dataset_jsonl(std::ostream& out, const std::vector<Trajectory>& data);
std::vector<Trajectory> read_dataset_jsonl(std::istream& in);

// {tree_depth, absorbing_state, arms: [{h, s, a, mean}, ...]}.
Json arm_map_to_json(const HardInstance& instance);

// {k, T_k, phi_k, gap_k, switch_cost_so_far, batches_so_far, regret_so_far}.
Json stage_record_to_json(const StageRecord& record);
void write_stage_log_jsonl(std::ostream& out, const std::vector<StageRecord>& records);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& json);

}  // namespace lowswitch
