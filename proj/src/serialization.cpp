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

#include "lowswitch/serialization.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "lowswitch/errors.hpp"

namespace lowswitch {

namespace {

struct Shape {
  int horizon;
  int num_states;
  int num_actions;
};

Shape read_shape(const Json& json) {
  Shape shape{json.at("H").get<int>(), json.at("S").get<int>(), json.at("A").get<int>()};
  if (shape.horizon <= 0 || shape.num_states <= 0 || shape.num_actions <= 0) {
    throw DimensionError("H, S and A must be positive");
  }
  return shape;
}

// Wraps nlohmann type/shape errors so callers see one error type.
template <typename F>
auto guarded(const char* what, F&& body) {
  try {
    return body();
  } catch (const Json::exception& e) {
    throw DimensionError(std::string(what) + ": " + e.what());
  }
}

Json kernel_rows(const LayeredKernel& kernel) {
  Json p = Json::array();
  for (int h = 0; h < kernel.horizon(); ++h) {
    Json layer = Json::array();
    for (int s = 0; s < kernel.num_states(); ++s) {
      Json state = Json::array();
      for (int a = 0; a < kernel.num_actions(); ++a) {
        auto row = kernel.row(h, s, a);
        state.push_back(std::vector<double>(row.begin(), row.end()));
      }
      layer.push_back(std::move(state));
    }
    p.push_back(std::move(layer));
  }
  return p;
}

void fill_rows(const Json& p, LayeredKernel& kernel) {
  const auto H = static_cast<std::size_t>(kernel.horizon());
  const auto S = static_cast<std::size_t>(kernel.num_states());
  const auto A = static_cast<std::size_t>(kernel.num_actions());
  const auto W = static_cast<std::size_t>(kernel.width());
  if (p.size() != H) throw DimensionError("P has the wrong number of layers");
  for (std::size_t h = 0; h < H; ++h) {
    if (p[h].size() != S) throw DimensionError("P layer has the wrong number of states");
    for (std::size_t s = 0; s < S; ++s) {
      if (p[h][s].size() != A) throw DimensionError("P state has the wrong number of actions");
      for (std::size_t a = 0; a < A; ++a) {
        const auto row = p[h][s][a].get<std::vector<double>>();
        if (row.size() != W) throw DimensionError("P row has the wrong width");
        for (std::size_t n = 0; n < W; ++n) {
          kernel.set_prob(static_cast<int>(h), static_cast<int>(s), static_cast<int>(a),
                          static_cast<int>(n), row[n]);
        }
      }
    }
  }
}

KernelKind kind_from_string(const std::string& name) {
  if (name == to_string(KernelKind::kTrueTransform)) return KernelKind::kTrueTransform;
  if (name == to_string(KernelKind::kExplorationEstimate)) return KernelKind::kExplorationEstimate;
  if (name == to_string(KernelKind::kEvaluationEstimate)) return KernelKind::kEvaluationEstimate;
  throw DimensionError("unknown kernel kind '" + name + "'");
}

}  // namespace

Json mdp_to_json(const TabularMDP& mdp) {
  Json r = Json::array();
  for (int h = 0; h < mdp.horizon(); ++h) {
    Json layer = Json::array();
    for (int s = 0; s < mdp.num_states(); ++s) {
      Json state = Json::array();
      for (int a = 0; a < mdp.num_actions(); ++a) state.push_back(mdp.reward()(h, s, a));
      layer.push_back(std::move(state));
    }
    r.push_back(std::move(layer));
  }
  return Json{{"H", mdp.horizon()},
              {"S", mdp.num_states()},
              {"A", mdp.num_actions()},
              {"s_init", mdp.initial_state()},
              {"P", kernel_rows(mdp.kernel())},
              {"r", std::move(r)}};
}

TabularMDP mdp_from_json(const Json& json) {
  return guarded("mdp", [&] {
    const Shape shape = read_shape(json);
    const int s_init = json.value("s_init", 0);
    LayeredKernel kernel(shape.horizon, shape.num_states, shape.num_actions, s_init, false);
    fill_rows(json.at("P"), kernel);
    RewardTable reward(shape.horizon, shape.num_states, shape.num_actions);
    const Json& r = json.at("r");
    if (r.size() != static_cast<std::size_t>(shape.horizon)) {
      throw DimensionError("r has the wrong number of layers");
    }
    for (int h = 0; h < shape.horizon; ++h) {
      if (r[h].size() != static_cast<std::size_t>(shape.num_states)) {
        throw DimensionError("r layer has the wrong number of states");
      }
      for (int s = 0; s < shape.num_states; ++s) {
        const auto values = r[h][s].get<std::vector<double>>();
        if (values.size() != static_cast<std::size_t>(shape.num_actions)) {
          throw DimensionError("r state has the wrong number of actions");
        }
        for (int a = 0; a < shape.num_actions; ++a) reward(h, s, a) = values[static_cast<std::size_t>(a)];
      }
    }
    return TabularMDP(std::move(kernel), std::move(reward));
  });
}

Json kernel_to_json(const AbsorbingKernel& kernel) {
  return Json{{"H", kernel.horizon()},
              {"S", kernel.num_states()},
              {"A", kernel.num_actions()},
              {"s_init", kernel.initial_state()},
              {"kind", to_string(kernel.kind())},
              {"P", kernel_rows(kernel)}};
}

AbsorbingKernel kernel_from_json(const Json& json) {
  return guarded("kernel", [&] {
    const Shape shape = read_shape(json);
    AbsorbingKernel kernel(shape.horizon, shape.num_states, shape.num_actions,
                           json.value("s_init", 0),
                           kind_from_string(json.value("kind", std::string("evaluation_estimate"))));
    fill_rows(json.at("P"), kernel);
    kernel.validate();
    return kernel;
  });
}

Json infrequent_to_json(const InfrequentSet& set) {
  Json tuples = Json::array();
  for (const auto& t : set.tuples()) tuples.push_back({t[0], t[1], t[2], t[3]});
  return Json{{"H", set.horizon()},
              {"S", set.num_states()},
              {"A", set.num_actions()},
              {"threshold", set.threshold()},
              {"tuples", std::move(tuples)}};
}

InfrequentSet infrequent_from_json(const Json& json) {
  return guarded("infrequent set", [&] {
    const Shape shape = read_shape(json);
    InfrequentSet set(shape.horizon, shape.num_states, shape.num_actions,
                      json.at("threshold").get<double>());
    for (const auto& t : json.at("tuples")) {
      const auto q = t.get<std::vector<int>>();
      if (q.size() != 4 || q[0] < 0 || q[0] >= shape.horizon || q[1] < 0 ||
          q[1] >= shape.num_states || q[2] < 0 || q[2] >= shape.num_actions || q[3] < 0 ||
          q[3] >= shape.num_states) {
        throw DimensionError("infrequent tuple out of range");
      }
      set.insert(q[0], q[1], q[2], q[3]);
    }
    return set;
  });
}

Json trajectory_to_json(const Trajectory& trajectory) {
  return Json{{"episode", trajectory.episode},
              {"block", trajectory.block},
              {"states", trajectory.states},
              {"actions", trajectory.actions}};
}

Trajectory trajectory_from_json(const Json& json) {
  return guarded("trajectory", [&] {
    Trajectory t;
    t.episode = json.at("episode").get<std::int64_t>();
    t.block = json.at("block").get<std::int64_t>();
    t.states = json.at("states").get<std::vector<int>>();
    t.actions = json.at("actions").get<std::vector<int>>();
    if (t.states.size() != t.actions.size() + 1) {
      throw DimensionError("trajectory needs H+1 states for H actions");
    }
    return t;
  });
}

void write_dataset_jsonl(std::ostream& out, const std::vector<Trajectory>& data) {
  for (const auto& t : data) out << trajectory_to_json(t).dump() << '\n';
}

std::vector<Trajectory> read_dataset_jsonl(std::istream& in) {
  std::vector<Trajectory> data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    data.push_back(guarded("dataset line", [&] { return trajectory_from_json(Json::parse(line)); }));
  }
  return data;
}

Json arm_map_to_json(const HardInstance& instance) {
  Json arms = Json::array();
  for (const auto& arm : instance.arms) {
    arms.push_back({{"h", arm.layer}, {"s", arm.state}, {"a", arm.action}, {"mean", arm.mean}});
  }
  return Json{{"tree_depth", instance.tree_depth},
              {"absorbing_state", instance.absorbing_state},
              {"stay_action", instance.stay_action},
              {"arms", std::move(arms)}};
}

Json stage_record_to_json(const StageRecord& record) {
  Json json{{"k", record.k},
            {"T_k", record.nominal},
            {"explore_episodes", record.explore_episodes},
            {"evaluate_episodes", record.evaluate_episodes},
            {"explored", record.explored},
            {"gap_k", record.gap},
            {"empirical_sup", record.empirical_sup},
            {"episodes_so_far", record.episodes_so_far},
            {"switch_cost_so_far", record.switch_cost_so_far},
            {"batches_so_far", record.batches_so_far}};
  json["phi_k"] = record.phi_size >= 0 ? Json(record.phi_size) : Json(nullptr);
  json["survivors"] = record.survivors >= 0 ? Json(record.survivors) : Json(nullptr);
  json["regret_so_far"] = record.regret_so_far ? Json(*record.regret_so_far) : Json(nullptr);
  return json;
}

void write_stage_log_jsonl(std::ostream& out, const std::vector<StageRecord>& records) {
  for (const auto& r : records) out << stage_record_to_json(r).dump() << '\n';
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelNotFoundError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw DimensionError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& json) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << json.dump(1) << '\n';
}

}  // namespace lowswitch
