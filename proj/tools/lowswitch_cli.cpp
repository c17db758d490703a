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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lowswitch/config.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/experiment.hpp"
#include "lowswitch/serialization.hpp"
#include "lowswitch/verify.hpp"

namespace {

using namespace lowswitch;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitCap = 3;

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out;  // run directory name under the run root
};

RunConfig resolve(const CommonArgs& args) {
  RunConfig config = args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
  for (const auto& o : args.overrides) apply_override(config, o);
  validate_config(config);
  return config;
}

std::filesystem::path output_dir(const CommonArgs& args, const std::string& fallback) {
  return make_run_dir(args.out.empty() ? fallback : args.out);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--set", args.overrides, "override, key=value (repeatable)");
  cmd->add_option("--out", args.out, "run directory name under $LOWSWITCH_RUN_ROOT");
}

int cmd_apeve(const CommonArgs& args, bool plus) {
  const RunConfig config = resolve(args);
  const std::string algorithm = plus ? "apeve-plus" : "apeve";
  const auto dir = output_dir(args, run_name(algorithm, config));
  const ApeveExperiment result = run_apeve_experiment(config, plus, dir);
  std::cout << kMetricsHeader << '\n' << metrics_csv_row(result.row) << '\n';
  std::cout << "optimal policy survived: " << (result.metrics.optimal_survived ? "yes" : "no")
            << '\n'
            << "run directory: " << dir.string() << '\n';
  return kExitOk;
}

int cmd_reward_free(const CommonArgs& args, int queries) {
  const RunConfig config = resolve(args);
  const auto dir = output_dir(args, run_name("reward-free", config));
  const RewardFreeExperiment result = run_reward_free_experiment(config, queries, dir);
  int within = 0;
  for (double g : result.suboptimality) within += g <= config.epsilon ? 1 : 0;
  const auto& budgets = result.result.model.budgets;
  std::cout << "N0=" << budgets.exploration << " N=" << budgets.evaluation
            << " switch_cost=" << result.result.log.switching_cost() << '\n'
            << "queries within epsilon: " << within << "/" << result.suboptimality.size() << '\n'
            << "run directory: " << dir.string() << '\n';
  return kExitOk;
}

int cmd_gen_instance(const CommonArgs& args, const std::string& kind) {
  RunConfig config = resolve(args);
  config.instance = kind;
  const Instance instance = build_instance(config);
  const auto dir = output_dir(args, "instance-" + kind + "-H" + std::to_string(config.H) + "S" +
                                        std::to_string(config.S) + "A" + std::to_string(config.A) +
                                        "-seed" + std::to_string(config.instance_seed));
  write_json_file(dir / "mdp.json", mdp_to_json(instance.mdp));
  if (instance.hard) {
    write_json_file(dir / "arm_map.json", arm_map_to_json(*instance.hard));
    std::cout << "arms: " << instance.hard->arms.size()
              << " tree depth: " << instance.hard->tree_depth << '\n';
  }
  std::cout << "wrote " << (dir / "mdp.json").string() << '\n';
  return kExitOk;
}

int cmd_verify(std::uint64_t seed) {
  SuiteOptions options;
  options.seed = seed;
  bool ok = true;
  for (const auto& r : run_invariant_suite(options)) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  return ok ? kExitOk : kExitInvariant;
}

int cmd_sweep(const CommonArgs& args, const std::string& algorithm) {
  const RunConfig config = resolve(args);
  if (algorithm != "apeve" && algorithm != "apeve-plus") {
    throw ConfigError("algorithm", "expected apeve or apeve-plus");
  }
  const bool plus = algorithm == "apeve-plus";
  const auto dir = output_dir(args, "sweep-" + algorithm);
  const auto rows = run_sweep(config, plus, dir);
  write_metrics_csv(dir / "metrics.csv", rows);
  write_metrics_csv(std::cout, rows);
  std::cout << "run directory: " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lowswitch: low-switching tabular RL experiments"};
  app.require_subcommand(1);

  CommonArgs apeve_args, plus_args, rf_args, gen_args, sweep_args;
  int queries = 10;
  std::string kind = "random";
  std::string algorithm = "apeve";
  std::uint64_t verify_seed = 2024;

  auto* apeve = app.add_subcommand("apeve", "run APEVE");
  add_common(apeve, apeve_args);
  auto* plus = app.add_subcommand("apeve-plus", "run APEVE+");
  add_common(plus, plus_args);
  auto* rf = app.add_subcommand("reward-free", "reward-free exploration and reward queries");
  add_common(rf, rf_args);
  rf->add_option("--queries", queries, "random reward queries to answer");
  auto* gen = app.add_subcommand("gen-instance", "write an instance as JSON");
  add_common(gen, gen_args);
  gen->add_option("kind", kind, "random or hard")->check(CLI::IsMember({"random", "hard"}));
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("--seed", verify_seed, "suite seed");
  auto* sweep = app.add_subcommand("sweep", "grid over sweep_K and seeds, in parallel");
  add_common(sweep, sweep_args);
  sweep->add_option("--algorithm", algorithm, "apeve or apeve-plus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*apeve) return cmd_apeve(apeve_args, false);
    if (*plus) return cmd_apeve(plus_args, true);
    if (*rf) return cmd_reward_free(rf_args, queries);
    if (*gen) return cmd_gen_instance(gen_args, kind);
    if (*verify) return cmd_verify(verify_seed);
    if (*sweep) return cmd_sweep(sweep_args, algorithm);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const CapExceededError& e) {
    std::cerr << "error: " << e.what() << " (set relaxed=true to run with predicate survivors)\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
