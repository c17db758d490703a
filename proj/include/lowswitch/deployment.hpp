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
#include <string>
#include <vector>

#include "lowswitch/policy.hpp"

namespace lowswitch {

// A run of consecutive episodes played with one deterministic policy.
struct DeploymentBlock {
  DeterministicPolicy policy;
  std::int64_t episodes = 0;
  // Episodes whose observations had been consumed when this policy was
  // fixed. Blocks sharing this value form one batch.
  std::int64_t committed_after = 0;
  std::string label;
};

// Ordered record of every policy deployment of a run (the switch log).
class DeploymentLog {
 public:
  void append(DeploymentBlock block);
  void extend(const DeploymentLog& other);

  const std::vector<DeploymentBlock>& blocks() const { return blocks_; }
  std::int64_t total_episodes() const { return total_episodes_; }

  // #{k >= 2 : pi_k != pi_{k-1}} over the episode sequence, comparing full
  // (h,s) -> a tables.
  std::int64_t switching_cost() const;
  // Number of maximal runs of episodes whose policies were committed against
  // the same amount of observed data.
  std::int64_t batch_count() const;

  // Policy played in episode `k` (0-based).
  const DeterministicPolicy& policy_at(std::int64_t episode) const;

 private:
  std::vector<DeploymentBlock> blocks_;
  std::int64_t total_episodes_ = 0;
};

}  // namespace lowswitch
