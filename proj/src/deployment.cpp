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

#include "lowswitch/deployment.hpp"

#include <stdexcept>
#include <utility>

namespace lowswitch {

void DeploymentLog::append(DeploymentBlock block) {
  if (block.episodes < 0) throw std::invalid_argument("negative block length");
  total_episodes_ += block.episodes;
  blocks_.push_back(std::move(block));
}

void DeploymentLog::extend(const DeploymentLog& other) {
  for (const auto& b : other.blocks_) append(b);
}

std::int64_t DeploymentLog::switching_cost() const {
  std::int64_t switches = 0;
  const DeterministicPolicy* previous = nullptr;
  for (const auto& b : blocks_) {
    if (b.episodes == 0) continue;
    if (previous != nullptr && !(b.policy == *previous)) ++switches;
    previous = &b.policy;
  }
  return switches;
}

std::int64_t DeploymentLog::batch_count() const {
  std::int64_t batches = 0;
  bool started = false;
  std::int64_t current = 0;
  for (const auto& b : blocks_) {
    if (b.episodes == 0) continue;
    if (!started || b.committed_after != current) {
      ++batches;
      current = b.committed_after;
      started = true;
    }
  }
  return batches;
}

const DeterministicPolicy& DeploymentLog::policy_at(std::int64_t episode) const {
  std::int64_t seen = 0;
  for (const auto& b : blocks_) {
    seen += b.episodes;
    if (episode < seen) return b.policy;
  }
  throw std::out_of_range("episode index beyond the log");
}

}  // namespace lowswitch
