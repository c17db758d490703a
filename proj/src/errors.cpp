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

#include "lowswitch/errors.hpp"

#include <string>
#include <utility>

namespace lowswitch {
namespace {

std::string cap_message(std::uint64_t count, bool exact, std::uint64_t cap) {
  std::string n = exact ? std::to_string(count) : "more than " + std::to_string(count);
  return "explicit policy enumeration refused: A^(S*H) = " + n + " exceeds cap " +
         std::to_string(cap);
}

}  // namespace

CapExceededError::CapExceededError(std::uint64_t count, bool exact, std::uint64_t cap)
    : std::length_error(cap_message(count, exact, cap)), count_(count), exact_(exact), cap_(cap) {}

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

}  // namespace lowswitch
