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
#include <stdexcept>
#include <string>

namespace lowswitch {

// Shapes of kernels, rewards, or policies do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numeric argument is outside the domain of the function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An episode budget is too small for the requested procedure.
class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Explicit policy enumeration would exceed the configured cap.
class CapExceededError : public std::length_error {
 public:
  // `count` saturates at UINT64_MAX; `exact` is false in that case.
  CapExceededError(std::uint64_t count, bool exact, std::uint64_t cap);

  std::uint64_t count() const { return count_; }
  bool exact() const { return exact_; }
  std::uint64_t cap() const { return cap_; }

 private:
  std::uint64_t count_;
  bool exact_;
  std::uint64_t cap_;
};

// Instance-generator preconditions (e.g. S <= A^(H/2) for the hard family).
class ConditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bad configuration value. `field()` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ModelNotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lowswitch
