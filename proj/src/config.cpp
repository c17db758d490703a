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

#include "lowswitch/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "lowswitch/errors.hpp"

namespace lowswitch {

namespace {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing characters");
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + value + "'");
}

std::string format_double(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", x);
  return buffer;
}

}  // namespace

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
  if (key == "H") {
    config.H = parse_integer<int>(key, value);
  } else if (key == "S") {
    config.S = parse_integer<int>(key, value);
  } else if (key == "A") {
    config.A = parse_integer<int>(key, value);
  } else if (key == "K") {
    config.K = parse_integer<std::int64_t>(key, value);
  } else if (key == "delta") {
    config.delta = parse_double(key, value);
  } else if (key == "C") {
    if (value.empty() || value == "default") {
      config.C.reset();
    } else {
      config.C = parse_double(key, value);
    }
  } else if (key == "mode") {
    if (value == "theory") {
      config.mode = ThresholdMode::kTheory;
    } else if (value == "calibrated") {
      config.mode = ThresholdMode::kCalibrated;
    } else {
      throw ConfigError(key, "expected theory or calibrated, got '" + value + "'");
    }
  } else if (key == "seed") {
    config.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "cap") {
    config.cap = parse_integer<std::uint64_t>(key, value);
  } else if (key == "c1") {
    config.c1 = parse_double(key, value);
  } else if (key == "epsilon") {
    config.epsilon = parse_double(key, value);
  } else if (key == "C_rf") {
    config.C_rf = parse_double(key, value);
  } else if (key == "sparsity") {
    config.sparsity = parse_double(key, value);
  } else if (key == "instance") {
    if (value != "random" && value != "hard") {
      throw ConfigError(key, "expected random or hard, got '" + value + "'");
    }
    config.instance = value;
  } else if (key == "instance_seed") {
    config.instance_seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "mdp") {
    config.mdp = value;
  } else if (key == "relaxed") {
    config.relaxed = parse_bool(key, value);
  } else if (key == "sweep_K") {
    config.sweep_K.clear();
    std::stringstream list(value);
    std::string item;
    while (std::getline(list, item, ',')) {
      item = trim(item);
      if (!item.empty()) config.sweep_K.push_back(parse_integer<std::int64_t>(key, item));
    }
  } else if (key == "sweep_seeds") {
    config.sweep_seeds = parse_integer<int>(key, value);
  } else if (key == "workers") {
    config.workers = parse_integer<int>(key, value);
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

void apply_override(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError(trim(assignment), "override must have the form key=value");
  }
  set_config_value(config, trim(std::string_view(assignment).substr(0, eq)),
                   trim(std::string_view(assignment).substr(eq + 1)));
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  std::stringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (body.find('=') == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key=value");
    }
    apply_override(config, body);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate_config(const RunConfig& c) {
  if (c.H < 1) throw ConfigError("H", "must be >= 1");
  if (c.S < 1) throw ConfigError("S", "must be >= 1");
  if (c.A < 1) throw ConfigError("A", "must be >= 1");
  if (c.K < 4) throw ConfigError("K", "must be >= 4");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw ConfigError("delta", "must be in (0, 1)");
  if (c.C && !(*c.C > 0.0)) throw ConfigError("C", "must be positive");
  if (c.cap < 1) throw ConfigError("cap", "must be >= 1");
  if (!(c.c1 > 0.0)) throw ConfigError("c1", "must be positive");
  if (!(c.epsilon > 0.0 && c.epsilon <= c.H)) throw ConfigError("epsilon", "must be in (0, H]");
  if (!(c.C_rf > 0.0)) throw ConfigError("C_rf", "must be positive");
  if (!(c.sparsity > 0.0 && c.sparsity <= 1.0)) throw ConfigError("sparsity", "must be in (0, 1]");
  for (auto k : c.sweep_K) {
    if (k < 4) throw ConfigError("sweep_K", "every K must be >= 4");
  }
  if (c.sweep_seeds < 1) throw ConfigError("sweep_seeds", "must be >= 1");
  if (c.workers < 0) throw ConfigError("workers", "must be >= 0");
}

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "H=" << c.H << '\n'
      << "S=" << c.S << '\n'
      << "A=" << c.A << '\n'
      << "K=" << c.K << '\n'
      << "delta=" << format_double(c.delta) << '\n'
      << "C=" << (c.C ? format_double(*c.C) : std::string("default")) << '\n'
      << "mode=" << to_string(c.mode) << '\n'
      << "seed=" << c.seed << '\n'
      << "cap=" << c.cap << '\n'
      << "c1=" << format_double(c.c1) << '\n'
      << "epsilon=" << format_double(c.epsilon) << '\n'
      << "C_rf=" << format_double(c.C_rf) << '\n'
      << "sparsity=" << format_double(c.sparsity) << '\n'
      << "instance=" << c.instance << '\n'
      << "instance_seed=" << c.instance_seed << '\n'
      << "mdp=" << c.mdp << '\n'
      << "relaxed=" << (c.relaxed ? "true" : "false") << '\n'
      << "sweep_K=";
  for (std::size_t i = 0; i < c.sweep_K.size(); ++i) out << (i ? "," : "") << c.sweep_K[i];
  out << '\n'
      << "sweep_seeds=" << c.sweep_seeds << '\n'
      << "workers=" << c.workers << '\n';
  return out.str();
}

ApeveConfig to_apeve_config(const RunConfig& c) {
  ApeveConfig out;
  out.total_episodes = c.K;
  out.delta = c.delta;
  out.mode = c.mode;
  out.constant = c.C;
  out.c1 = c.c1;
  out.cap = c.cap;
  out.allow_relaxed = c.relaxed;
  return out;
}

}  // namespace lowswitch
