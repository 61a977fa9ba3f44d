// Copyright 2026 The ADR Benchmark Authors
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

#ifndef ADR_HARNESS_CONFIG_H_
#define ADR_HARNESS_CONFIG_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adr/envs/environment.h"
#include "adr/methods/adr.h"
#include "adr/methods/problem.h"
#include "adr/policy/trainer.h"

namespace adr {

// Per-environment values that override the built-in spec. Unset fields keep
// the built-in value.
struct EnvironmentEntry {
  std::string name;
  std::vector<double> ground_truth;
  std::optional<double> noise_variance;
  std::optional<double> reward_threshold;
  std::optional<double> worst_return;
  std::optional<Architecture> architecture;
  std::optional<std::vector<int>> hidden;
  std::optional<int> max_generations;
};

struct BenchmarkConfig {
  // which environments, settings, methods and seeds to run
  std::vector<std::string> environments = {"pendulum", "cartpole", "acrobot"};
  std::vector<Setting> settings = {Setting::kVanilla, Setting::kNoisy,
                                   Setting::kUnmodeled};
  std::vector<std::string> methods = {"udr",    "bayrn", "simopt",
                                      "simopt1", "droid", "dropo"};
  std::vector<uint64_t> seeds = {0, 1, 2};
  Strategy strategy = Strategy::kSimoptPolicy;

  // environment table; every name in `environments` needs an entry
  std::vector<EnvironmentEntry> env_entries;
  MethodsConfig methods_config;

  // Throws ConfigError.
  void Validate() const;

  const EnvironmentEntry& Entry(const std::string& env) const;
  EnvironmentSpec SpecFor(const std::string& env) const;
  // methods_config with the environment's trainer overrides applied
  MethodsConfig MethodsFor(const std::string& env) const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> KnownMethods();

// Built-in defaults, identical to configs/default.yaml.
BenchmarkConfig DefaultBenchmarkConfig();

// Keys not present in the text keep their default value. Unknown keys are
// errors. Throws ConfigError with the source name in the message.
BenchmarkConfig ParseConfig(const std::string& yaml_text,
                            const std::string& source = "<string>");
BenchmarkConfig LoadConfig(const std::string& path);

// Complete YAML rendering of every setting. ParseConfig(DumpConfig(c))
// reproduces c.
std::string DumpConfig(const BenchmarkConfig& config);

// 64-bit FNV-1a of text, as 16 hex digits.
std::string Fnv1aHex(const std::string& text);
// Fnv1aHex(DumpConfig(config))
std::string RunId(const BenchmarkConfig& config);

// Levenshtein distance, used for "did you mean" hints.
int EditDistance(const std::string& a, const std::string& b);
// Closest candidate within distance 3, or empty.
std::string Suggest(const std::string& name,
                    const std::vector<std::string>& candidates);

}  // namespace adr

#endif  // ADR_HARNESS_CONFIG_H_
