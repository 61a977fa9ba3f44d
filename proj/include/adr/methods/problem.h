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

#ifndef ADR_METHODS_PROBLEM_H_
#define ADR_METHODS_PROBLEM_H_

#include <atomic>
#include <initializer_list>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adr/dist/distribution.h"
#include "adr/envs/environment.h"
#include "adr/policy/policy.h"

namespace adr {

enum class Setting { kVanilla, kNoisy, kUnmodeled };

std::string SettingName(Setting s);
// Throws std::invalid_argument listing the valid names.
Setting ParseSetting(const std::string& name);
std::vector<std::string> SettingNames();

// One environment under one setting: what the target domain is, and which
// part of the dynamics the source simulator gets to infer.
struct Problem {
  EnvironmentSpec spec;
  Setting setting = Setting::kVanilla;
  Eigen::VectorXd target_xi;
  // measurement noise variance of the target domain
  double target_noise = 0.0;
  // normalized inference space; unmodeled dims are frozen at 80% of truth
  SourceSpace source;

  int dims() const { return source.dims(); }
  DomainDistribution PriorDistribution() const { return Prior(dims()); }
  // ground truth in normalized source coordinates
  Eigen::VectorXd TruthNormalized() const {
    return source.ToNormalized(target_xi);
  }
};

Problem MakeProblem(const EnvironmentSpec& spec, Setting setting);

// The ground-truth system. All access to it goes through this class so that
// the number of collected and evaluated transitions can be audited.
// Collection and evaluation draw their randomness from streams keyed by the
// caller, so results do not depend on call order. Thread-safe.
class TargetDomain {
 public:
  TargetDomain(const Problem& problem, uint64_t seed);

  // One data-collection episode of at most max_steps transitions with the
  // setting's measurement noise.
  Trajectory Collect(const Controller& controller, int max_steps,
                     std::initializer_list<uint64_t> key,
                     const TrajectoryMeta& meta);

  // Mean undiscounted full-horizon return over fresh initial states.
  double Evaluate(const Policy& policy, int episodes,
                  std::initializer_list<uint64_t> key,
                  std::vector<double>* returns = nullptr);

  int64_t collection_steps() const { return collection_steps_.load(); }
  int64_t collection_rollouts() const { return collection_rollouts_.load(); }
  int64_t evaluation_episodes() const { return evaluation_episodes_.load(); }

  const Problem& problem() const { return *problem_; }

 private:
  const Problem* problem_;
  uint64_t seed_;
  std::atomic<int64_t> collection_steps_{0};
  std::atomic<int64_t> collection_rollouts_{0};
  std::atomic<int64_t> evaluation_episodes_{0};
};

}  // namespace adr

#endif  // ADR_METHODS_PROBLEM_H_
