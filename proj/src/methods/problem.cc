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

#include "adr/methods/problem.h"

#include <numeric>
#include <stdexcept>

#include "adr/common/random.h"
#include "adr/policy/trainer.h"

namespace adr {

std::string SettingName(Setting s) {
  switch (s) {
    case Setting::kVanilla:
      return "vanilla";
    case Setting::kNoisy:
      return "noisy";
    case Setting::kUnmodeled:
      return "unmodeled";
  }
  return "";
}

std::vector<std::string> SettingNames() {
  return {"vanilla", "noisy", "unmodeled"};
}

Setting ParseSetting(const std::string& name) {
  if (name == "vanilla") return Setting::kVanilla;
  if (name == "noisy") return Setting::kNoisy;
  if (name == "unmodeled") return Setting::kUnmodeled;
  throw std::invalid_argument("unknown setting '" + name +
                              "' (valid: vanilla, noisy, unmodeled)");
}

Problem MakeProblem(const EnvironmentSpec& spec, Setting setting) {
  spec.Validate();
  Problem p;
  p.spec = spec;
  p.setting = setting;
  p.target_xi = spec.ground_truth.values;
  p.target_noise = setting == Setting::kNoisy ? spec.noise_variance : 0.0;
  if (setting == Setting::kUnmodeled) {
    const UnmodeledSetup u = MakeUnmodeled(spec);
    p.source = {ParamSpace(u.reduced_lo, u.reduced_hi), u.free_indices,
                u.source_xi.values};
  } else {
    std::vector<int> all(spec.n_xi());
    std::iota(all.begin(), all.end(), 0);
    p.source = {ParamSpace(spec.xi_lo, spec.xi_hi), all,
                spec.ground_truth.values};
  }
  return p;
}

TargetDomain::TargetDomain(const Problem& problem, uint64_t seed)
    : problem_(&problem), seed_(seed) {}

Trajectory TargetDomain::Collect(const Controller& controller, int max_steps,
                                 std::initializer_list<uint64_t> key,
                                 const TrajectoryMeta& meta) {
  Rng rng = MakeRng(DeriveSeed(seed_, {Tag(Stream::kCollection)}), key);
  Trajectory traj = Rollout(problem_->spec, controller, problem_->target_xi,
                            max_steps, rng, problem_->target_noise);
  traj.meta = meta;
  traj.meta.noise_variance = problem_->target_noise;
  collection_steps_ += traj.size();
  ++collection_rollouts_;
  return traj;
}

double TargetDomain::Evaluate(const Policy& policy, int episodes,
                              std::initializer_list<uint64_t> key,
                              std::vector<double>* returns) {
  Rng rng = MakeRng(DeriveSeed(seed_, {Tag(Stream::kEvaluation)}), key);
  std::vector<double> local;
  const double mean =
      EvaluatePolicy(policy, problem_->spec, problem_->target_xi, episodes,
                     rng, problem_->target_noise, &local);
  evaluation_episodes_ += episodes;
  if (returns) *returns = std::move(local);
  return mean;
}

}  // namespace adr
