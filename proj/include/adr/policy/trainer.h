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

#ifndef ADR_POLICY_TRAINER_H_
#define ADR_POLICY_TRAINER_H_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "adr/dist/distribution.h"
#include "adr/envs/environment.h"
#include "adr/policy/policy.h"

namespace adr {

struct TrainerConfig {
  double gamma = 0.99;
  int population = 64;
  int elites = 8;
  int episodes_per_candidate = 4;
  int max_generations = 300;
  double reward_threshold = 0.0;
  uint64_t seed = 0;

  Architecture architecture = Architecture::kMlp;
  std::vector<int> hidden = {32, 32};
  double init_std = 1.0;
  // Extra standard deviation added to the elite refit. It decays linearly to
  // min_noise_std over the first half of max_generations.
  double noise_std = 0.2;
  double min_noise_std = 0.01;
  int threads = 0;

  // Throws std::invalid_argument on invalid settings.
  void Validate() const;
};

struct GenerationStats {
  int generation = 0;
  double elite_mean_return = 0.0;     // undiscounted
  double best_fitness = 0.0;          // discounted, this generation
  double best_ever_fitness = 0.0;     // discounted, non-decreasing
  double mean_std = 0.0;
};

struct TrainResult {
  Policy policy;
  // undiscounted mean return of the returned policy in its last generation
  double train_return = 0.0;
  bool reached_threshold = false;
  int generations = 0;
  int64_t episodes = 0;
  // fraction of sampled dynamics vectors that needed clamping to [0, 4]
  double clamp_rate = 0.0;
  std::vector<GenerationStats> history;
};

// Cross-entropy search over policy weights maximizing the expected
// discounted return under xi ~ dist. Every candidate in a generation is scored
// on the same episodes_per_candidate draws of (xi, initial state); candidate 0
// is the current search mean. The returned policy is the mean if it scored at
// least as well as the top elite, else the top elite. Throws
// std::runtime_error if every candidate of a generation diverges.
TrainResult TrainPolicy(const DomainDistribution& dist,
                        const SourceSpace& source, const EnvironmentSpec& spec,
                        const TrainerConfig& config);

struct EpisodeReturn {
  double undiscounted = 0.0;
  double discounted = 0.0;
  int steps = 0;
  bool diverged = false;
};

// One full-horizon episode in the source simulator without noise.
EpisodeReturn RunEpisode(const Policy& policy, const EnvironmentSpec& spec,
                         const Eigen::VectorXd& xi, uint64_t reset_seed,
                         double gamma);

// Mean undiscounted return over independent episodes from fresh initial
// states. When noise_variance > 0 the policy acts on noisy measurements.
double EvaluatePolicy(const Policy& policy, const EnvironmentSpec& spec,
                      const Eigen::VectorXd& xi, int episodes, Rng& rng,
                      double noise_variance,
                      std::vector<double>* returns = nullptr);

}  // namespace adr

#endif  // ADR_POLICY_TRAINER_H_
