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

#include "adr/policy/trainer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "adr/common/parallel.h"

namespace adr {

void TrainerConfig::Validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("trainer: gamma must lie in (0, 1]");
  }
  if (population < 1 || elites < 1 || elites > population) {
    throw std::invalid_argument("trainer: need 0 < elites <= population");
  }
  if (episodes_per_candidate < 1 || max_generations < 1) {
    throw std::invalid_argument(
        "trainer: episodes_per_candidate and max_generations must be >= 1");
  }
  if (!(init_std > 0.0) || noise_std < 0.0 || min_noise_std < 0.0) {
    throw std::invalid_argument("trainer: invalid exploration settings");
  }
}

EpisodeReturn RunEpisode(const Policy& policy, const EnvironmentSpec& spec,
                         const Eigen::VectorXd& xi, uint64_t reset_seed,
                         double gamma) {
  Simulator sim(spec, xi);
  Rng rng(reset_seed);
  sim.Reset(rng);
  Eigen::VectorXd obs(spec.n_s());
  Eigen::VectorXd action(spec.n_a());
  EpisodeReturn ret;
  double discount = 1.0;
  for (int t = 0; t < spec.horizon; ++t) {
    sim.Observe(&obs);
    policy.Act(obs, &action);
    Simulator::Outcome out = sim.Step(action);
    if (out.status == StepStatus::kDiverged) {
      ret.diverged = true;
      break;
    }
    ret.undiscounted += out.reward;
    ret.discounted += discount * out.reward;
    discount *= gamma;
    ++ret.steps;
    if (out.done) break;
  }
  return ret;
}

double EvaluatePolicy(const Policy& policy, const EnvironmentSpec& spec,
                      const Eigen::VectorXd& xi, int episodes, Rng& rng,
                      double noise_variance, std::vector<double>* returns) {
  if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  const Controller controller = policy.AsController();
  double total = 0.0;
  if (returns) returns->clear();
  for (int e = 0; e < episodes; ++e) {
    Trajectory traj =
        Rollout(spec, controller, xi, spec.horizon, rng, noise_variance);
    total += traj.Return();
    if (returns) returns->push_back(traj.Return());
  }
  return total / episodes;
}

TrainResult TrainPolicy(const DomainDistribution& dist,
                        const SourceSpace& source, const EnvironmentSpec& spec,
                        const TrainerConfig& config) {
  config.Validate();
  dist.Validate();
  if (dist.dims() != source.dims()) {
    throw std::invalid_argument("trainer: distribution has " +
                                std::to_string(dist.dims()) +
                                " dims, source space has " +
                                std::to_string(source.dims()));
  }

  const PolicyShape shape =
      Policy::ShapeFor(spec, config.architecture, config.hidden);
  const int n = shape.NumWeights();
  const int pop = config.population;
  const int episodes = config.episodes_per_candidate;

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sigma = Eigen::VectorXd::Constant(n, config.init_std);

  TrainResult result;
  result.policy = Policy::Zero(shape, spec);
  double best_ever = -std::numeric_limits<double>::infinity();
  int64_t clamped = 0, drawn = 0;

  std::vector<Eigen::VectorXd> candidates(pop);
  std::vector<double> fitness(pop), undiscounted(pop);
  std::vector<Eigen::VectorXd> xis(episodes);
  std::vector<uint64_t> reset_seeds(episodes);

  for (int gen = 0; gen < config.max_generations; ++gen) {
    Rng rng = MakeRng(config.seed, {Tag(Stream::kTraining), uint64_t(gen)});

    // shared (xi, s0) draws for this generation
    for (int k = 0; k < episodes; ++k) {
      Eigen::VectorXd z = Sample(dist, rng, /*clamp=*/false);
      ++drawn;
      if (!InNormalizedRange(z)) ++clamped;
      xis[k] = source.ToPhysical(z);
      reset_seeds[k] = rng();
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    // candidate 0 is the unperturbed mean
    candidates[0] = mean;
    for (int i = 1; i < pop; ++i) {
      candidates[i].resize(n);
      for (int j = 0; j < n; ++j) {
        candidates[i][j] = mean[j] + sigma[j] * normal(rng);
      }
    }

    ParallelFor(
        pop,
        [&](int i) {
          Policy policy(shape, spec.action_lo, spec.action_hi, candidates[i]);
          double disc = 0.0, undisc = 0.0;
          bool diverged = false;
          for (int k = 0; k < episodes; ++k) {
            EpisodeReturn r =
                RunEpisode(policy, spec, xis[k], reset_seeds[k], config.gamma);
            diverged |= r.diverged;
            disc += r.discounted;
            undisc += r.undiscounted;
          }
          fitness[i] = diverged ? -std::numeric_limits<double>::infinity()
                                : disc / episodes;
          undiscounted[i] = undisc / episodes;
        },
        config.threads);
    result.episodes += int64_t(pop) * episodes;

    std::vector<int> order(pop);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fitness[a] > fitness[b]; });
    if (!std::isfinite(fitness[order[0]])) {
      throw std::runtime_error("trainer: every candidate of generation " +
                               std::to_string(gen) + " diverged");
    }

    const int elites = config.elites;
    Eigen::VectorXd elite_mean = Eigen::VectorXd::Zero(n);
    double elite_return = 0.0;
    int finite_elites = 0;
    for (int e = 0; e < elites; ++e) {
      if (!std::isfinite(fitness[order[e]])) break;
      elite_mean += candidates[order[e]];
      elite_return += undiscounted[order[e]];
      ++finite_elites;
    }
    elite_mean /= finite_elites;
    elite_return /= finite_elites;
    Eigen::VectorXd elite_var = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < finite_elites; ++e) {
      elite_var += (candidates[order[e]] - elite_mean).array().square().matrix();
    }
    elite_var /= finite_elites;

    const double frac =
        std::max(0.0, 1.0 - gen / (0.5 * config.max_generations));
    const double extra =
        config.min_noise_std + (config.noise_std - config.min_noise_std) * frac;
    mean = elite_mean;
    sigma = (elite_var.array() + extra * extra).sqrt().matrix();

    best_ever = std::max(best_ever, fitness[order[0]]);
    result.history.push_back(
        {gen, elite_return, fitness[order[0]], best_ever, sigma.mean()});

    // the mean is usually more robust than any single elite
    const int pick =
        std::isfinite(fitness[0]) && undiscounted[0] >= undiscounted[order[0]]
            ? 0
            : order[0];
    result.policy =
        Policy(shape, spec.action_lo, spec.action_hi, candidates[pick]);
    result.train_return = undiscounted[pick];
    result.generations = gen + 1;
    if (elite_return >= config.reward_threshold) {
      result.reached_threshold = true;
      break;
    }
  }
  result.clamp_rate = drawn ? double(clamped) / drawn : 0.0;
  return result;
}

}  // namespace adr
