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

#include <random>
#include <stdexcept>

#include "adr/methods/adr.h"

namespace adr {

void MethodsConfig::Validate() const {
  trainer.Validate();
  reps.Validate();
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("methods: ") + what);
  };
  require(iterations >= 1, "iterations must be >= 1");
  require(trajectory_len >= 1, "trajectory_len must be >= 1");
  require(iterations * trajectory_len <= transition_budget,
          "iterations * trajectory_len exceeds the transition budget");
  require(eval_episodes >= 1, "eval_episodes must be >= 1");
  require(udr_configs >= 1, "udr_configs must be >= 1");
  require(bayrn_eval_episodes >= 1, "bayrn_eval_episodes must be >= 1");
  require(bayrn_starts >= 1, "bayrn_starts must be >= 1");
  require(bayrn_length_scale > 0.0, "bayrn_length_scale must be positive");
  require(simopt1_updates >= 1, "simopt1_updates must be >= 1");
  require(discrepancy_l1 >= 0.0 && discrepancy_l2 >= 0.0 &&
              discrepancy_l1 + discrepancy_l2 > 0.0,
          "discrepancy weights must be non-negative and not both zero");
  require(missing_step_factor >= 0.0, "missing_step_factor must be >= 0");
  require(droid_evals >= 1 && dropo_evals >= 1, "CMA-ES budgets must be >= 1");
  require(droid_sigma0 > 0.0 && dropo_sigma0 > 0.0, "sigma0 must be positive");
  require(!dropo_epsilons.empty(), "dropo_epsilons must not be empty");
  for (double e : dropo_epsilons) require(e > 0.0, "dropo epsilons must be > 0");
  require(dropo_samples_per_dim >= 1, "dropo_samples_per_dim must be >= 1");
  require(dropo_holdout > 0.0 && dropo_holdout < 1.0,
          "dropo_holdout must lie in (0, 1)");
}

std::string StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kSimoptPolicy:
      return "simopt-policy";
    case Strategy::kRandom:
      return "random";
    case Strategy::kPriorPolicy:
      return "prior-policy";
  }
  return "";
}

std::vector<std::string> StrategyNames() {
  return {"simopt-policy", "random", "prior-policy"};
}

Strategy ParseStrategy(const std::string& name) {
  if (name == "simopt-policy") return Strategy::kSimoptPolicy;
  if (name == "random") return Strategy::kRandom;
  if (name == "prior-policy") return Strategy::kPriorPolicy;
  throw std::invalid_argument(
      "unknown collection strategy '" + name +
      "' (valid: simopt-policy, random, prior-policy)");
}

namespace {

TrainResult Train(const CellContext& ctx, const DomainDistribution& dist,
                  Stream method, int iteration, int member) {
  TrainerConfig tc = ctx.config->trainer;
  tc.seed = DeriveSeed(ctx.seed, {Tag(Stream::kTraining), Tag(method),
                                  uint64_t(iteration), uint64_t(member + 1)});
  tc.reward_threshold = ctx.problem->spec.reward_threshold;
  tc.threads = ctx.config->threads;
  return TrainPolicy(dist, ctx.problem->source, ctx.problem->spec, tc);
}

}  // namespace

IterationResult TrainAndEvaluate(const CellContext& ctx,
                                 const DomainDistribution& dist, Stream method,
                                 int iteration, int member) {
  TrainResult tr = Train(ctx, dist, method, iteration, member);
  IterationResult r;
  r.iteration = iteration;
  r.member = member;
  r.inferred = dist;
  r.raw_return = ctx.target->Evaluate(
      tr.policy, ctx.config->eval_episodes,
      {Tag(method), uint64_t(iteration), uint64_t(member + 1)});
  r.policy = std::move(tr.policy);
  r.train_return = tr.train_return;
  r.reached_threshold = tr.reached_threshold;
  return r;
}

IterationResult RunPriorIteration(const CellContext& ctx) {
  return TrainAndEvaluate(ctx, ctx.problem->PriorDistribution(), Stream::kPrior,
                          0, -1);
}

Dataset CollectOfflineDataset(const CellContext& ctx, Strategy strategy,
                              int iterations, const Policy* prior_policy,
                              const Dataset* simopt_log) {
  const MethodsConfig& cfg = *ctx.config;
  if (strategy == Strategy::kSimoptPolicy) {
    if (simopt_log == nullptr || simopt_log->size() < iterations) {
      throw std::invalid_argument(
          "simopt-policy data requires a completed SimOpt run with " +
          std::to_string(iterations) + " trajectories");
    }
    return simopt_log->Prefix(iterations);
  }
  const EnvironmentSpec& spec = ctx.problem->spec;
  Dataset d;
  for (int k = 1; k <= iterations; ++k) {
    TrajectoryMeta meta;
    meta.strategy = StrategyName(strategy);
    meta.iteration = k;
    meta.seed = ctx.seed;
    const uint64_t key[] = {Tag(Stream::kCollection), uint64_t(strategy),
                            uint64_t(k)};
    if (strategy == Strategy::kPriorPolicy) {
      if (prior_policy == nullptr) {
        throw std::invalid_argument("prior-policy data needs the prior policy");
      }
      meta.policy_iteration = 0;
      d.trajectories.push_back(ctx.target->Collect(
          prior_policy->AsController(), cfg.trajectory_len,
          {key[0], key[1], key[2]}, meta));
    } else {
      Rng rng = MakeRng(ctx.seed, {key[0], key[1], key[2], 1});
      const Controller random = [&rng, &spec](const Eigen::VectorXd&,
                                              Eigen::VectorXd* a) {
        for (int i = 0; i < spec.n_a(); ++i) {
          (*a)[i] = std::uniform_real_distribution<double>(
              spec.action_lo[i], spec.action_hi[i])(rng);
        }
      };
      d.trajectories.push_back(ctx.target->Collect(
          random, cfg.trajectory_len, {key[0], key[1], key[2]}, meta));
    }
  }
  return d;
}

}  // namespace adr
