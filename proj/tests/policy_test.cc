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

#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "adr/dist/distribution.h"
#include "adr/envs/environment.h"
#include "adr/policy/policy.h"
#include "adr/policy/trainer.h"

namespace adr {
namespace {

SourceSpace FullSpace(const EnvironmentSpec& spec) {
  std::vector<int> all(spec.n_xi());
  for (int i = 0; i < spec.n_xi(); ++i) all[i] = i;
  return {ParamSpace(spec.xi_lo, spec.xi_hi), all, spec.ground_truth.values};
}

TEST(PolicyTest, ZeroLinearPolicyOutputsZero) {
  const EnvironmentSpec spec = MakeDefaultSpec("cartpole");
  const Policy p = Policy::Zero(
      Policy::ShapeFor(spec, Architecture::kLinear, {}), spec);
  EXPECT_EQ(p.Act(Eigen::VectorXd::Ones(spec.n_s()))[0], 0.0);
}

TEST(PolicyTest, ActionsStayInsideBounds) {
  const EnvironmentSpec spec = MakeDefaultSpec("acrobot");
  const PolicyShape shape =
      Policy::ShapeFor(spec, Architecture::kMlp, {16, 8});
  Rng rng(3);
  std::normal_distribution<double> normal(0.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd w(shape.NumWeights());
    for (int i = 0; i < w.size(); ++i) w[i] = normal(rng);
    const Policy p(shape, spec.action_lo, spec.action_hi, w);
    Eigen::VectorXd obs(spec.n_s());
    for (int i = 0; i < obs.size(); ++i) obs[i] = normal(rng);
    const Eigen::VectorXd a = p.Act(obs);
    EXPECT_TRUE((a.array() <= spec.action_hi.array()).all());
    EXPECT_TRUE((a.array() >= spec.action_lo.array()).all());
    EXPECT_EQ(a, p.Act(obs));
  }
}

TEST(PolicyTest, WeightCountIsChecked) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const PolicyShape shape = Policy::ShapeFor(spec, Architecture::kMlp, {4});
  EXPECT_EQ(shape.NumWeights(), (3 + 1) * 4 + (4 + 1) * 1);
  EXPECT_THROW(Policy(shape, spec.action_lo, spec.action_hi,
                      Eigen::VectorXd::Zero(3)),
               std::invalid_argument);
}

TEST(PolicyTest, SaveLoadRoundTripIsBitExact) {
  const EnvironmentSpec spec = MakeDefaultSpec("cartpole");
  const PolicyShape shape = Policy::ShapeFor(spec, Architecture::kMlp, {5, 3});
  Rng rng(1);
  std::normal_distribution<double> normal;
  Eigen::VectorXd w(shape.NumWeights());
  for (int i = 0; i < w.size(); ++i) w[i] = normal(rng) / 3.0;
  const Policy p(shape, spec.action_lo, spec.action_hi, w);
  const std::string path = ::testing::TempDir() + "/policy_roundtrip.txt";
  SavePolicy(p, path);
  EXPECT_EQ(LoadPolicy(path), p);
  std::remove(path.c_str());
  EXPECT_THROW(LoadPolicy(path), std::runtime_error);
}

TEST(TrainerTest, EpisodeAccountingAndBestEverBookkeeping) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  TrainerConfig cfg;
  cfg.architecture = Architecture::kLinear;
  cfg.population = 10;
  cfg.elites = 3;
  cfg.episodes_per_candidate = 3;
  cfg.max_generations = 4;
  cfg.reward_threshold = 1e9;
  const TrainResult r = TrainPolicy(Prior(3), FullSpace(spec), spec, cfg);
  EXPECT_EQ(r.generations, 4);
  EXPECT_EQ(r.episodes, 4 * 10 * 3);
  ASSERT_EQ(r.history.size(), 4u);
  for (size_t g = 1; g < r.history.size(); ++g) {
    EXPECT_GE(r.history[g].best_ever_fitness,
              r.history[g - 1].best_ever_fitness);
  }
  EXPECT_FALSE(r.reached_threshold);
}

TEST(TrainerTest, SameSeedGivesIdenticalWeights) {
  const EnvironmentSpec spec = MakeDefaultSpec("cartpole");
  TrainerConfig cfg;
  cfg.population = 8;
  cfg.elites = 2;
  cfg.episodes_per_candidate = 2;
  cfg.max_generations = 3;
  cfg.hidden = {8};
  cfg.reward_threshold = 1e9;
  cfg.seed = 5;
  const TrainResult a = TrainPolicy(Prior(5), FullSpace(spec), spec, cfg);
  cfg.threads = 1;
  const TrainResult b = TrainPolicy(Prior(5), FullSpace(spec), spec, cfg);
  EXPECT_EQ(a.policy, b.policy);
  EXPECT_EQ(a.train_return, b.train_return);
}

// With a point-mass distribution every episode of a generation shares the
// same dynamics, so the robust objective degenerates to a single-environment
// problem.
TEST(TrainerTest, PointMassRemovesDynamicsVariance) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const SourceSpace source = FullSpace(spec);
  const DomainDistribution dist =
      PointMass(source.ToNormalized(spec.ground_truth.values));
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(source.ToPhysical(Sample(dist, rng, false)),
              spec.ground_truth.values);
  }
}

TEST(TrainerTest, PendulumPointMassReachesThreshold) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const SourceSpace source = FullSpace(spec);
  TrainerConfig cfg;
  cfg.architecture = Architecture::kLinear;
  cfg.reward_threshold = spec.reward_threshold;
  cfg.seed = 1;
  const TrainResult r = TrainPolicy(
      PointMass(source.ToNormalized(spec.ground_truth.values)), source, spec,
      cfg);
  EXPECT_TRUE(r.reached_threshold);
  EXPECT_GE(r.train_return, spec.reward_threshold);

  // independent re-evaluation on fresh initial states
  Rng rng(123);
  const double ret =
      EvaluatePolicy(r.policy, spec, spec.ground_truth.values, 20, rng, 0.0);
  const double normalized = (ret - spec.worst_return) /
                            (spec.reward_threshold - spec.worst_return);
  EXPECT_GE(normalized, 0.9);
}

TEST(TrainerTest, EvaluationIsDeterministicPerSeed) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const Policy p =
      Policy::Zero(Policy::ShapeFor(spec, Architecture::kLinear, {}), spec);
  Rng a(4), b(4);
  std::vector<double> returns;
  const double ra =
      EvaluatePolicy(p, spec, spec.ground_truth.values, 10, a, 0.0, &returns);
  EXPECT_EQ(returns.size(), 10u);
  EXPECT_EQ(ra, EvaluatePolicy(p, spec, spec.ground_truth.values, 10, b, 0.0));
}

TEST(TrainerTest, RejectsMismatchedDistribution) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  EXPECT_THROW(TrainPolicy(Prior(2), FullSpace(spec), spec, TrainerConfig{}),
               std::invalid_argument);
}

}  // namespace
}  // namespace adr
