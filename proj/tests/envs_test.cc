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

#include "adr/envs/environment.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "adr/envs/dynamics.h"
#include "oracles.h"

namespace adr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd Frictionless(const EnvironmentSpec& spec) {
  Eigen::VectorXd xi = spec.ground_truth.values;
  for (int i : spec.unmodeled_indices) xi[i] = 0.0;
  return xi;
}

Controller ZeroController() {
  return [](const Eigen::VectorXd&, Eigen::VectorXd* a) { a->setZero(); };
}

class EnvTest : public ::testing::TestWithParam<std::string> {
 protected:
  EnvironmentSpec spec_ = MakeDefaultSpec(GetParam());
};

TEST_P(EnvTest, DefaultSpecIsValid) {
  EXPECT_NO_THROW(spec_.Validate());
  EXPECT_GE(spec_.horizon, 200);
  EXPECT_EQ(spec_.ground_truth.size(), spec_.n_xi());
  EXPECT_EQ(static_cast<int>(spec_.ground_truth.names.size()), spec_.n_xi());
  for (int i = 0; i < spec_.n_xi(); ++i) {
    const double gt = spec_.ground_truth.values[i];
    EXPECT_DOUBLE_EQ(spec_.xi_lo[i], 0.25 * gt);
    EXPECT_DOUBLE_EQ(spec_.xi_hi[i], 2.5 * gt);
  }
}

TEST_P(EnvTest, HorizonEndsEpisode) {
  Rng rng(3);
  EnvState s = Reset(spec_, rng);
  s.t = spec_.horizon - 1;
  const StepResult r = Step(spec_, s, Eigen::VectorXd::Zero(spec_.n_a()),
                            spec_.ground_truth.values);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.next.t, spec_.horizon);
}

TEST_P(EnvTest, ResetIsDeterministicAndStartsAtZero) {
  Rng a(11), b(11);
  const EnvState sa = Reset(spec_, a);
  const EnvState sb = Reset(spec_, b);
  EXPECT_EQ(sa.x, sb.x);
  EXPECT_EQ(sa.t, 0);
}

TEST_P(EnvTest, ResetMeanMatchesRestState) {
  const int n = 10000;
  Rng rng(5);
  const Eigen::VectorXd rest = spec_.dynamics->RestState();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(rest.size());
  for (int i = 0; i < n; ++i) sum += Reset(spec_, rng).x;
  const Eigen::VectorXd mean = sum / n;
  // uniform on [-w, w] has standard deviation w / sqrt(3)
  const double se = spec_.reset_spread / std::sqrt(3.0) / std::sqrt(n);
  for (int i = 0; i < rest.size(); ++i) {
    EXPECT_NEAR(mean[i], rest[i], 3.0 * se) << "coordinate " << i;
  }
}

TEST_P(EnvTest, SetStateRoundTripAndRepeatability) {
  Simulator sim(spec_, spec_.ground_truth.values);
  Rng rng(2);
  sim.Reset(rng);
  const Eigen::VectorXd s = sim.state() + Eigen::VectorXd::Constant(
                                              spec_.latent_dim(), 0.0123);
  sim.SetState(s, 7);
  EXPECT_EQ(sim.state(), s);
  EXPECT_EQ(sim.time(), 7);

  const Eigen::VectorXd a = Eigen::VectorXd::Constant(spec_.n_a(), 0.3);
  sim.Step(a);
  sim.Step(a);
  const Eigen::VectorXd first = sim.state();
  sim.SetState(s, 7);
  sim.Step(a);
  sim.Step(a);
  EXPECT_EQ(sim.state(), first);
  EXPECT_EQ(sim.xi(), spec_.ground_truth.values);
}

TEST_P(EnvTest, SetStateRejectsBadInput) {
  Simulator sim(spec_, spec_.ground_truth.values);
  EXPECT_THROW(sim.SetState(Eigen::VectorXd::Zero(spec_.latent_dim() + 1)),
               std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(spec_.latent_dim());
  bad[0] = kInf;
  EXPECT_THROW(sim.SetState(bad), std::invalid_argument);
}

TEST_P(EnvTest, StepRejectsNonFiniteXi) {
  Rng rng(1);
  const EnvState s = Reset(spec_, rng);
  Eigen::VectorXd xi = spec_.ground_truth.values;
  xi[0] = std::nan("");
  EXPECT_THROW(Step(spec_, s, Eigen::VectorXd::Zero(spec_.n_a()), xi),
               std::invalid_argument);
}

TEST_P(EnvTest, StepClampsActions) {
  Rng rng(4);
  const EnvState s = Reset(spec_, rng);
  const Eigen::VectorXd xi = spec_.ground_truth.values;
  const StepResult big =
      Step(spec_, s, 100.0 * spec_.action_hi, xi);
  const StepResult edge = Step(spec_, s, spec_.action_hi, xi);
  EXPECT_EQ(big.next.x, edge.next.x);
}

// The semi-implicit Euler integrator must follow a fine RK4 solution of the
// same frictionless, unactuated system without secular energy drift.
TEST_P(EnvTest, EnergyDriftAgainstRk4) {
  EnvironmentSpec spec = spec_;
  spec.horizon = 1000;
  const Eigen::VectorXd xi = Frictionless(spec);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(spec.n_a());
  const Dynamics& d = *spec.dynamics;
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    EnvState s = Reset(spec, rng);
    Eigen::VectorXd ref = s.x;
    for (int k = 0; k < 500; ++k) {
      s = Step(spec, s, zero, xi).next;
      ref = testing::Rk4(d, ref, zero, xi, spec.dt, 1e-5);
    }
    const double drift =
        std::abs(d.Energy(s.x.data(), xi.data()) -
                 d.Energy(ref.data(), xi.data())) / 500.0;
    EXPECT_LE(drift, 1e-4) << "trial " << trial;
  }
}

TEST_P(EnvTest, RolloutIsClippedToMaxSteps) {
  Rng rng(6);
  const Trajectory traj = Rollout(spec_, ZeroController(),
                                  spec_.ground_truth.values, 200, rng, 0.0);
  EXPECT_LE(traj.size(), 200);
  EXPECT_EQ(traj.states.size(), traj.actions.size() + 1);
  EXPECT_EQ(traj.rewards.size(), traj.actions.size());
}

TEST_P(EnvTest, NoiselessRolloutRecordsTrueStates) {
  Rng rng(6);
  const Trajectory traj = Rollout(spec_, ZeroController(),
                                  spec_.ground_truth.values, 200, rng, 0.0);
  ASSERT_EQ(traj.states.size(), traj.true_states.size());
  for (size_t i = 0; i < traj.states.size(); ++i) {
    EXPECT_EQ(traj.states[i], traj.true_states[i]);
  }
}

// Measurement noise must not feed back into the latent simulator state.
TEST_P(EnvTest, NoiseLeavesLatentStateUntouched) {
  Rng a(9), b(9);
  const Trajectory clean = Rollout(spec_, ZeroController(),
                                   spec_.ground_truth.values, 200, a, 0.0);
  const Trajectory noisy = Rollout(spec_, ZeroController(),
                                   spec_.ground_truth.values, 200, b, 1e-2);
  ASSERT_EQ(clean.true_states.size(), noisy.true_states.size());
  for (size_t i = 0; i < clean.true_states.size(); ++i) {
    EXPECT_EQ(clean.true_states[i], noisy.true_states[i]);
  }
  EXPECT_NE(noisy.states[5], noisy.true_states[5]);
}

TEST_P(EnvTest, ReplayOfRecordedActionsIsExact) {
  Rng rng(12);
  const Controller c = [](const Eigen::VectorXd& obs, Eigen::VectorXd* a) {
    a->setConstant(std::sin(3.0 * obs[0]));
  };
  const Trajectory traj =
      Rollout(spec_, c, spec_.ground_truth.values, 200, rng, 0.0);
  const Trajectory replay = ReplayActions(spec_, spec_.ground_truth.values,
                                          traj.states[0], traj.actions);
  ASSERT_EQ(replay.states.size(), traj.states.size());
  for (size_t i = 0; i < traj.states.size(); ++i) {
    EXPECT_EQ(replay.states[i], traj.states[i]);
  }
}

TEST_P(EnvTest, UnmodeledSetup) {
  const UnmodeledSetup u = MakeUnmodeled(spec_);
  EXPECT_EQ(u.target_xi.values, spec_.ground_truth.values);
  EXPECT_EQ(static_cast<int>(u.free_indices.size()),
            spec_.n_xi() - static_cast<int>(spec_.unmodeled_indices.size()));
  EXPECT_EQ(u.reduced_lo.size(), static_cast<int>(u.free_indices.size()));
  for (int i : spec_.unmodeled_indices) {
    EXPECT_EQ(u.source_xi.values[i], 0.8 * spec_.ground_truth.values[i]);
  }
  for (size_t j = 0; j < u.free_indices.size(); ++j) {
    const int i = u.free_indices[j];
    EXPECT_EQ(u.source_xi.values[i], spec_.ground_truth.values[i]);
    EXPECT_EQ(u.reduced_lo[j], spec_.xi_lo[i]);
    EXPECT_EQ(u.reduced_hi[j], spec_.xi_hi[i]);
  }
}

INSTANTIATE_TEST_SUITE_P(AllEnvironments, EnvTest,
                         ::testing::Values("pendulum", "cartpole", "acrobot"));

TEST(PendulumTest, UprightEquilibriumIsFixed) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const EnvState up{Eigen::Vector2d(0.0, 0.0), 0};
  const StepResult r = Step(spec, up, Eigen::VectorXd::Zero(1),
                            spec.ground_truth.values);
  EXPECT_EQ(r.next.x, up.x);
}

// Hand-written pendulum equation of motion, independent of the library.
TEST(PendulumTest, AccelerationMatchesClosedForm) {
  const auto d = MakePendulumDynamics();
  const double m = 1.3, l = 0.7, b = 0.2, theta = 0.4, omega = -1.1, a = 0.5;
  const double xi[3] = {m, l, b};
  double qdd;
  d->Acceleration(&theta, &omega, &a, xi, &qdd);
  const double expected = 3.0 * 9.81 / (2.0 * l) * std::sin(theta) +
                          3.0 / (m * l * l) * (a - b * omega);
  EXPECT_NEAR(qdd, expected, 1e-12);
}

TEST(PendulumTest, SingleStepEnergyNearRest) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const Eigen::VectorXd xi = Frictionless(spec);
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const EnvState s = Reset(spec, rng);
    const EnvState next =
        Step(spec, s, Eigen::VectorXd::Zero(1), xi).next;
    EXPECT_NEAR(spec.dynamics->Energy(next.x.data(), xi.data()),
                spec.dynamics->Energy(s.x.data(), xi.data()), 1e-4);
  }
}

TEST(PendulumTest, UnmodeledDampingIsScaled) {
  const EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  const UnmodeledSetup u = MakeUnmodeled(spec);
  EXPECT_DOUBLE_EQ(u.source_xi.values[2], 0.8 * 0.05);
  EXPECT_EQ(u.reduced_lo.size(), 2);
}

TEST(EnvironmentTest, EmptyUnmodeledSetIsRejected) {
  EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  spec.unmodeled_indices.clear();
  EXPECT_THROW(MakeUnmodeled(spec), std::invalid_argument);
}

TEST(EnvironmentTest, DifficultyLadder) {
  const EnvironmentSpec p = MakeDefaultSpec("pendulum");
  const EnvironmentSpec c = MakeDefaultSpec("cartpole");
  const EnvironmentSpec a = MakeDefaultSpec("acrobot");
  EXPECT_LE(p.n_s(), c.n_s());
  EXPECT_LE(c.n_s(), a.n_s());
  EXPECT_LE(p.n_xi(), c.n_xi());
  EXPECT_LE(c.n_xi(), a.n_xi());
  EXPECT_LE(p.unmodeled_indices.size(), c.unmodeled_indices.size());
  EXPECT_LE(c.unmodeled_indices.size(), a.unmodeled_indices.size());
}

TEST(EnvironmentTest, UnknownNameThrows) {
  EXPECT_THROW(MakeDefaultSpec("hopper"), std::invalid_argument);
}

// Empirical variance of the recorded measurement noise.
TEST(EnvironmentTest, NoiseVarianceIsCalibrated) {
  EnvironmentSpec spec = MakeDefaultSpec("pendulum");
  Rng rng(77);
  double sum = 0.0, sum_sq = 0.0;
  int64_t count = 0;
  while (count < 200000) {
    const Trajectory t = Rollout(spec, ZeroController(),
                                 spec.ground_truth.values, 200, rng, 1e-4);
    for (size_t i = 0; i < t.states.size(); ++i) {
      const Eigen::VectorXd r = t.states[i] - t.true_states[i];
      sum += r.sum();
      sum_sq += r.squaredNorm();
      count += r.size();
    }
  }
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  EXPECT_NEAR(var, 1e-4, 0.05e-4);
}

}  // namespace
}  // namespace adr
