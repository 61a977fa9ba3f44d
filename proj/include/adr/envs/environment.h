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

#ifndef ADR_ENVS_ENVIRONMENT_H_
#define ADR_ENVS_ENVIRONMENT_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adr/common/random.h"
#include "adr/envs/dynamics.h"

namespace adr {

// Physical dynamics parameters, one entry per named dimension.
struct DynamicsVector {
  Eigen::VectorXd values;
  std::vector<std::string> names;

  int size() const { return static_cast<int>(values.size()); }
};

struct EnvironmentSpec {
  std::string name;
  std::shared_ptr<const Dynamics> dynamics;

  double dt = 0.02;
  int substeps = 5;
  int horizon = 500;

  Eigen::VectorXd action_lo;
  Eigen::VectorXd action_hi;

  DynamicsVector ground_truth;
  // physical search space
  Eigen::VectorXd xi_lo;
  Eigen::VectorXd xi_hi;

  std::vector<int> unmodeled_indices;
  double noise_variance = 0.0;

  // Undiscounted return used for early stopping and normalization.
  double reward_threshold = 0.0;
  // Return of the zero-action policy. Only used by cost-style rewards
  // (negative_rewards == true) as the 0.0 anchor of the normalized return.
  double worst_return = 0.0;
  bool negative_rewards = false;

  // half-width of the uniform reset perturbation around the rest state
  double reset_spread = 0.1;
  double velocity_limit = 50.0;

  int n_s() const { return dynamics->obs_dim(); }
  int n_a() const { return dynamics->action_dim(); }
  int n_xi() const { return dynamics->xi_dim(); }
  int latent_dim() const { return dynamics->latent_dim(); }

  // Throws std::invalid_argument naming the violated invariant.
  void Validate() const;
};

// Built-in defaults for "pendulum", "cartpole" and "acrobot". The shipped
// configuration file carries the same values and can override them.
EnvironmentSpec MakeDefaultSpec(const std::string& name);
std::vector<std::string> KnownEnvironments();

struct EnvState {
  Eigen::VectorXd x;  // latent (q, qd)
  int t = 0;
};

enum class StepStatus { kOk, kFailed, kDiverged };

struct StepResult {
  EnvState next;
  double reward = 0.0;
  bool done = false;
  StepStatus status = StepStatus::kOk;
};

// Semi-implicit Euler over spec.substeps inner steps. The action is clamped to
// the action bounds. Throws std::invalid_argument for non-finite state/xi or
// mismatched dimensions.
StepResult Step(const EnvironmentSpec& spec, const EnvState& state,
                const Eigen::VectorXd& action, const Eigen::VectorXd& xi);

// Uniform perturbation of the rest configuration, t = 0.
EnvState Reset(const EnvironmentSpec& spec, Rng& rng);

Eigen::VectorXd Observe(const EnvironmentSpec& spec, const Eigen::VectorXd& x);

// Stateful wrapper used for replay. The spec must outlive the simulator.
class Simulator {
 public:
  Simulator(const EnvironmentSpec& spec, const Eigen::VectorXd& xi);

  void Reset(Rng& rng);
  // Replaces the dynamics parameters; the state is kept.
  void SetXi(const Eigen::VectorXd& xi);
  // Throws std::invalid_argument on dimension mismatch or non-finite input.
  void SetState(const Eigen::VectorXd& x, int t = 0);
  EnvState GetState() const { return {state_, t_}; }
  const Eigen::VectorXd& state() const { return state_; }
  int time() const { return t_; }
  const Eigen::VectorXd& xi() const { return xi_; }
  const EnvironmentSpec& spec() const { return *spec_; }

  void Observe(Eigen::VectorXd* obs) const;

  struct Outcome {
    double reward = 0.0;
    bool done = false;
    StepStatus status = StepStatus::kOk;
  };
  Outcome Step(const Eigen::VectorXd& action);

 private:
  const EnvironmentSpec* spec_;
  Eigen::VectorXd xi_;
  Eigen::VectorXd state_;
  Eigen::VectorXd clamped_;
  Eigen::VectorXd qdd_;
  int t_ = 0;
};

// Maps an observation to an action. Must be safe to call concurrently.
using Controller =
    std::function<void(const Eigen::VectorXd& obs, Eigen::VectorXd* action)>;

struct TrajectoryMeta {
  std::string strategy;
  int iteration = 0;
  uint64_t seed = 0;
  double noise_variance = 0.0;
  // iteration of the policy that collected the data, -1 if none
  int policy_iteration = -1;
};

// Recorded episode. states holds the measured latent states (true state plus
// observation noise) and has one more entry than actions.
struct Trajectory {
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> rewards;
  // simulator states behind the measurements; diagnostic only, not persisted
  std::vector<Eigen::VectorXd> true_states;
  bool done = false;
  bool diverged = false;
  TrajectoryMeta meta;

  int size() const { return static_cast<int>(actions.size()); }
  double Return() const;
};

// Closed-loop episode from Reset(rng). Gaussian noise of the given variance
// is added to every recorded state; the controller acts on the noisy
// observation. Non-finite dynamics truncate the episode with diverged = true.
Trajectory Rollout(const EnvironmentSpec& spec, const Controller& controller,
                   const Eigen::VectorXd& xi, int max_steps, Rng& rng,
                   double noise_variance);

// Noise-free closed-loop episode from a given latent state.
Trajectory RolloutFrom(const EnvironmentSpec& spec,
                       const Controller& controller, const Eigen::VectorXd& xi,
                       const Eigen::VectorXd& initial, int max_steps);

// Open-loop replay of recorded actions from a given latent state.
Trajectory ReplayActions(const EnvironmentSpec& spec, const Eigen::VectorXd& xi,
                         const Eigen::VectorXd& initial,
                         const std::vector<Eigen::VectorXd>& actions);

struct UnmodeledSetup {
  DynamicsVector target_xi;    // ground truth, used by the target domain
  DynamicsVector source_xi;    // ground truth with unmodeled dims at 80%
  std::vector<int> free_indices;  // dims left to inference
  Eigen::VectorXd reduced_lo;
  Eigen::VectorXd reduced_hi;
};

inline constexpr double kUnmodeledScale = 0.8;

// Throws std::invalid_argument if the spec has no unmodeled dimensions.
UnmodeledSetup MakeUnmodeled(const EnvironmentSpec& spec);

}  // namespace adr

#endif  // ADR_ENVS_ENVIRONMENT_H_
