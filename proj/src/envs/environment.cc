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

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace adr {
namespace {

bool AllFinite(const Eigen::VectorXd& v) { return v.allFinite(); }

// Semi-implicit Euler: velocities first, then positions with the new
// velocities. Returns false if the state became non-finite.
bool Integrate(const EnvironmentSpec& spec, const Eigen::VectorXd& xi,
               const Eigen::VectorXd& action, Eigen::VectorXd* state,
               Eigen::VectorXd* qdd) {
  const int dof = spec.dynamics->dof();
  const double h = spec.dt / spec.substeps;
  double* q = state->data();
  double* qd = state->data() + dof;
  for (int k = 0; k < spec.substeps; ++k) {
    spec.dynamics->Acceleration(q, qd, action.data(), xi.data(), qdd->data());
    for (int i = 0; i < dof; ++i) qd[i] += h * (*qdd)[i];
    for (int i = 0; i < dof; ++i) q[i] += h * qd[i];
  }
  return state->allFinite();
}

bool Failed(const EnvironmentSpec& spec, const Eigen::VectorXd& x) {
  const int dof = spec.dynamics->dof();
  for (int i = 0; i < dof; ++i) {
    if (std::abs(x[dof + i]) > spec.velocity_limit) return true;
  }
  return spec.dynamics->OutsideWorkspace(x.data());
}

EnvironmentSpec BaseSpec(std::shared_ptr<const Dynamics> dynamics,
                         Eigen::VectorXd ground_truth) {
  EnvironmentSpec spec;
  spec.name = dynamics->name();
  spec.ground_truth.names = dynamics->ParameterNames();
  spec.ground_truth.values = std::move(ground_truth);
  spec.xi_lo = 0.25 * spec.ground_truth.values;
  spec.xi_hi = 2.5 * spec.ground_truth.values;
  spec.dynamics = std::move(dynamics);
  return spec;
}

}  // namespace

void EnvironmentSpec::Validate() const {
  auto fail = [this](const std::string& what) {
    throw std::invalid_argument("environment '" + name + "': " + what);
  };
  if (!dynamics) fail("no dynamics model");
  if (dt <= 0 || !std::isfinite(dt)) fail("dt must be positive");
  if (substeps < 1) fail("substeps must be >= 1");
  if (horizon < 200) fail("horizon must be >= 200");
  if (action_lo.size() != n_a() || action_hi.size() != n_a()) {
    fail("action bounds must have " + std::to_string(n_a()) + " entries");
  }
  if ((action_lo.array() >= action_hi.array()).any()) {
    fail("action bounds must satisfy lo < hi");
  }
  if (ground_truth.size() != n_xi() || xi_lo.size() != n_xi() ||
      xi_hi.size() != n_xi()) {
    fail("dynamics vectors must have " + std::to_string(n_xi()) + " entries");
  }
  if (!AllFinite(ground_truth.values) || !AllFinite(xi_lo) ||
      !AllFinite(xi_hi)) {
    fail("dynamics parameters must be finite");
  }
  if ((xi_lo.array() >= xi_hi.array()).any()) {
    fail("search space must satisfy lo < hi");
  }
  if ((ground_truth.values.array() <= xi_lo.array()).any() ||
      (ground_truth.values.array() >= xi_hi.array()).any()) {
    fail("ground truth must lie strictly inside the search space");
  }
  if (static_cast<int>(unmodeled_indices.size()) >= n_xi()) {
    fail("too many unmodeled dimensions");
  }
  std::set<int> seen;
  for (int i : unmodeled_indices) {
    if (i < 0 || i >= n_xi() || !seen.insert(i).second) {
      fail("invalid unmodeled index " + std::to_string(i));
    }
  }
  if (noise_variance < 0 || !std::isfinite(noise_variance)) {
    fail("noise variance must be non-negative");
  }
  if (!std::isfinite(reward_threshold)) fail("reward threshold must be finite");
  if (negative_rewards && !(reward_threshold > worst_return)) {
    fail("reward threshold must exceed the worst-return anchor");
  }
  if (!negative_rewards && !(reward_threshold > 0)) {
    fail("reward threshold must be positive");
  }
}

EnvironmentSpec MakeDefaultSpec(const std::string& name) {
  if (name == "pendulum") {
    EnvironmentSpec spec =
        BaseSpec(MakePendulumDynamics(), Eigen::Vector3d(1.0, 1.0, 0.05));
    spec.action_lo = Eigen::VectorXd::Constant(1, -6.0);
    spec.action_hi = Eigen::VectorXd::Constant(1, 6.0);
    spec.unmodeled_indices = {2};
    spec.noise_variance = 1e-4;
    spec.negative_rewards = true;
    spec.reward_threshold = -693.7;
    spec.worst_return = -4874.7;
    return spec;
  }
  if (name == "cartpole") {
    Eigen::VectorXd gt(5);
    gt << 1.0, 0.3, 1.0, 0.1, 0.01;
    EnvironmentSpec spec = BaseSpec(MakeCartpoleDynamics(), gt);
    spec.action_lo = Eigen::VectorXd::Constant(1, -10.0);
    spec.action_hi = Eigen::VectorXd::Constant(1, 10.0);
    spec.unmodeled_indices = {3, 4};
    spec.noise_variance = 1e-4;
    spec.reward_threshold = 388.6;
    return spec;
  }
  if (name == "acrobot") {
    Eigen::VectorXd gt(6);
    gt << 1.0, 1.0, 1.0, 1.0, 0.05, 0.05;
    EnvironmentSpec spec = BaseSpec(MakeAcrobotDynamics(), gt);
    spec.action_lo = Eigen::VectorXd::Constant(2, -8.0);
    spec.action_hi = Eigen::VectorXd::Constant(2, 8.0);
    spec.unmodeled_indices = {4, 5};
    spec.noise_variance = 1e-3;
    spec.reward_threshold = 260.8;
    return spec;
  }
  throw std::invalid_argument("unknown environment '" + name + "'");
}

std::vector<std::string> KnownEnvironments() {
  return {"pendulum", "cartpole", "acrobot"};
}

StepResult Step(const EnvironmentSpec& spec, const EnvState& state,
                const Eigen::VectorXd& action, const Eigen::VectorXd& xi) {
  Simulator sim(spec, xi);
  sim.SetState(state.x, state.t);
  Simulator::Outcome out = sim.Step(action);
  return {sim.GetState(), out.reward, out.done, out.status};
}

EnvState Reset(const EnvironmentSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> u(-spec.reset_spread,
                                           spec.reset_spread);
  EnvState s;
  s.x = spec.dynamics->RestState();
  for (int i = 0; i < s.x.size(); ++i) s.x[i] += u(rng);
  s.t = 0;
  return s;
}

Eigen::VectorXd Observe(const EnvironmentSpec& spec,
                        const Eigen::VectorXd& x) {
  Eigen::VectorXd obs(spec.n_s());
  spec.dynamics->Observe(x.data(), obs.data());
  return obs;
}

Simulator::Simulator(const EnvironmentSpec& spec, const Eigen::VectorXd& xi)
    : spec_(&spec),
      state_(spec.dynamics->RestState()),
      clamped_(spec.n_a()),
      qdd_(spec.dynamics->dof()) {
  SetXi(xi);
}

void Simulator::SetXi(const Eigen::VectorXd& xi) {
  if (xi.size() != spec_->n_xi()) {
    throw std::invalid_argument("xi has " + std::to_string(xi.size()) +
                                " entries, expected " +
                                std::to_string(spec_->n_xi()));
  }
  if (!xi.allFinite()) {
    throw std::invalid_argument("non-finite dynamics parameters");
  }
  xi_ = xi;
}

void Simulator::Reset(Rng& rng) {
  EnvState s = adr::Reset(*spec_, rng);
  state_ = s.x;
  t_ = 0;
}

void Simulator::SetState(const Eigen::VectorXd& x, int t) {
  if (x.size() != spec_->latent_dim()) {
    throw std::invalid_argument("state has " + std::to_string(x.size()) +
                                " entries, expected " +
                                std::to_string(spec_->latent_dim()));
  }
  if (!x.allFinite()) throw std::invalid_argument("non-finite state");
  if (t < 0 || t > spec_->horizon) {
    throw std::invalid_argument("time index out of range");
  }
  state_ = x;
  t_ = t;
}

void Simulator::Observe(Eigen::VectorXd* obs) const {
  obs->resize(spec_->n_s());
  spec_->dynamics->Observe(state_.data(), obs->data());
}

Simulator::Outcome Simulator::Step(const Eigen::VectorXd& action) {
  if (action.size() != spec_->n_a()) {
    throw std::invalid_argument("action has wrong dimension");
  }
  clamped_ = action.cwiseMax(spec_->action_lo).cwiseMin(spec_->action_hi);
  for (int i = 0; i < clamped_.size(); ++i) {
    if (std::isnan(clamped_[i])) clamped_[i] = 0.0;
  }
  Outcome out;
  const bool finite = Integrate(*spec_, xi_, clamped_, &state_, &qdd_);
  ++t_;
  if (!finite) {
    out.status = StepStatus::kDiverged;
    out.done = true;
    out.reward = 0.0;
    return out;
  }
  out.reward = spec_->dynamics->Reward(state_.data(), clamped_.data());
  if (Failed(*spec_, state_)) {
    out.status = StepStatus::kFailed;
    out.done = true;
  }
  if (t_ >= spec_->horizon) out.done = true;
  return out;
}

double Trajectory::Return() const {
  double total = 0.0;
  for (double r : rewards) total += r;
  return total;
}

namespace {

void Record(const Simulator& sim, const Eigen::VectorXd& measured,
            Trajectory* traj) {
  traj->true_states.push_back(sim.state());
  traj->states.push_back(measured);
}

Trajectory RunEpisode(const EnvironmentSpec& spec, const Controller* controller,
                      const std::vector<Eigen::VectorXd>* actions,
                      Simulator& sim, int max_steps, Rng* noise_rng,
                      double noise_variance) {
  if (max_steps > spec.horizon) {
    throw std::invalid_argument("max_steps exceeds the horizon");
  }
  std::normal_distribution<double> noise(0.0, std::sqrt(noise_variance));
  auto measure = [&](const Eigen::VectorXd& x) {
    Eigen::VectorXd m = x;
    if (noise_variance > 0) {
      for (int i = 0; i < m.size(); ++i) m[i] += noise(*noise_rng);
    }
    return m;
  };

  Trajectory traj;
  traj.meta.noise_variance = noise_variance;
  Record(sim, measure(sim.state()), &traj);

  Eigen::VectorXd obs(spec.n_s());
  Eigen::VectorXd action(spec.n_a());
  for (int t = 0; t < max_steps; ++t) {
    if (controller) {
      spec.dynamics->Observe(traj.states.back().data(), obs.data());
      action.setZero();
      (*controller)(obs, &action);
    } else {
      action = (*actions)[t];
    }
    action = action.cwiseMax(spec.action_lo).cwiseMin(spec.action_hi);
    Simulator::Outcome out = sim.Step(action);
    if (out.status == StepStatus::kDiverged) {
      traj.diverged = true;
      break;
    }
    traj.actions.push_back(action);
    traj.rewards.push_back(out.reward);
    Record(sim, measure(sim.state()), &traj);
    if (out.done) {
      traj.done = true;
      break;
    }
  }
  return traj;
}

}  // namespace

Trajectory Rollout(const EnvironmentSpec& spec, const Controller& controller,
                   const Eigen::VectorXd& xi, int max_steps, Rng& rng,
                   double noise_variance) {
  if (noise_variance < 0) {
    throw std::invalid_argument("noise variance must be non-negative");
  }
  Simulator sim(spec, xi);
  sim.Reset(rng);
  return RunEpisode(spec, &controller, nullptr, sim, max_steps, &rng,
                    noise_variance);
}

Trajectory RolloutFrom(const EnvironmentSpec& spec,
                       const Controller& controller, const Eigen::VectorXd& xi,
                       const Eigen::VectorXd& initial, int max_steps) {
  Simulator sim(spec, xi);
  sim.SetState(initial);
  return RunEpisode(spec, &controller, nullptr, sim, max_steps, nullptr, 0.0);
}

Trajectory ReplayActions(const EnvironmentSpec& spec, const Eigen::VectorXd& xi,
                         const Eigen::VectorXd& initial,
                         const std::vector<Eigen::VectorXd>& actions) {
  Simulator sim(spec, xi);
  sim.SetState(initial);
  const int steps = std::min<int>(actions.size(), spec.horizon);
  return RunEpisode(spec, nullptr, &actions, sim, steps, nullptr, 0.0);
}

UnmodeledSetup MakeUnmodeled(const EnvironmentSpec& spec) {
  if (spec.unmodeled_indices.empty()) {
    throw std::invalid_argument("environment '" + spec.name +
                                "' has no unmodeled dimensions; use the "
                                "vanilla setting instead");
  }
  UnmodeledSetup setup;
  setup.target_xi = spec.ground_truth;
  setup.source_xi = spec.ground_truth;
  std::set<int> frozen(spec.unmodeled_indices.begin(),
                       spec.unmodeled_indices.end());
  for (int i : frozen) {
    setup.source_xi.values[i] = kUnmodeledScale * spec.ground_truth.values[i];
  }
  for (int i = 0; i < spec.n_xi(); ++i) {
    if (!frozen.count(i)) setup.free_indices.push_back(i);
  }
  const int n = static_cast<int>(setup.free_indices.size());
  setup.reduced_lo.resize(n);
  setup.reduced_hi.resize(n);
  for (int k = 0; k < n; ++k) {
    setup.reduced_lo[k] = spec.xi_lo[setup.free_indices[k]];
    setup.reduced_hi[k] = spec.xi_hi[setup.free_indices[k]];
  }
  return setup;
}

}  // namespace adr
