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

#ifndef ADR_ENVS_DYNAMICS_H_
#define ADR_ENVS_DYNAMICS_H_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace adr {

inline constexpr double kGravity = 9.81;

// Closed-form continuous-time model of one system. The latent state is laid
// out as (q, qd) with dof() coordinates followed by dof() velocities.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual std::string name() const = 0;
  virtual int dof() const = 0;
  virtual int obs_dim() const = 0;
  virtual int action_dim() const = 0;
  virtual int xi_dim() const = 0;
  int latent_dim() const { return 2 * dof(); }

  virtual std::vector<std::string> ParameterNames() const = 0;

  // qdd = f(q, qd, action; xi)
  virtual void Acceleration(const double* q, const double* qd,
                            const double* action, const double* xi,
                            double* qdd) const = 0;

  virtual void Observe(const double* latent, double* obs) const = 0;

  // R(s_t, a_t, s_{t+1}); the shaped terms only look at the next state.
  virtual double Reward(const double* latent_next,
                        const double* action) const = 0;

  // Total mechanical energy. Only meaningful for the conservative part.
  virtual double Energy(const double* latent, const double* xi) const = 0;

  virtual Eigen::VectorXd RestState() const = 0;

  // Extra failure condition on top of the velocity limit.
  virtual bool OutsideWorkspace(const double* /*latent*/) const {
    return false;
  }
};

// Pendulum swing-up. q = angle from upright. xi = (mass, length, damping).
std::shared_ptr<const Dynamics> MakePendulumDynamics();

// Cartpole swing-up with viscous friction. q = (x, angle from upright).
// xi = (cart mass, pole mass, pole length, cart friction, joint friction).
std::shared_ptr<const Dynamics> MakeCartpoleDynamics();

// Fully actuated acrobot. q = (shoulder angle from hanging, elbow angle).
// xi = (m1, m2, l1, l2, b1, b2).
std::shared_ptr<const Dynamics> MakeAcrobotDynamics();

// Returns nullptr for unknown names.
std::shared_ptr<const Dynamics> MakeDynamics(const std::string& name);

// Wraps an angle to [-pi, pi).
double WrapAngle(double angle);

}  // namespace adr

#endif  // ADR_ENVS_DYNAMICS_H_
