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

#include "adr/envs/dynamics.h"

#include <cmath>
#include <numbers>

namespace adr {
namespace {

using std::numbers::pi;

class Pendulum final : public Dynamics {
 public:
  std::string name() const override { return "pendulum"; }
  int dof() const override { return 1; }
  int obs_dim() const override { return 3; }
  int action_dim() const override { return 1; }
  int xi_dim() const override { return 3; }

  std::vector<std::string> ParameterNames() const override {
    return {"mass", "length", "damping"};
  }

  void Acceleration(const double* q, const double* qd, const double* action,
                    const double* xi, double* qdd) const override {
    const double m = xi[0], l = xi[1], b = xi[2];
    qdd[0] = 3.0 * kGravity / (2.0 * l) * std::sin(q[0]) +
             3.0 / (m * l * l) * (action[0] - b * qd[0]);
  }

  void Observe(const double* s, double* obs) const override {
    obs[0] = std::cos(s[0]);
    obs[1] = std::sin(s[0]);
    obs[2] = s[1];
  }

  double Reward(const double* s, const double* a) const override {
    const double th = WrapAngle(s[0]);
    return -(th * th + 0.1 * s[1] * s[1] + 0.001 * a[0] * a[0]);
  }

  double Energy(const double* s, const double* xi) const override {
    const double m = xi[0], l = xi[1];
    return 0.5 * (m * l * l / 3.0) * s[1] * s[1] +
           m * kGravity * 0.5 * l * std::cos(s[0]);
  }

  Eigen::VectorXd RestState() const override {
    return Eigen::Vector2d(pi, 0.0);
  }
};

// Barto-style cart and uniform pole, written as the 2x2 mass-matrix system so
// the viscous friction terms enter as generalized forces.
class Cartpole final : public Dynamics {
 public:
  std::string name() const override { return "cartpole"; }
  int dof() const override { return 2; }
  int obs_dim() const override { return 5; }
  int action_dim() const override { return 1; }
  int xi_dim() const override { return 5; }

  std::vector<std::string> ParameterNames() const override {
    return {"cart_mass", "pole_mass", "pole_length", "cart_friction",
            "joint_friction"};
  }

  void Acceleration(const double* q, const double* qd, const double* action,
                    const double* xi, double* qdd) const override {
    const double mc = xi[0], mp = xi[1], half = 0.5 * xi[2];
    const double bc = xi[3], bp = xi[4];
    const double s = std::sin(q[1]), c = std::cos(q[1]);
    const double total = mc + mp;
    const double a11 = total;
    const double a12 = mp * half * c;
    const double a22 = 4.0 / 3.0 * mp * half * half;
    const double r1 =
        action[0] - bc * qd[0] + mp * half * qd[1] * qd[1] * s;
    const double r2 = mp * kGravity * half * s - bp * qd[1];
    const double det = a11 * a22 - a12 * a12;
    qdd[0] = (a22 * r1 - a12 * r2) / det;
    qdd[1] = (a11 * r2 - a12 * r1) / det;
  }

  void Observe(const double* s, double* obs) const override {
    obs[0] = s[0];
    obs[1] = s[2];
    obs[2] = std::sin(s[1]);
    obs[3] = std::cos(s[1]);
    obs[4] = s[3];
  }

  double Reward(const double* s, const double* a) const override {
    return 0.5 * (1.0 + std::cos(s[1])) - 0.01 * s[0] * s[0] -
           1e-4 * a[0] * a[0];
  }

  double Energy(const double* s, const double* xi) const override {
    const double mc = xi[0], mp = xi[1], half = 0.5 * xi[2];
    const double xd = s[2], thd = s[3];
    return 0.5 * (mc + mp) * xd * xd +
           mp * half * xd * thd * std::cos(s[1]) +
           2.0 / 3.0 * mp * half * half * thd * thd +
           mp * kGravity * half * std::cos(s[1]);
  }

  Eigen::VectorXd RestState() const override {
    return Eigen::Vector4d(0.0, pi, 0.0, 0.0);
  }

  bool OutsideWorkspace(const double* s) const override {
    return std::abs(s[0]) > 5.0;
  }
};

// Two uniform links with torque on both joints.
class Acrobot final : public Dynamics {
 public:
  std::string name() const override { return "acrobot"; }
  int dof() const override { return 2; }
  int obs_dim() const override { return 6; }
  int action_dim() const override { return 2; }
  int xi_dim() const override { return 6; }

  std::vector<std::string> ParameterNames() const override {
    return {"m1", "m2", "l1", "l2", "b1", "b2"};
  }

  void Acceleration(const double* q, const double* qd, const double* action,
                    const double* xi, double* qdd) const override {
    const double m1 = xi[0], m2 = xi[1], l1 = xi[2], l2 = xi[3];
    const double b1 = xi[4], b2 = xi[5];
    const double lc1 = 0.5 * l1, lc2 = 0.5 * l2;
    const double i1 = m1 * l1 * l1 / 12.0, i2 = m2 * l2 * l2 / 12.0;
    const double c2 = std::cos(q[1]), s2 = std::sin(q[1]);
    const double s12 = std::sin(q[0] + q[1]);

    const double m11 =
        m1 * lc1 * lc1 + i1 + m2 * (l1 * l1 + lc2 * lc2 + 2 * l1 * lc2 * c2) +
        i2;
    const double m12 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + i2;
    const double m22 = m2 * lc2 * lc2 + i2;

    const double h = m2 * l1 * lc2 * s2;
    const double bias1 = -h * qd[1] * qd[1] - 2.0 * h * qd[0] * qd[1] +
                         (m1 * lc1 + m2 * l1) * kGravity * std::sin(q[0]) +
                         m2 * lc2 * kGravity * s12;
    const double bias2 = h * qd[0] * qd[0] + m2 * lc2 * kGravity * s12;

    const double r1 = action[0] - b1 * qd[0] - bias1;
    const double r2 = action[1] - b2 * qd[1] - bias2;
    const double det = m11 * m22 - m12 * m12;
    qdd[0] = (m22 * r1 - m12 * r2) / det;
    qdd[1] = (m11 * r2 - m12 * r1) / det;
  }

  void Observe(const double* s, double* obs) const override {
    obs[0] = std::sin(s[0]);
    obs[1] = std::cos(s[0]);
    obs[2] = std::sin(s[1]);
    obs[3] = std::cos(s[1]);
    obs[4] = s[2];
    obs[5] = s[3];
  }

  double Reward(const double* s, const double* a) const override {
    // tip height with unit links, in [-2, 2]
    const double height = -std::cos(s[0]) - std::cos(s[0] + s[1]);
    return 0.25 * (height + 2.0) - 1e-4 * (a[0] * a[0] + a[1] * a[1]);
  }

  double Energy(const double* s, const double* xi) const override {
    const double m1 = xi[0], m2 = xi[1], l1 = xi[2], l2 = xi[3];
    const double lc1 = 0.5 * l1, lc2 = 0.5 * l2;
    const double i1 = m1 * l1 * l1 / 12.0, i2 = m2 * l2 * l2 / 12.0;
    const double c2 = std::cos(s[1]);
    const double m11 =
        m1 * lc1 * lc1 + i1 + m2 * (l1 * l1 + lc2 * lc2 + 2 * l1 * lc2 * c2) +
        i2;
    const double m12 = m2 * (lc2 * lc2 + l1 * lc2 * c2) + i2;
    const double m22 = m2 * lc2 * lc2 + i2;
    const double w1 = s[2], w2 = s[3];
    const double kinetic =
        0.5 * (m11 * w1 * w1 + 2.0 * m12 * w1 * w2 + m22 * w2 * w2);
    const double potential =
        -m1 * kGravity * lc1 * std::cos(s[0]) -
        m2 * kGravity * (l1 * std::cos(s[0]) + lc2 * std::cos(s[0] + s[1]));
    return kinetic + potential;
  }

  Eigen::VectorXd RestState() const override {
    return Eigen::Vector4d::Zero();
  }
};

}  // namespace

double WrapAngle(double angle) {
  double w = std::fmod(angle + pi, 2.0 * pi);
  if (w < 0) w += 2.0 * pi;
  return w - pi;
}

std::shared_ptr<const Dynamics> MakePendulumDynamics() {
  return std::make_shared<Pendulum>();
}

std::shared_ptr<const Dynamics> MakeCartpoleDynamics() {
  return std::make_shared<Cartpole>();
}

std::shared_ptr<const Dynamics> MakeAcrobotDynamics() {
  return std::make_shared<Acrobot>();
}

std::shared_ptr<const Dynamics> MakeDynamics(const std::string& name) {
  if (name == "pendulum") return MakePendulumDynamics();
  if (name == "cartpole") return MakeCartpoleDynamics();
  if (name == "acrobot") return MakeAcrobotDynamics();
  return nullptr;
}

}  // namespace adr
