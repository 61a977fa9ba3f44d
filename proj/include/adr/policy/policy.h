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

#ifndef ADR_POLICY_POLICY_H_
#define ADR_POLICY_POLICY_H_

#include <string>
#include <vector>

#include <Eigen/Core>

#include "adr/envs/environment.h"

namespace adr {

enum class Architecture { kLinear, kMlp };

struct PolicyShape {
  Architecture architecture = Architecture::kMlp;
  int n_in = 0;
  int n_out = 0;
  std::vector<int> hidden = {32, 32};  // ignored for kLinear

  int NumWeights() const;
  bool operator==(const PolicyShape&) const = default;
};

std::string ArchitectureName(Architecture a);
// Throws std::invalid_argument for names other than "linear" and "mlp".
Architecture ParseArchitecture(const std::string& name);

// Deterministic policy: tanh hidden layers and a tanh output scaled to the
// action box, so actions can never leave the bounds.
class Policy {
 public:
  static constexpr int kMaxWidth = 256;

  Policy() = default;
  // Throws std::invalid_argument if the weight count does not match.
  Policy(PolicyShape shape, Eigen::VectorXd action_lo,
         Eigen::VectorXd action_hi, Eigen::VectorXd weights);

  static Policy Zero(const PolicyShape& shape, const EnvironmentSpec& spec);
  static PolicyShape ShapeFor(const EnvironmentSpec& spec,
                              Architecture architecture,
                              const std::vector<int>& hidden);

  // Thread-safe; uses no heap memory.
  void Act(const Eigen::VectorXd& obs, Eigen::VectorXd* action) const;
  Eigen::VectorXd Act(const Eigen::VectorXd& obs) const;

  Controller AsController() const;

  const PolicyShape& shape() const { return shape_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const Eigen::VectorXd& action_lo() const { return action_lo_; }
  const Eigen::VectorXd& action_hi() const { return action_hi_; }

  bool operator==(const Policy& other) const;

 private:
  PolicyShape shape_;
  Eigen::VectorXd action_lo_;
  Eigen::VectorXd action_hi_;
  Eigen::VectorXd weights_;
};

// Plain-text artifact; weights are written as hex floats and reload
// bit-exactly. Both throw std::runtime_error with the path on I/O errors.
void SavePolicy(const Policy& policy, const std::string& path);
Policy LoadPolicy(const std::string& path);

}  // namespace adr

#endif  // ADR_POLICY_POLICY_H_
