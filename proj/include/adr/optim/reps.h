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

#ifndef ADR_OPTIM_REPS_H_
#define ADR_OPTIM_REPS_H_

#include <vector>

#include <Eigen/Core>

#include "adr/dist/distribution.h"

namespace adr {

struct RepsConfig {
  double kl_bound = 1.0;
  int samples_per_update = 1000;
  int updates_per_iteration = 5;
  double variance_floor = 1e-6;
  // With finite samples the weighted fit can overshoot the bound that the
  // dual enforces on the weights. When set, the temperature is raised until
  // KL(new || old) <= kl_bound holds for the fitted Gaussian itself.
  bool enforce_kl = true;

  void Validate() const;
};

struct RepsUpdateResult {
  Gaussian dist;
  double eta = 0.0;
  // solution of the dual before the trust-region safeguard
  double dual_eta = 0.0;
  // normalized sample weights; zero for samples with non-finite cost
  Eigen::VectorXd weights;
  // KL(weights || uniform over the finite samples)
  double weight_kl = 0.0;
  // true when no sample had a finite cost and dist is returned unchanged
  bool skipped = false;
};

// One episodic REPS step for a diagonal Gaussian search distribution.
// Samples are the unclamped draws from dist; costs are minimized. The
// temperature solves the dual by bisection in log space over [1e-8, 1e8] and
// the new distribution is the weighted maximum-likelihood fit, with variances
// floored at variance_floor.
RepsUpdateResult RepsUpdate(const Gaussian& dist,
                            const std::vector<Eigen::VectorXd>& samples,
                            const std::vector<double>& costs,
                            const RepsConfig& config);

}  // namespace adr

#endif  // ADR_OPTIM_REPS_H_
