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

#ifndef ADR_OPTIM_CMAES_H_
#define ADR_OPTIM_CMAES_H_

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace adr {

struct CmaState {
  Eigen::VectorXd mean;
  double sigma = 1.0;
  Eigen::MatrixXd cov;
  Eigen::VectorXd path_sigma;
  Eigen::VectorXd path_c;
  int generation = 0;
  int lambda = 0;
};

struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

struct CmaTraceRow {
  int generation = 0;
  int evaluations = 0;
  double best_f = 0.0;        // best ever
  double generation_f = 0.0;  // best of this generation
  double sigma = 0.0;
  Eigen::VectorXd mean;
};

struct CmaOptions {
  int lambda = 0;  // 0 selects 4 + floor(3 ln n)
  int max_evals = 1000;
  std::optional<Box> bounds;
  // stop once best_f <= ftarget
  double ftarget = -std::numeric_limits<double>::infinity();
  // stop once sigma * sqrt(max diag C) < tolx
  double tolx = 1e-12;
  // stop once the condition number of C exceeds this
  double max_condition = 1e14;
  uint64_t seed = 0;
  int threads = 0;
};

struct CmaResult {
  Eigen::VectorXd best_x;
  double best_f = std::numeric_limits<double>::infinity();
  CmaState final_state;
  int evaluations = 0;
  std::vector<CmaTraceRow> trace;
};

// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation and rank-one
// plus rank-mu covariance updates. Non-finite objective values rank last.
// With bounds, infeasible samples are redrawn up to 100 times and then
// clamped. Never evaluates the objective more than max_evals times; a budget
// that is not a multiple of lambda ends with a partial generation that only
// updates the best point. The objective must be safe to call concurrently.
CmaResult CmaesMinimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, double sigma0,
                        const CmaOptions& options);

inline int DefaultLambda(int n) {
  return 4 + static_cast<int>(3.0 * std::log(static_cast<double>(n)));
}

}  // namespace adr

#endif  // ADR_OPTIM_CMAES_H_
