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

#ifndef ADR_OPTIM_GP_H_
#define ADR_OPTIM_GP_H_

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "adr/common/random.h"

namespace adr {

struct GpHyper {
  double length_scale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 1e-4;
};

struct GpPosterior {
  double mean = 0.0;
  double var = 0.0;
};

// Zero-mean Gaussian process with a squared-exponential kernel. Rows of x
// are inputs. If the Gram matrix is not numerically positive definite,
// diagonal jitter from 1e-10 up to 1e-6 (relative to the signal variance) is
// added before giving up with std::runtime_error.
class GpModel {
 public:
  static GpModel Fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const GpHyper& hyper);

  GpPosterior Predict(const Eigen::VectorXd& point) const;
  double Kernel(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  const GpHyper& hyper() const { return hyper_; }
  double jitter() const { return jitter_; }
  int dims() const { return static_cast<int>(x_.cols()); }

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  GpHyper hyper_;
  double jitter_ = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
};

// Closed-form expected improvement over best_y for maximization.
double ExpectedImprovement(const GpModel& model, const Eigen::VectorXd& point,
                           double best_y);

// Maximizes expected improvement over the model's best observed target
// inside [lo, hi] from random starts refined by compass search.
Eigen::VectorXd BoSuggest(const GpModel& model, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, Rng& rng,
                          int starts = 256);

}  // namespace adr

#endif  // ADR_OPTIM_GP_H_
