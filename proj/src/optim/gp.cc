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

#include "adr/optim/gp.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace adr {

GpModel GpModel::Fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                     const GpHyper& hyper) {
  if (x.rows() < 1 || x.rows() != y.size()) {
    throw std::invalid_argument("gp: need matching, non-empty x and y");
  }
  if (!x.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("gp: non-finite training data");
  }
  if (!(hyper.length_scale > 0.0) || !(hyper.signal_variance > 0.0) ||
      !(hyper.noise_variance >= 0.0)) {
    throw std::invalid_argument("gp: invalid hyperparameters");
  }
  GpModel model;
  model.x_ = x;
  model.y_ = y;
  model.hyper_ = hyper;
  const int n = static_cast<int>(x.rows());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      gram(i, j) = gram(j, i) = model.Kernel(x.row(i), x.row(j));
    }
  }
  gram.diagonal().array() += hyper.noise_variance;

  for (double jitter = 0.0; jitter <= 1e-6 * (1.0 + 1e-9);
       jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0) {
    Eigen::MatrixXd k = gram;
    k.diagonal().array() += jitter * hyper.signal_variance;
    model.llt_.compute(k);
    if (model.llt_.info() == Eigen::Success &&
        model.llt_.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
      model.jitter_ = jitter;
      model.alpha_ = model.llt_.solve(y);
      if (model.alpha_.allFinite()) return model;
    }
  }
  throw std::runtime_error("gp: Gram matrix is not positive definite");
}

double GpModel::Kernel(const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) const {
  const double l = hyper_.length_scale;
  return hyper_.signal_variance *
         std::exp(-0.5 * (a - b).squaredNorm() / (l * l));
}

GpPosterior GpModel::Predict(const Eigen::VectorXd& point) const {
  if (point.size() != x_.cols()) {
    throw std::invalid_argument("gp: query dimension mismatch");
  }
  const int n = static_cast<int>(x_.rows());
  Eigen::VectorXd k(n);
  for (int i = 0; i < n; ++i) k[i] = Kernel(point, x_.row(i));
  GpPosterior post;
  post.mean = k.dot(alpha_);
  const Eigen::VectorXd v = llt_.matrixL().solve(k);
  post.var = std::max(0.0, hyper_.signal_variance - v.squaredNorm());
  return post;
}

double ExpectedImprovement(const GpModel& model, const Eigen::VectorXd& point,
                           double best_y) {
  const GpPosterior post = model.Predict(point);
  const double sd = std::sqrt(post.var);
  const double gain = post.mean - best_y;
  if (sd < 1e-12) return std::max(gain, 0.0);
  const double z = gain / sd;
  const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
  return gain * cdf + sd * pdf;
}

Eigen::VectorXd BoSuggest(const GpModel& model, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, Rng& rng, int starts) {
  const int d = model.dims();
  if (lo.size() != d || hi.size() != d || (lo.array() > hi.array()).any()) {
    throw std::invalid_argument("bo_suggest: invalid bounds");
  }
  if (starts < 1) throw std::invalid_argument("bo_suggest: starts < 1");
  const double best_y = model.y().maxCoeff();
  const Eigen::VectorXd range = hi - lo;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Eigen::VectorXd best_x = lo + 0.5 * range;
  double best_ei = -1.0;
  for (int s = 0; s < starts; ++s) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i) x[i] = lo[i] + unit(rng) * range[i];
    double ei = ExpectedImprovement(model, x, best_y);
    double step = 0.1;
    while (step > 1e-6) {
      bool moved = false;
      for (int i = 0; i < d && !moved; ++i) {
        for (double sign : {1.0, -1.0}) {
          Eigen::VectorXd trial = x;
          trial[i] = std::clamp(x[i] + sign * step * range[i], lo[i], hi[i]);
          const double v = ExpectedImprovement(model, trial, best_y);
          if (v > ei) {
            x = trial;
            ei = v;
            moved = true;
            break;
          }
        }
      }
      if (!moved) step *= 0.5;
    }
    if (ei > best_ei) {
      best_ei = ei;
      best_x = x;
    }
  }
  return best_x;
}

}  // namespace adr
