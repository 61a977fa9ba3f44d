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

#include "adr/optim/reps.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adr {
namespace {

constexpr double kEtaLo = 1e-8;
constexpr double kEtaHi = 1e8;
constexpr double kRelTol = 1e-10;

// Weights at temperature eta over shifted costs, and their KL to uniform.
double WeightsAt(const std::vector<double>& shifted, double eta,
                 std::vector<double>* w) {
  const int n = static_cast<int>(shifted.size());
  w->resize(n);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    (*w)[i] = std::exp(-shifted[i] / eta);
    total += (*w)[i];
  }
  double kl = 0.0;
  for (int i = 0; i < n; ++i) {
    (*w)[i] /= total;
    if ((*w)[i] > 0.0) kl += (*w)[i] * std::log((*w)[i] * n);
  }
  return std::max(kl, 0.0);
}

Gaussian Fit(const std::vector<Eigen::VectorXd>& samples,
             const std::vector<int>& finite, const std::vector<double>& w,
             double floor) {
  const int dims = static_cast<int>(samples[finite[0]].size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dims);
  for (size_t j = 0; j < finite.size(); ++j) mean += w[j] * samples[finite[j]];
  Eigen::VectorXd var = Eigen::VectorXd::Zero(dims);
  for (size_t j = 0; j < finite.size(); ++j) {
    var += w[j] * (samples[finite[j]] - mean).cwiseAbs2();
  }
  return {mean, var.cwiseMax(floor)};
}

}  // namespace

void RepsConfig::Validate() const {
  if (!(kl_bound > 0.0) || !std::isfinite(kl_bound)) {
    throw std::invalid_argument("reps: kl_bound must be positive");
  }
  if (samples_per_update < 2) {
    throw std::invalid_argument("reps: samples_per_update must be >= 2");
  }
  if (updates_per_iteration < 1) {
    throw std::invalid_argument("reps: updates_per_iteration must be >= 1");
  }
  if (!(variance_floor > 0.0)) {
    throw std::invalid_argument("reps: variance_floor must be positive");
  }
}

RepsUpdateResult RepsUpdate(const Gaussian& dist,
                            const std::vector<Eigen::VectorXd>& samples,
                            const std::vector<double>& costs,
                            const RepsConfig& config) {
  config.Validate();
  if (samples.size() != costs.size()) {
    throw std::invalid_argument("reps: samples and costs differ in length");
  }
  const int dims = static_cast<int>(dist.mean.size());
  RepsUpdateResult result;
  result.dist = dist;
  result.weights = Eigen::VectorXd::Zero(samples.size());

  std::vector<int> finite;
  double min_cost = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < costs.size(); ++i) {
    if (samples[i].size() != dims) {
      throw std::invalid_argument("reps: sample dimension mismatch");
    }
    if (std::isfinite(costs[i]) && samples[i].allFinite()) {
      finite.push_back(static_cast<int>(i));
      min_cost = std::min(min_cost, costs[i]);
    }
  }
  if (finite.empty()) {
    result.skipped = true;
    return result;
  }

  std::vector<double> shifted(finite.size());
  for (size_t j = 0; j < finite.size(); ++j) {
    shifted[j] = costs[finite[j]] - min_cost;
  }

  // The dual derivative is eps - KL(w(eta) || uniform), increasing in eta.
  std::vector<double> w;
  const double eps = config.kl_bound;
  double eta;
  if (WeightsAt(shifted, kEtaLo, &w) <= eps) {
    eta = kEtaLo;
  } else {
    double lo = std::log(kEtaLo), hi = std::log(kEtaHi);
    while (std::exp(hi) - std::exp(lo) > kRelTol * std::exp(lo)) {
      const double mid = 0.5 * (lo + hi);
      if (WeightsAt(shifted, std::exp(mid), &w) > eps) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    eta = std::exp(hi);
  }
  result.dual_eta = eta;
  WeightsAt(shifted, eta, &w);
  Gaussian fit = Fit(samples, finite, w, config.variance_floor);

  if (config.enforce_kl && KlGaussian(fit, dist) > eps) {
    // KL of the fit shrinks towards the plain sample fit as eta grows.
    double lo = std::log(eta), hi = std::log(kEtaHi);
    WeightsAt(shifted, kEtaHi, &w);
    if (KlGaussian(Fit(samples, finite, w, config.variance_floor), dist) >
        eps) {
      lo = hi;
    }
    while (hi - lo > kRelTol) {
      const double mid = 0.5 * (lo + hi);
      WeightsAt(shifted, std::exp(mid), &w);
      if (KlGaussian(Fit(samples, finite, w, config.variance_floor), dist) >
          eps) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    eta = std::exp(hi);
    WeightsAt(shifted, eta, &w);
    fit = Fit(samples, finite, w, config.variance_floor);
    // Even uniform weights can miss the bound with very few samples; fall
    // back to moving part of the way from the old distribution.
    if (KlGaussian(fit, dist) > eps) {
      double a_lo = 0.0, a_hi = 1.0;
      for (int it = 0; it < 60; ++it) {
        const double a = 0.5 * (a_lo + a_hi);
        const Gaussian mix{dist.mean + a * (fit.mean - dist.mean),
                           dist.var + a * (fit.var - dist.var)};
        (KlGaussian(mix, dist) > eps ? a_hi : a_lo) = a;
      }
      fit = {dist.mean + a_lo * (fit.mean - dist.mean),
             dist.var + a_lo * (fit.var - dist.var)};
    }
  }

  result.eta = eta;
  result.weight_kl = WeightsAt(shifted, eta, &w);
  for (size_t j = 0; j < finite.size(); ++j) result.weights[finite[j]] = w[j];
  result.dist = fit;
  return result;
}

}  // namespace adr
