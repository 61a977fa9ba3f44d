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

#include "adr/optim/cmaes.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "adr/common/parallel.h"
#include "adr/common/random.h"

namespace adr {
namespace {

bool Inside(const Eigen::VectorXd& x, const Box& box) {
  return (x.array() >= box.lo.array()).all() &&
         (x.array() <= box.hi.array()).all();
}

}  // namespace

CmaResult CmaesMinimize(const std::function<double(const Eigen::VectorXd&)>& f,
                        const Eigen::VectorXd& x0, double sigma0,
                        const CmaOptions& options) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw std::invalid_argument("cmaes: empty start point");
  if (!x0.allFinite()) throw std::invalid_argument("cmaes: non-finite x0");
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw std::invalid_argument("cmaes: sigma0 must be positive");
  }
  if (options.max_evals < 1) {
    throw std::invalid_argument("cmaes: max_evals must be >= 1");
  }
  if (options.bounds) {
    const Box& b = *options.bounds;
    if (b.lo.size() != n || b.hi.size() != n ||
        (b.lo.array() > b.hi.array()).any()) {
      throw std::invalid_argument("cmaes: invalid bounds");
    }
  }

  const int lambda = options.lambda > 0 ? options.lambda : DefaultLambda(n);
  const int mu = lambda / 2;
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) {
    weights[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  }
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();

  const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) +
      c_sigma;
  const double c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
  const double c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
  const double c_mu =
      std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                              ((n + 2.0) * (n + 2.0) + mu_eff));
  const double chi_n =
      std::sqrt(double(n)) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  CmaState state;
  state.mean = x0;
  state.sigma = sigma0;
  state.cov = Eigen::MatrixXd::Identity(n, n);
  state.path_sigma = Eigen::VectorXd::Zero(n);
  state.path_c = Eigen::VectorXd::Zero(n);
  state.lambda = lambda;

  CmaResult result;
  result.best_x = x0;

  Rng rng(DeriveSeed(options.seed, {0xc3a5ULL}));
  std::normal_distribution<double> normal(0.0, 1.0);

  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(n);  // sqrt eigenvalues
  std::vector<Eigen::VectorXd> xs(lambda), ys(lambda);
  std::vector<double> fs(lambda);

  while (result.evaluations < options.max_evals) {
    const int count = std::min(lambda, options.max_evals - result.evaluations);
    const bool partial = count < lambda;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(state.cov);
    basis = eig.eigenvectors();
    scales = eig.eigenvalues().cwiseMax(1e-300).cwiseSqrt();

    for (int k = 0; k < count; ++k) {
      Eigen::VectorXd z(n), y, x;
      for (int tries = 0; tries < 100; ++tries) {
        for (int i = 0; i < n; ++i) z[i] = normal(rng);
        y = basis * scales.cwiseProduct(z);
        x = state.mean + state.sigma * y;
        if (!options.bounds || Inside(x, *options.bounds)) break;
      }
      if (options.bounds && !Inside(x, *options.bounds)) {
        x = x.cwiseMax(options.bounds->lo).cwiseMin(options.bounds->hi);
        y = (x - state.mean) / state.sigma;
      }
      xs[k] = std::move(x);
      ys[k] = std::move(y);
    }

    ParallelFor(
        count,
        [&](int k) {
          const double v = f(xs[k]);
          fs[k] = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        },
        options.threads);
    result.evaluations += count;

    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[a] < fs[b]; });
    if (fs[order[0]] < result.best_f) {
      result.best_f = fs[order[0]];
      result.best_x = xs[order[0]];
    }
    if (partial) break;

    // recombination
    const CmaState previous = state;
    const Eigen::VectorXd old_mean = state.mean;
    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) y_w += weights[i] * ys[order[i]];
    state.mean = old_mean + state.sigma * y_w;

    // step-size path uses C^{-1/2} y_w = B D^{-1} B^T y_w
    const Eigen::VectorXd c_inv_sqrt_y =
        basis * (basis.transpose() * y_w).cwiseQuotient(scales);
    state.path_sigma = (1.0 - c_sigma) * state.path_sigma +
                       std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) *
                           c_inv_sqrt_y;
    const double ps_norm = state.path_sigma.norm();
    const double decay =
        1.0 - std::pow(1.0 - c_sigma, 2.0 * (state.generation + 1));
    const bool h_sigma =
        ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (n + 1.0)) * chi_n;
    state.path_c = (1.0 - c_c) * state.path_c +
                   (h_sigma ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) *
                       y_w;

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd& y = ys[order[i]];
      rank_mu.noalias() += weights[i] * y * y.transpose();
    }
    const double lost = h_sigma ? 0.0 : c_c * (2.0 - c_c);
    state.cov = (1.0 - c_1 - c_mu) * state.cov +
                c_1 * (state.path_c * state.path_c.transpose() +
                       lost * state.cov) +
                c_mu * rank_mu;
    state.cov = 0.5 * (state.cov + state.cov.transpose());

    state.sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));
    ++state.generation;
    // A near-singular C can blow the step-size path up; keep the last
    // finite distribution instead.
    if (!state.mean.allFinite() || !state.cov.allFinite() ||
        !std::isfinite(state.sigma) || !(state.sigma > 0.0)) {
      state = previous;
      break;
    }

    CmaTraceRow row;
    row.generation = state.generation;
    row.evaluations = result.evaluations;
    row.best_f = result.best_f;
    row.generation_f = fs[order[0]];
    row.sigma = state.sigma;
    row.mean = state.mean;
    result.trace.push_back(std::move(row));

    if (result.best_f <= options.ftarget) break;
    if (state.sigma * std::sqrt(state.cov.diagonal().maxCoeff()) <
        options.tolx) {
      break;
    }
    const Eigen::VectorXd eigen =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
            state.cov, Eigen::EigenvaluesOnly)
            .eigenvalues();
    if (!(eigen.minCoeff() > 0.0) ||
        eigen.maxCoeff() > options.max_condition * eigen.minCoeff()) {
      break;
    }
  }
  result.final_state = state;
  return result;
}

}  // namespace adr
