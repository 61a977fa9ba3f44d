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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "adr/dist/distribution.h"
#include "adr/optim/cmaes.h"
#include "adr/optim/gp.h"
#include "adr/optim/reps.h"
#include "oracles.h"

namespace adr {
namespace {

using testing::DualCase;
using testing::DualOracle;
using testing::HandBuiltCases;
using testing::WeightedFit;

double Sphere(const Eigen::VectorXd& x) { return x.squaredNorm(); }

double Rosenbrock(const Eigen::VectorXd& x) {
  return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
}

// ---------------------------------- CMA-ES ----------------------------------

TEST(CmaesTest, Sphere8d) {
  CmaOptions opt;
  opt.max_evals = 20000;
  opt.tolx = 0.0;
  opt.ftarget = 1e-11;
  opt.seed = 1;
  const auto start = std::chrono::steady_clock::now();
  const CmaResult r =
      CmaesMinimize(Sphere, Eigen::VectorXd::Constant(8, 1.0), 1.0, opt);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_LT(r.best_f, 1e-10);
  EXPECT_LE(r.evaluations, 20000);
  EXPECT_LT(seconds, 10.0);
  EXPECT_EQ(r.final_state.lambda, 4 + static_cast<int>(3.0 * std::log(8.0)));
}

TEST(CmaesTest, Rosenbrock2d) {
  CmaOptions opt;
  opt.max_evals = 30000;
  opt.tolx = 0.0;
  opt.ftarget = 1e-9;
  opt.seed = 3;
  const CmaResult r =
      CmaesMinimize(Rosenbrock, Eigen::Vector2d(-1.2, 1.0), 0.5, opt);
  EXPECT_LT(r.best_f, 1e-8);
  EXPECT_NEAR(r.best_x[0], 1.0, 1e-3);
  EXPECT_NEAR(r.best_x[1], 1.0, 1e-3);
}

TEST(CmaesTest, BudgetOfOneGeneration) {
  const int lambda = DefaultLambda(5);
  CmaOptions opt;
  opt.max_evals = lambda;
  opt.threads = 1;
  int calls = 0;
  const CmaResult r = CmaesMinimize(
      [&](const Eigen::VectorXd& x) {
        ++calls;
        return Sphere(x);
      },
      Eigen::VectorXd::Ones(5), 1.0, opt);
  EXPECT_EQ(calls, lambda);
  EXPECT_EQ(r.evaluations, lambda);
  EXPECT_EQ(r.final_state.generation, 1);
}

TEST(CmaesTest, BudgetIsNeverExceeded) {
  int calls = 0;
  CmaOptions opt;
  opt.max_evals = 103;
  opt.threads = 1;
  const CmaResult r = CmaesMinimize(
      [&](const Eigen::VectorXd& x) {
        ++calls;
        return Sphere(x);
      },
      Eigen::VectorXd::Ones(3), 1.0, opt);
  EXPECT_EQ(calls, 103);
  EXPECT_EQ(r.evaluations, 103);
}

TEST(CmaesTest, BoundsAreRespected) {
  CmaOptions opt;
  opt.max_evals = 2000;
  opt.bounds = Box{Eigen::Vector2d(1.0, -1.0), Eigen::Vector2d(3.0, 1.0)};
  opt.threads = 1;
  bool inside = true;
  const CmaResult r = CmaesMinimize(
      [&](const Eigen::VectorXd& x) {
        inside = inside && x[0] >= 1.0 && x[0] <= 3.0 && x[1] >= -1.0 &&
                 x[1] <= 1.0;
        return Sphere(x);
      },
      Eigen::Vector2d(2.0, 0.0), 2.0, opt);
  EXPECT_TRUE(inside);
  EXPECT_NEAR(r.best_x[0], 1.0, 1e-6);
  EXPECT_NEAR(r.best_x[1], 0.0, 1e-3);
}

TEST(CmaesTest, NonFiniteValuesRankLast) {
  CmaOptions opt;
  opt.max_evals = 3000;
  opt.seed = 5;
  const CmaResult r = CmaesMinimize(
      [](const Eigen::VectorXd& x) {
        if (x[0] < 0.0) return std::numeric_limits<double>::quiet_NaN();
        return std::pow(x[0] - 1.0, 2) + x[1] * x[1];
      },
      Eigen::Vector2d(2.0, 1.0), 1.0, opt);
  EXPECT_TRUE(std::isfinite(r.best_f));
  EXPECT_LT(r.best_f, 1e-6);
}

TEST(CmaesTest, CovarianceStaysPositiveDefinite) {
  CmaOptions opt;
  opt.max_evals = 5000;
  opt.seed = 8;
  const CmaResult r = CmaesMinimize(
      [](const Eigen::VectorXd& x) {
        return x[0] * x[0] + 1e4 * x[1] * x[1] + 1e-2 * x[2] * x[2];
      },
      Eigen::Vector3d(1.0, 1.0, 1.0), 1.0, opt);
  const Eigen::MatrixXd& c = r.final_state.cov;
  EXPECT_LT((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  EXPECT_GT(r.final_state.sigma, 0.0);
}

TEST(CmaesTest, StopsOnIllConditionedCovariance) {
  CmaOptions opt;
  opt.max_evals = 1000000;
  opt.tolx = 0.0;
  opt.seed = 2;
  const CmaResult r = CmaesMinimize(
      [](const Eigen::VectorXd& x) { return x[0] * x[0] + 1e20 * x[1] * x[1]; },
      Eigen::Vector2d(1.0, 1.0), 1.0, opt);
  EXPECT_LT(r.evaluations, opt.max_evals);
  EXPECT_TRUE(r.final_state.cov.allFinite());
  EXPECT_TRUE(std::isfinite(r.final_state.sigma));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r.final_state.cov);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

// Clamping to a box while C is near-singular must not produce non-finite
// candidates.
TEST(CmaesTest, ClampedSearchStaysFinite) {
  CmaOptions opt;
  opt.max_evals = 50000;
  opt.tolx = 0.0;
  opt.bounds = Box{Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(4.0, 4.0)};
  opt.seed = 4;
  bool finite = true;
  const CmaResult r = CmaesMinimize(
      [&](const Eigen::VectorXd& x) {
        finite = finite && x.allFinite();
        return -x[0] + 1e-3 * std::sin(40.0 * x[1]);
      },
      Eigen::Vector2d(2.0, 2.0), 1.0, opt);
  EXPECT_TRUE(finite);
  EXPECT_TRUE(r.final_state.mean.allFinite());
  EXPECT_NEAR(r.best_x[0], 4.0, 1e-9);
}

TEST(CmaesTest, SameSeedIsReproducible) {
  CmaOptions opt;
  opt.max_evals = 500;
  opt.seed = 42;
  const CmaResult a =
      CmaesMinimize(Rosenbrock, Eigen::Vector2d(0.0, 0.0), 0.3, opt);
  opt.threads = 1;
  const CmaResult b =
      CmaesMinimize(Rosenbrock, Eigen::Vector2d(0.0, 0.0), 0.3, opt);
  EXPECT_EQ(a.best_x, b.best_x);
  EXPECT_EQ(a.final_state.cov, b.final_state.cov);
}

TEST(CmaesTest, RejectsBadArguments) {
  EXPECT_THROW(CmaesMinimize(Sphere, Eigen::VectorXd::Ones(2), 0.0, {}),
               std::invalid_argument);
  EXPECT_THROW(
      CmaesMinimize(Sphere, Eigen::VectorXd::Constant(2, NAN), 1.0, {}),
      std::invalid_argument);
}

// ----------------------------------- REPS -----------------------------------

TEST(RepsTest, DualMatchesDenseGridOracle) {
  for (const DualCase& dc : HandBuiltCases()) {
    std::vector<Eigen::VectorXd> samples;
    for (double x : dc.x) samples.push_back(Eigen::VectorXd::Constant(1, x));
    RepsConfig cfg;
    cfg.kl_bound = dc.eps;
    cfg.variance_floor = 1e-300;
    cfg.enforce_kl = false;
    const Gaussian old{Eigen::VectorXd::Constant(1, 2.0),
                       Eigen::VectorXd::Ones(1)};
    const RepsUpdateResult r = RepsUpdate(old, samples, dc.costs, cfg);
    const double eta = DualOracle(dc.costs, dc.eps);
    EXPECT_NEAR(r.dual_eta / eta, 1.0, 1e-6) << "eps " << dc.eps;
    const Gaussian fit = WeightedFit(dc.x, dc.costs, eta);
    EXPECT_NEAR(r.dist.mean[0], fit.mean[0], 1e-6);
    EXPECT_NEAR(r.dist.var[0], fit.var[0], 1e-6);
    EXPECT_NEAR(r.weight_kl, dc.eps, 1e-6);
  }
}

// 100 random problems with 1000 samples each, as used by SimOpt.
TEST(RepsTest, TrustRegionOnRandomInstances) {
  Rng rng(7);
  std::uniform_real_distribution<double> u(0.0, 4.0), v(0.05, 2.0);
  std::uniform_int_distribution<int> dims(1, 6);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dims(rng);
    Gaussian old{Eigen::VectorXd(n), Eigen::VectorXd(n)};
    Eigen::VectorXd target(n);
    for (int i = 0; i < n; ++i) {
      old.mean[i] = u(rng);
      old.var[i] = v(rng);
      target[i] = u(rng);
    }
    RepsConfig cfg;
    std::vector<Eigen::VectorXd> samples;
    std::vector<double> costs;
    for (int k = 0; k < cfg.samples_per_update; ++k) {
      Eigen::VectorXd x = Sample(old, rng, false);
      costs.push_back((x - target).squaredNorm() * (1.0 + trial) +
                      0.1 * normal(rng));
      samples.push_back(std::move(x));
    }
    const RepsUpdateResult r = RepsUpdate(old, samples, costs, cfg);
    const double kl = KlGaussian(r.dist, old);
    worst = std::max(worst, kl / cfg.kl_bound);
    EXPECT_LE(kl, 1.05 * cfg.kl_bound) << "trial " << trial;
    EXPECT_GE(r.eta, r.dual_eta);
  }
  RecordProperty("worst_kl_ratio", std::to_string(worst));
}

TEST(RepsTest, EqualCostsGiveUniformWeights) {
  std::vector<Eigen::VectorXd> samples;
  for (double x : {1.0, 2.0, 3.0}) {
    samples.push_back(Eigen::VectorXd::Constant(1, x));
  }
  const Gaussian old{Eigen::VectorXd::Constant(1, 2.0),
                     Eigen::VectorXd::Constant(1, 2.0 / 3.0)};
  const RepsUpdateResult r =
      RepsUpdate(old, samples, {5.0, 5.0, 5.0}, RepsConfig{});
  EXPECT_NEAR(r.dist.mean[0], 2.0, 1e-15);
  EXPECT_NEAR(r.dist.var[0], 2.0 / 3.0, 1e-15);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.weights[i], 1.0 / 3.0, 1e-15);
}

TEST(RepsTest, TinyBoundGivesNearUniformWeights) {
  Rng rng(1);
  std::vector<Eigen::VectorXd> samples;
  std::vector<double> costs;
  for (int i = 0; i < 50; ++i) {
    samples.push_back(Eigen::VectorXd::Constant(1, i));
    costs.push_back(i * i);
  }
  RepsConfig cfg;
  cfg.kl_bound = 1e-9;
  const RepsUpdateResult r = RepsUpdate(
      {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)}, samples, costs,
      cfg);
  EXPECT_GT(r.eta, 1e3);
  EXPECT_LT((r.weights.array() - 1.0 / 50).abs().maxCoeff(), 1e-4);
}

TEST(RepsTest, NonFiniteCostsAreDropped) {
  std::vector<Eigen::VectorXd> samples = {Eigen::VectorXd::Constant(1, 0.0),
                                          Eigen::VectorXd::Constant(1, 1.0),
                                          Eigen::VectorXd::Constant(1, 9.0)};
  const double inf = std::numeric_limits<double>::infinity();
  const RepsUpdateResult r =
      RepsUpdate({Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)},
                 samples, {1.0, 1.0, inf}, RepsConfig{});
  EXPECT_EQ(r.weights[2], 0.0);
  EXPECT_NEAR(r.dist.mean[0], 0.5, 1e-15);
}

TEST(RepsTest, AllNonFiniteLeavesDistributionUnchanged) {
  const Gaussian old{Eigen::Vector2d(1.0, 2.0), Eigen::Vector2d(0.5, 0.5)};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const RepsUpdateResult r = RepsUpdate(
      old, {Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 1.0)}, {nan, nan},
      RepsConfig{});
  EXPECT_TRUE(r.skipped);
  EXPECT_EQ(r.dist.mean, old.mean);
  EXPECT_EQ(r.dist.var, old.var);
}

TEST(RepsTest, VarianceFloor) {
  RepsConfig cfg;
  cfg.enforce_kl = false;
  const RepsUpdateResult r = RepsUpdate(
      {Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)},
      {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 1.0)},
      {0.0, 1.0}, cfg);
  EXPECT_EQ(r.dist.var[0], 1e-6);
}

TEST(RepsTest, SafeguardHoldsWithFewSamples) {
  const Gaussian old{Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)};
  const RepsUpdateResult r = RepsUpdate(
      old,
      {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, 1.0)},
      {0.0, 1.0}, RepsConfig{});
  EXPECT_LE(KlGaussian(r.dist, old), 1.0 + 1e-9);
}

// ------------------------------------ GP ------------------------------------

GpModel ToyModel(double noise) {
  Eigen::MatrixXd x(4, 2);
  x << 0.0, 0.0, 1.0, 0.5, 2.0, 2.0, 0.3, 1.7;
  const Eigen::Vector4d y(0.5, -1.0, 2.0, 0.25);
  return GpModel::Fit(x, y, {1.0, 1.5, noise});
}

TEST(GpTest, NoiseFreeInterpolation) {
  const GpModel m = ToyModel(0.0);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(m.Predict(m.x().row(i)).mean, m.y()[i], 1e-6);
  }
}

TEST(GpTest, RevertsToPriorFarAway) {
  const GpModel m = ToyModel(1e-4);
  const GpPosterior p = m.Predict(Eigen::Vector2d(12.0, 12.0));
  EXPECT_NEAR(p.mean, 0.0, 1e-3);
  EXPECT_NEAR(p.var, 1.5, 1e-3);
}

TEST(GpTest, VarianceAtTrainingPoints) {
  const GpModel m = ToyModel(1e-4);
  for (int i = 0; i < 4; ++i) {
    const double var = m.Predict(m.x().row(i)).var;
    EXPECT_GE(var, 0.0);
    EXPECT_LE(var, 1e-4 + 1e-6);
  }
}

TEST(GpTest, DuplicatePointsNeedJitter) {
  Eigen::MatrixXd x(3, 1);
  x << 1.0, 1.0, 2.0;
  const GpModel m = GpModel::Fit(x, Eigen::Vector3d(1.0, 1.0, 0.0),
                                 {1.0, 1.0, 0.0});
  EXPECT_GT(m.jitter(), 0.0);
  EXPECT_LE(m.jitter(), 1e-6);
  EXPECT_NEAR(m.Predict(Eigen::VectorXd::Constant(1, 1.0)).mean, 1.0, 1e-3);
}

TEST(GpTest, RejectsMismatchedData) {
  EXPECT_THROW(GpModel::Fit(Eigen::MatrixXd::Zero(2, 1),
                            Eigen::VectorXd::Zero(3), {}),
               std::invalid_argument);
}

TEST(ExpectedImprovementTest, ZeroWithoutUncertaintyOrGain) {
  const GpModel m = ToyModel(0.0);
  // at a noise-free training point the posterior is exact
  EXPECT_NEAR(ExpectedImprovement(m, m.x().row(1), 2.0), 0.0, 1e-12);
}

TEST(ExpectedImprovementTest, NonNegativeEverywhere) {
  const GpModel m = ToyModel(1e-4);
  Rng rng(3);
  std::uniform_real_distribution<double> u(-3.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_GE(ExpectedImprovement(m, Eigen::Vector2d(u(rng), u(rng)), 2.0),
              0.0);
  }
}

TEST(ExpectedImprovementTest, SuggestionMatchesGridSearch) {
  const std::vector<std::pair<Eigen::Vector2d, Eigen::Vector2d>> toys = {
      {Eigen::Vector2d(0.5, 2.5), Eigen::Vector2d(0.0, 1.0)},
      {Eigen::Vector2d(1.0, 1.4), Eigen::Vector2d(2.0, 1.8)},
      {Eigen::Vector2d(3.0, 3.5), Eigen::Vector2d(-1.0, 1.0)},
  };
  for (const auto& [xs, ys] : toys) {
    const GpModel m = GpModel::Fit(xs, ys, {1.0, 1.0, 1e-4});
    const double best = ys.maxCoeff();
    const int n = 10000;
    double grid_x = 0.0, grid_ei = -1.0;
    for (int i = 0; i <= n; ++i) {
      const double x = 4.0 * i / n;
      const double ei =
          ExpectedImprovement(m, Eigen::VectorXd::Constant(1, x), best);
      if (ei > grid_ei) {
        grid_ei = ei;
        grid_x = x;
      }
    }
    Rng rng(5);
    const Eigen::VectorXd s =
        BoSuggest(m, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 4.0),
                  rng);
    EXPECT_NEAR(s[0], grid_x, 4.0 / n);
    EXPECT_GE(ExpectedImprovement(m, s, best), grid_ei - 1e-12);
  }
}

}  // namespace
}  // namespace adr
