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
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "adr/methods/adr.h"

namespace adr {
namespace {

std::string CmaTrace(const CmaResult& r) {
  std::ostringstream out;
  out.precision(17);
  out << "generation,evaluations,best_f,generation_f,sigma,mean\n";
  for (const CmaTraceRow& row : r.trace) {
    out << row.generation << ',' << row.evaluations << ',' << row.best_f << ','
        << row.generation_f << ',' << row.sigma << ",\"";
    for (int i = 0; i < row.mean.size(); ++i) {
      out << (i ? " " : "") << row.mean[i];
    }
    out << "\"\n";
  }
  return out.str();
}

Box NormalizedBox(int n) {
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Constant(n, kNormalizedMax)};
}

}  // namespace

OfflineInference RunDroid(const Problem& problem, const Dataset& data,
                          const MethodsConfig& config, uint64_t seed) {
  if (data.size() == 0) throw std::invalid_argument("droid: empty dataset");
  const int n = problem.dims();
  CmaOptions opt;
  opt.max_evals = config.droid_evals;
  opt.bounds = NormalizedBox(n);
  opt.seed = DeriveSeed(seed, {Tag(Stream::kDroid)});
  opt.threads = config.threads;
  const CmaResult r = CmaesMinimize(
      [&](const Eigen::VectorXd& z) {
        return DroidCost(data, problem.source.ToPhysical(z), problem.spec,
                         config.missing_step_factor);
      },
      problem.PriorDistribution().gaussian().mean, config.droid_sigma0, opt);

  OfflineInference out;
  const CmaState& s = r.final_state;
  out.dist.mean = s.mean;
  out.dist.var = s.sigma * s.sigma * s.cov.diagonal();
  out.best_cost = r.best_f;
  out.evaluations = r.evaluations;
  out.traces.push_back({"droid_cmaes", CmaTrace(r)});
  return out;
}

DropoObjective::DropoObjective(const Problem& problem, const Dataset& data,
                               int samples, uint64_t seed)
    : problem_(&problem), samples_(samples) {
  if (samples < 2) {
    throw std::invalid_argument("dropo: need at least 2 samples per transition");
  }
  for (const Trajectory& traj : data.trajectories) {
    for (int t = 0; t < traj.size(); ++t) {
      s_.push_back(traj.states[t]);
      a_.push_back(traj.actions[t]);
      s_next_.push_back(traj.states[t + 1]);
    }
  }
  Rng rng = MakeRng(seed, {Tag(Stream::kDropo)});
  std::normal_distribution<double> normal(0.0, 1.0);
  normals_.resize(s_.size());
  for (auto& m : normals_) {
    m.resize(samples, problem.dims());
    for (int i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  }
}

double DropoObjective::LogLikelihood(const Gaussian& phi, double epsilon,
                                     int begin, int end) const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("dropo: epsilon must be > 0");
  const Problem& p = *problem_;
  const int d = p.spec.latent_dim();
  const Eigen::VectorXd sd = phi.var.cwiseSqrt();
  Simulator sim(p.spec, p.target_xi);
  Eigen::MatrixXd next(samples_, d);
  double total = 0.0;
  for (int t = begin; t < end; ++t) {
    for (int j = 0; j < samples_; ++j) {
      const Eigen::VectorXd z =
          phi.mean + sd.cwiseProduct(normals_[t].row(j).transpose());
      sim.SetXi(p.source.ToPhysical(z));
      sim.SetState(s_[t]);
      if (sim.Step(a_[t]).status == StepStatus::kDiverged) {
        return -std::numeric_limits<double>::infinity();
      }
      next.row(j) = sim.state().transpose();
    }
    const Eigen::RowVectorXd mean = next.colwise().mean();
    const Eigen::RowVectorXd var =
        (next.rowwise() - mean).colwise().squaredNorm() / (samples_ - 1);
    for (int k = 0; k < d; ++k) {
      const double v = var[k] + epsilon;
      const double r = s_next_[t][k] - mean[k];
      total += -0.5 * (std::log(2.0 * M_PI * v) + r * r / v);
    }
  }
  return total;
}

double DropoLogLikelihood(const Problem& problem, const Dataset& data,
                          const Gaussian& phi, double epsilon, int samples,
                          uint64_t seed) {
  const DropoObjective obj(problem, data, samples, seed);
  return obj.LogLikelihood(phi, epsilon, 0, obj.transitions());
}

namespace {

Gaussian Unpack(const Eigen::VectorXd& x, int n) {
  return {x.head(n), x.tail(n).array().exp().matrix()};
}

CmaResult FitDropo(const DropoObjective& obj, int n, double epsilon, int end,
                   const MethodsConfig& config, uint64_t seed) {
  CmaOptions opt;
  opt.max_evals = config.dropo_evals;
  Box box;
  box.lo.resize(2 * n);
  box.hi.resize(2 * n);
  box.lo << Eigen::VectorXd::Zero(n),
      Eigen::VectorXd::Constant(n, std::log(1e-6));
  box.hi << Eigen::VectorXd::Constant(n, kNormalizedMax),
      Eigen::VectorXd::Constant(n, std::log(kNormalizedMax));
  opt.bounds = box;
  opt.seed = seed;
  opt.threads = config.threads;
  Eigen::VectorXd x0(2 * n);
  x0 << Eigen::VectorXd::Constant(n, 0.5 * kNormalizedMax),
      Eigen::VectorXd::Zero(n);
  return CmaesMinimize(
      [&](const Eigen::VectorXd& x) {
        return -obj.LogLikelihood(Unpack(x, n), epsilon, 0, end);
      },
      x0, config.dropo_sigma0, opt);
}

}  // namespace

OfflineInference RunDropo(const Problem& problem, const Dataset& data,
                          const MethodsConfig& config, uint64_t seed) {
  if (data.size() == 0) throw std::invalid_argument("dropo: empty dataset");
  const int n = problem.dims();
  const DropoObjective obj(problem, data, config.dropo_samples_per_dim * n,
                           seed);
  const int total = obj.transitions();
  const int train_end =
      total - static_cast<int>(std::lround(config.dropo_holdout * total));

  OfflineInference out;
  std::vector<double> eps = config.dropo_epsilons;
  int winner = 0;
  if (total >= 10 && eps.size() > 1) {
    double best = -std::numeric_limits<double>::infinity();
    for (size_t e = 0; e < eps.size(); ++e) {
      const CmaResult r = FitDropo(obj, n, eps[e], train_end, config,
                                   DeriveSeed(seed, {Tag(Stream::kDropo), e}));
      const double heldout =
          obj.LogLikelihood(Unpack(r.best_x, n), eps[e], train_end, total);
      out.heldout_loglik.push_back(heldout);
      out.evaluations += r.evaluations;
      std::ostringstream name;
      name << "dropo_cmaes_eps" << e;
      out.traces.push_back({name.str(), CmaTrace(r)});
      if (heldout > best) {
        best = heldout;
        winner = static_cast<int>(e);
      }
    }
  }
  out.epsilon = eps[winner];
  const CmaResult r =
      FitDropo(obj, n, out.epsilon, total, config,
               DeriveSeed(seed, {Tag(Stream::kDropo), 1000}));
  out.evaluations += r.evaluations;
  out.dist = Unpack(r.best_x, n);
  out.best_cost = r.best_f;
  out.traces.push_back({"dropo_cmaes_final", CmaTrace(r)});
  return out;
}

}  // namespace adr
