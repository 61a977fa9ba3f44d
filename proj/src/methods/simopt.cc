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

#include "adr/common/parallel.h"
#include "adr/methods/adr.h"

namespace adr {
namespace {

// Observation sequences after each step; target may be longer than sim.
double ObservationDiscrepancy(const EnvironmentSpec& spec,
                              const Trajectory& target, const Trajectory& sim,
                              double l1, double l2, double factor) {
  if (target.size() < 1) throw std::invalid_argument("empty target trajectory");
  const int aligned = std::min(target.size(), sim.size());
  Eigen::VectorXd o_target(spec.n_s()), o_sim(spec.n_s());
  double total = 0.0;
  for (int t = 1; t <= aligned; ++t) {
    spec.dynamics->Observe(target.states[t].data(), o_target.data());
    spec.dynamics->Observe(sim.states[t].data(), o_sim.data());
    const Eigen::VectorXd d = o_sim - o_target;
    if (l1 != 0.0) total += l1 * d.cwiseAbs().sum();
    if (l2 != 0.0) total += l2 * d.squaredNorm();
  }
  if (!std::isfinite(total)) return std::numeric_limits<double>::max();
  const int missing = target.size() - aligned;
  if (missing > 0) {
    const double per_step =
        aligned > 0 ? factor * total / aligned : kMissingStepFloor;
    total += missing * per_step;
  }
  return total;
}

}  // namespace

double SimoptDiscrepancy(const EnvironmentSpec& spec, const Trajectory& target,
                         const Trajectory& sim, const DiscrepancyWeights& w) {
  return ObservationDiscrepancy(spec, target, sim, w.l1, w.l2,
                                w.missing_step_factor);
}

double DroidCost(const Dataset& data, const Eigen::VectorXd& xi,
                 const EnvironmentSpec& spec, double missing_step_factor) {
  double total = 0.0;
  for (const Trajectory& traj : data.trajectories) {
    const Trajectory replay =
        ReplayActions(spec, xi, traj.states[0], traj.actions);
    total += ObservationDiscrepancy(spec, traj, replay, 0.0, 1.0,
                                    missing_step_factor);
  }
  return total;
}

SimoptUpdateLog SimoptUpdate(const CellContext& ctx, const Gaussian& dist,
                             const Dataset& data, const Policy& policy,
                             int iteration, int update, Stream stream) {
  const MethodsConfig& cfg = *ctx.config;
  const Problem& problem = *ctx.problem;
  const int n = cfg.reps.samples_per_update;
  Rng rng = MakeRng(ctx.seed, {Tag(stream), uint64_t(iteration),
                               uint64_t(update)});
  std::vector<Eigen::VectorXd> samples(n);
  for (int i = 0; i < n; ++i) samples[i] = Sample(dist, rng, false);

  const DiscrepancyWeights w{cfg.discrepancy_l1, cfg.discrepancy_l2,
                             cfg.missing_step_factor};
  const Controller controller = policy.AsController();
  std::vector<double> costs(n);
  ParallelFor(
      n,
      [&](int i) {
        const Eigen::VectorXd xi = problem.source.ToPhysical(samples[i]);
        double c = 0.0;
        for (const Trajectory& target : data.trajectories) {
          const Trajectory sim = RolloutFrom(problem.spec, controller, xi,
                                             target.states[0], target.size());
          c += SimoptDiscrepancy(problem.spec, target, sim, w);
        }
        costs[i] = c;
      },
      cfg.threads);

  const RepsUpdateResult r = RepsUpdate(dist, samples, costs, cfg.reps);
  SimoptUpdateLog log;
  log.iteration = iteration;
  log.update = update;
  double sum = 0.0, best = std::numeric_limits<double>::infinity();
  int finite = 0;
  for (double c : costs) {
    if (!std::isfinite(c)) continue;
    sum += c;
    best = std::min(best, c);
    ++finite;
  }
  log.mean_discrepancy = finite ? sum / finite : std::nan("");
  log.min_discrepancy = best;
  log.eta = r.eta;
  log.skipped = r.skipped;
  log.dist = r.dist;
  log.kl = KlGaussian(r.dist, dist);
  return log;
}

namespace {

std::string UpdateTrace(const std::vector<SimoptUpdateLog>& logs) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,update,mean_discrepancy,min_discrepancy,eta,kl,skipped,"
         "mean,var\n";
  for (const SimoptUpdateLog& l : logs) {
    out << l.iteration << ',' << l.update << ',' << l.mean_discrepancy << ','
        << l.min_discrepancy << ',' << l.eta << ',' << l.kl << ','
        << (l.skipped ? 1 : 0) << ",\"";
    for (int i = 0; i < l.dist.mean.size(); ++i) {
      out << (i ? " " : "") << l.dist.mean[i];
    }
    out << "\",\"";
    for (int i = 0; i < l.dist.var.size(); ++i) {
      out << (i ? " " : "") << l.dist.var[i];
    }
    out << "\"\n";
  }
  return out.str();
}

}  // namespace

SimoptOutcome RunSimopt(const CellContext& ctx, const IterationResult& prior) {
  const MethodsConfig& cfg = *ctx.config;
  SimoptOutcome out;
  Gaussian dist = ctx.problem->PriorDistribution().gaussian();
  // collector points into iterations, which must not reallocate
  out.iterations.reserve(cfg.iterations);
  const Policy* collector = &prior.policy;
  for (int k = 1; k <= cfg.iterations; ++k) {
    TrajectoryMeta meta;
    meta.strategy = StrategyName(Strategy::kSimoptPolicy);
    meta.iteration = k;
    meta.seed = ctx.seed;
    meta.policy_iteration = k - 1;
    out.dataset.trajectories.push_back(ctx.target->Collect(
        collector->AsController(), cfg.trajectory_len,
        {Tag(Stream::kSimopt), uint64_t(k)}, meta));
    if (out.dataset.transitions() > cfg.transition_budget) {
      throw std::runtime_error("simopt: transition budget exceeded");
    }

    // one target trajectory per policy: the updates only use the newest
    Dataset latest;
    latest.trajectories.push_back(out.dataset.trajectories.back());
    for (int u = 0; u < cfg.reps.updates_per_iteration; ++u) {
      SimoptUpdateLog log = SimoptUpdate(ctx, dist, latest, *collector, k, u,
                                         Stream::kSimopt);
      if (u == 0) out.iteration_discrepancy.push_back(log.mean_discrepancy);
      dist = log.dist;
      out.updates.push_back(std::move(log));
    }

    IterationResult r = TrainAndEvaluate(ctx, dist, Stream::kSimopt, k, -1);
    r.transitions_used = out.dataset.transitions();
    out.iterations.push_back(std::move(r));
    collector = &out.iterations.back().policy;
  }
  out.traces.push_back({"simopt_reps", UpdateTrace(out.updates)});
  return out;
}

SimoptOutcome RunSimopt1(const CellContext& ctx, const IterationResult& prior,
                         const Dataset& prior_policy_data) {
  const MethodsConfig& cfg = *ctx.config;
  SimoptOutcome out;
  for (int k = 1; k <= cfg.iterations; ++k) {
    const Dataset data = prior_policy_data.Prefix(k);
    Gaussian dist = ctx.problem->PriorDistribution().gaussian();
    for (int u = 0; u < cfg.simopt1_updates; ++u) {
      SimoptUpdateLog log = SimoptUpdate(ctx, dist, data, prior.policy, k, u,
                                         Stream::kSimopt1);
      if (u == 0) out.iteration_discrepancy.push_back(log.mean_discrepancy);
      dist = log.dist;
      out.updates.push_back(std::move(log));
    }
    IterationResult r = TrainAndEvaluate(ctx, dist, Stream::kSimopt1, k, -1);
    r.transitions_used = data.transitions();
    out.iterations.push_back(std::move(r));
  }
  out.dataset = prior_policy_data.Prefix(cfg.iterations);
  out.traces.push_back({"simopt1_reps", UpdateTrace(out.updates)});
  return out;
}

}  // namespace adr
