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

#ifndef ADR_METHODS_ADR_H_
#define ADR_METHODS_ADR_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "adr/dist/distribution.h"
#include "adr/methods/dataset.h"
#include "adr/methods/problem.h"
#include "adr/optim/cmaes.h"
#include "adr/optim/reps.h"
#include "adr/policy/policy.h"
#include "adr/policy/trainer.h"

namespace adr {

struct MethodsConfig {
  TrainerConfig trainer;
  int iterations = 5;
  int trajectory_len = 200;
  int transition_budget = 1000;
  int eval_episodes = 10;

  int udr_configs = 10;

  int bayrn_eval_episodes = 5;
  int bayrn_starts = 256;
  double bayrn_length_scale = 1.0;

  RepsConfig reps;
  int simopt1_updates = 25;
  double discrepancy_l1 = 1.0;
  double discrepancy_l2 = 1.0;
  double missing_step_factor = 10.0;

  int droid_evals = 30000;
  double droid_sigma0 = 1.0;

  int dropo_evals = 5000;
  double dropo_sigma0 = 1.0;
  std::vector<double> dropo_epsilons = {1e-5, 1e-3, 1e-1};
  int dropo_samples_per_dim = 10;
  double dropo_holdout = 0.2;

  int threads = 0;

  // Throws std::invalid_argument on invalid settings.
  void Validate() const;
};

enum class Strategy { kSimoptPolicy, kRandom, kPriorPolicy };
std::string StrategyName(Strategy s);
Strategy ParseStrategy(const std::string& name);
std::vector<std::string> StrategyNames();

// One named CSV table of optimizer diagnostics.
struct TraceTable {
  std::string name;
  std::string csv;
};

// Everything one method reports at one iteration point.
struct IterationResult {
  int iteration = 0;
  // index inside an ensemble (UDR configurations), -1 for the method's answer
  int member = -1;
  // unset for answers that are not a single distribution (UDR's mean)
  std::optional<DomainDistribution> inferred;
  Policy policy;
  double raw_return = 0.0;
  int transitions_used = 0;
  double train_return = 0.0;
  bool reached_threshold = false;
};

struct AdrOutcome {
  std::vector<IterationResult> iterations;
  std::vector<TraceTable> traces;
};

// Shared state of one (problem, seed) cell.
struct CellContext {
  const Problem* problem = nullptr;
  TargetDomain* target = nullptr;
  const MethodsConfig* config = nullptr;
  uint64_t seed = 0;
};

// Trains on dist with a seed keyed by (method, iteration, member) and
// evaluates the result on the target domain.
IterationResult TrainAndEvaluate(const CellContext& ctx,
                                 const DomainDistribution& dist, Stream method,
                                 int iteration, int member);

// Iteration 0: the policy trained on the prior.
IterationResult RunPriorIteration(const CellContext& ctx);

// ---- UDR / BayRn ------------------------------------------------------------

// Uniform bounds with every coordinate drawn in [0, 4] and lo <= hi.
Uniform SampleUniformBounds(int dims, Rng& rng);

// n_configs randomly bounded uniform distributions, one policy each. Members
// are reported with member = 0..n-1 at iteration 1; the method's answer is
// their mean return, reported at every iteration 1..config.iterations since
// UDR consumes no target data.
AdrOutcome RunUdr(const CellContext& ctx);

// GP-based optimization of the 2n uniform bounds, seeded with the UDR
// members. Each suggestion is trained, then scored by the mean return of
// bayrn_eval_episodes target episodes, accounted as one trajectory of
// trajectory_len transitions. Iteration k reports the best observed point.
AdrOutcome RunBayrn(const CellContext& ctx, const AdrOutcome& udr);

// ---- SimOpt -----------------------------------------------------------------

struct DiscrepancyWeights {
  double l1 = 1.0;
  double l2 = 1.0;
  double missing_step_factor = 10.0;
};

// Sum over aligned steps of l1*|o_sim - o_target|_1 + l2*|o_sim - o_target|^2
// on observations. When the simulated trajectory stops before the target
// one, each missing step costs missing_step_factor times the mean per-step
// cost of the completed steps (kMissingStepFloor if none completed).
double SimoptDiscrepancy(const EnvironmentSpec& spec, const Trajectory& target,
                         const Trajectory& sim, const DiscrepancyWeights& w);
inline constexpr double kMissingStepFloor = 1e6;

struct SimoptUpdateLog {
  int iteration = 0;
  int update = 0;
  double mean_discrepancy = 0.0;
  double min_discrepancy = 0.0;
  double eta = 0.0;
  double kl = 0.0;  // KL(new || old)
  bool skipped = false;
  Gaussian dist;
};

struct SimoptOutcome : AdrOutcome {
  // trajectory k was collected by the policy of iteration k-1
  Dataset dataset;
  std::vector<SimoptUpdateLog> updates;
  // mean sample discrepancy of the first update of each iteration
  std::vector<double> iteration_discrepancy;
};

// REPS over the source distribution, matching closed-loop simulated rollouts
// of the current policy, started from each target trajectory's initial
// state, to the target trajectories. Costs are summed over trajectories.
SimoptUpdateLog SimoptUpdate(const CellContext& ctx, const Gaussian& dist,
                             const Dataset& data, const Policy& policy,
                             int iteration, int update, Stream stream);

// Online SimOpt: iteration k collects one trajectory with the policy of
// iteration k-1 and runs reps.updates_per_iteration updates on it.
SimoptOutcome RunSimopt(const CellContext& ctx, const IterationResult& prior);

// SimOpt-1 at every iteration point k: simopt1_updates REPS updates on the
// first k trajectories of data, all collected by the prior policy.
SimoptOutcome RunSimopt1(const CellContext& ctx, const IterationResult& prior,
                         const Dataset& prior_policy_data);

// ---- Offline data -------------------------------------------------------------

// Appends one trajectory per iteration, collected by the prior policy
// (kPriorPolicy) or uniformly random actions (kRandom). kSimoptPolicy takes
// the first iterations trajectories of simopt_log and throws
// std::invalid_argument when it is missing or too short.
Dataset CollectOfflineDataset(const CellContext& ctx, Strategy strategy,
                              int iterations, const Policy* prior_policy,
                              const Dataset* simopt_log);

// ---- DROID ------------------------------------------------------------------

// Open-loop replay of every trajectory from its first recorded state under
// the physical dynamics xi; sum of squared observation errors. Replays that
// stop early pay the missing-step penalty of SimoptDiscrepancy.
double DroidCost(const Dataset& data, const Eigen::VectorXd& xi,
                 const EnvironmentSpec& spec, double missing_step_factor = 10.0);

struct OfflineInference {
  Gaussian dist;
  double best_cost = 0.0;
  int evaluations = 0;
  std::vector<TraceTable> traces;
  // DROPO only
  double epsilon = 0.0;
  std::vector<double> heldout_loglik;
};

// CMA-ES on DroidCost from the prior mean; the answer is the final search
// distribution (mean, sigma^2 diag C), without a variance floor.
OfflineInference RunDroid(const Problem& problem, const Dataset& data,
                          const MethodsConfig& config, uint64_t seed);

// ---- DROPO ------------------------------------------------------------------

// Per-transition Gaussian likelihood of the recorded next latent states. A
// flat list of transitions with common random numbers: sample j of
// transition t always uses the same standard normal vector, so the objective
// is a deterministic function of phi.
class DropoObjective {
 public:
  DropoObjective(const Problem& problem, const Dataset& data, int samples,
                 uint64_t seed);

  int transitions() const { return static_cast<int>(s_.size()); }
  int samples() const { return samples_; }
  // Sum of log N(s_next; mean, diag(var + epsilon)) over transitions
  // [begin, end). Returns -inf if a simulated step is not finite.
  double LogLikelihood(const Gaussian& phi, double epsilon, int begin,
                       int end) const;

 private:
  const Problem* problem_;
  int samples_;
  std::vector<Eigen::VectorXd> s_, a_, s_next_;
  // normals_[t] is samples x dims
  std::vector<Eigen::MatrixXd> normals_;
};

// Convenience wrapper over all transitions with K = samples.
double DropoLogLikelihood(const Problem& problem, const Dataset& data,
                          const Gaussian& phi, double epsilon, int samples,
                          uint64_t seed);

// CMA-ES over (mean, log variance) for each epsilon on the first
// (1 - holdout) of the transitions; epsilon is picked by held-out
// likelihood and the winner is refit on all transitions.
OfflineInference RunDropo(const Problem& problem, const Dataset& data,
                          const MethodsConfig& config, uint64_t seed);

}  // namespace adr

#endif  // ADR_METHODS_ADR_H_
