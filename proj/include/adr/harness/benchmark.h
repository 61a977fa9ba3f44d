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

#ifndef ADR_HARNESS_BENCHMARK_H_
#define ADR_HARNESS_BENCHMARK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "adr/harness/config.h"
#include "adr/harness/records.h"
#include "adr/methods/adr.h"
#include "adr/methods/dataset.h"
#include "adr/policy/policy.h"

namespace adr {

// Everything one (env, setting, seed) cell produced.
struct CellOutput {
  std::vector<ResultRecord> records;
  // named after their content, e.g. "simopt" or "random"
  std::vector<std::pair<std::string, Dataset>> datasets;
  // "<method>[_<strategy>]_it<k>[_m<member>]"
  std::vector<std::pair<std::string, Policy>> policies;
  // "<method>[_<strategy>]_<trace name>"
  std::vector<TraceTable> traces;
  // SimOpt's mean discrepancy at the first update of each iteration
  std::vector<double> simopt_iteration_discrepancy;
  // target transitions collected while DROID/DROPO inference was running
  int64_t offline_inference_collection_steps = 0;
  // false when a method failed or violated its budget
  bool complete = true;
};

// Runs the protocol for the requested methods on one cell. Iteration 0 is
// the prior-trained policy, shared by every method. SimOpt runs whenever
// simopt is requested or the offline methods consume its log. A method that
// throws, or reports more transitions than the budget, is replaced by one
// diagnostic record and ends the cell.
CellOutput RunCell(const BenchmarkConfig& config, const std::string& env,
                   Setting setting, uint64_t seed,
                   const std::vector<std::string>& methods);

struct RunFilters {
  std::vector<std::string> methods;
  std::vector<std::string> envs;
  std::vector<Setting> settings;
  std::vector<uint64_t> seeds;
};

struct RunSummary {
  std::string run_dir;
  std::vector<ResultRecord> records;
  int cells_run = 0;
  int cells_skipped = 0;
  int cells_incomplete = 0;
};

using LogFn = std::function<void(const std::string&)>;

// Runs the filtered grid under out_root/<run-id>/, writing per-cell files
// to cells/, then records.csv and records.json over every cell present,
// plus datasets/, policies/ and traces/. Cells whose file already exists
// are not re-run. jobs caps the number of concurrent cells.
RunSummary RunBenchmark(const BenchmarkConfig& config,
                        const RunFilters& filters, const std::string& out_root,
                        int jobs, const LogFn& log = nullptr);

// Threshold calibration on ground-truth dynamics.
struct Calibration {
  std::string env;
  std::vector<double> seed_returns;
  double converged = 0.0;
  // zero-action return, the 0 anchor for cost-style rewards
  double worst = 0.0;
  double threshold = 0.0;
};

// Trains with no early stop on a point mass at the ground truth for every
// seed and evaluates each policy on eval_episodes ground-truth episodes.
// converged is the mean over seeds. The threshold is fraction * converged,
// or worst + fraction * (converged - worst) for cost-style rewards.
Calibration CalibrateThreshold(const EnvironmentSpec& spec,
                               const TrainerConfig& trainer,
                               const std::vector<uint64_t>& seeds,
                               int eval_episodes, double fraction = 0.9);

}  // namespace adr

#endif  // ADR_HARNESS_BENCHMARK_H_
