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

#include "adr/harness/benchmark.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "adr/common/parallel.h"

namespace adr {
namespace {

namespace fs = std::filesystem;

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       since)
      .count();
}

bool Has(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool IsOffline(const std::string& method) {
  return method == "droid" || method == "dropo";
}

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CellRunner {
 public:
  CellRunner(const BenchmarkConfig& config, const std::string& env,
             Setting setting, uint64_t seed, std::vector<std::string> methods)
      : methods_(std::move(methods)),
        spec_(config.SpecFor(env)),
        problem_(MakeProblem(spec_, setting)),
        mcfg_(config.MethodsFor(env)),
        target_(problem_, seed),
        ctx_{&problem_, &target_, &mcfg_, seed},
        strategy_(config.strategy),
        env_(env),
        setting_(SettingName(setting)),
        seed_(seed) {}

  CellOutput Run() {
    const std::vector<std::string>& methods = methods_;
    auto t0 = std::chrono::steady_clock::now();
    prior_ = RunPriorIteration(ctx_);
    const double prior_time = Seconds(t0);
    for (const std::string& m : KnownMethods()) {
      if (!Has(methods, m)) continue;
      ResultRecord r = Record(m, prior_, prior_time);
      out_.records.push_back(r);
      out_.policies.push_back({Tag(m) + "_it0", prior_.policy});
    }

    const bool offline_on_simopt =
        strategy_ == Strategy::kSimoptPolicy &&
        (Has(methods, "droid") || Has(methods, "dropo"));
    if (Has(methods, "simopt") || offline_on_simopt) {
      Guard("simopt", Has(methods, "simopt"), [&] {
        auto t = std::chrono::steady_clock::now();
        SimoptOutcome so = RunSimopt(ctx_, prior_);
        out_.simopt_iteration_discrepancy = so.iteration_discrepancy;
        out_.datasets.push_back({"simopt", so.dataset});
        simopt_log_ = so.dataset;
        if (Has(methods, "simopt")) Emit("simopt", so, Seconds(t));
      });
    }
    if (Has(methods, "simopt1")) {
      Guard("simopt1", true, [&] {
        auto t = std::chrono::steady_clock::now();
        const Dataset& data = PriorPolicyData();
        SimoptOutcome so = RunSimopt1(ctx_, prior_, data);
        Emit("simopt1", so, Seconds(t));
      });
    }
    for (const std::string m : {"droid", "dropo"}) {
      if (Has(methods, m)) Guard(m, true, [&] { RunOffline(m); });
    }
    if (Has(methods, "udr") || Has(methods, "bayrn")) {
      std::optional<AdrOutcome> udr;
      Guard("udr", Has(methods, "udr"), [&] {
        auto t = std::chrono::steady_clock::now();
        udr = RunUdr(ctx_);
        if (Has(methods, "udr")) Emit("udr", *udr, Seconds(t));
      });
      if (Has(methods, "bayrn") && udr) {
        Guard("bayrn", true, [&] {
          auto t = std::chrono::steady_clock::now();
          AdrOutcome bo = RunBayrn(ctx_, *udr);
          Emit("bayrn", bo, Seconds(t));
        });
      }
    }
    return std::move(out_);
  }

 private:
  std::string Tag(const std::string& method) const {
    return IsOffline(method) ? method + "_" + StrategyName(strategy_) : method;
  }

  ResultRecord Record(const std::string& method, const IterationResult& it,
                      double wall_time) const {
    ResultRecord r;
    r.method = method;
    r.env = env_;
    r.setting = setting_;
    r.strategy = IsOffline(method) ? StrategyName(strategy_) : "";
    r.iteration = it.iteration;
    r.member = it.member;
    r.seed = seed_;
    r.raw_return = it.raw_return;
    r.normalized_return = NormalizedReturn(it.raw_return, spec_);
    r.transitions_used = it.transitions_used;
    r.inferred = it.inferred;
    r.wall_time = wall_time;
    return r;
  }

  // Runs fn unless an earlier method already ended the cell. Exceptions
  // become an error record for `method`.
  template <typename Fn>
  void Guard(const std::string& method, bool report, Fn fn) {
    if (!out_.complete) return;
    try {
      fn();
    } catch (const BudgetExceeded& e) {
      Fail(method, "budget_exceeded", e.what());
    } catch (const std::exception& e) {
      if (!report && method == "simopt") {
        // SimOpt only ran to feed the offline methods; blame them
        Fail(Has(methods_, "droid") ? "droid" : "dropo", "error",
             std::string("simopt data collection failed: ") + e.what());
      } else {
        Fail(method, "error", e.what());
      }
    }
  }

  void Fail(const std::string& method, const std::string& status,
            const std::string& message) {
    // keep the shared iteration-0 record, drop partial results
    std::erase_if(out_.records, [&](const ResultRecord& r) {
      return r.method == method && r.iteration > 0;
    });
    ResultRecord r;
    r.method = method;
    r.env = env_;
    r.setting = setting_;
    r.strategy = IsOffline(method) ? StrategyName(strategy_) : "";
    r.iteration = -1;
    r.seed = seed_;
    r.raw_return = std::numeric_limits<double>::quiet_NaN();
    r.normalized_return = std::numeric_limits<double>::quiet_NaN();
    r.status = status;
    r.message = message;
    out_.records.push_back(r);
    out_.complete = false;
  }

  void Emit(const std::string& method, const AdrOutcome& outcome,
            double wall_time) {
    for (const IterationResult& it : outcome.iterations) {
      if (it.transitions_used > mcfg_.transition_budget) {
        throw BudgetExceeded(
            method + ": iteration " + std::to_string(it.iteration) + " used " +
            std::to_string(it.transitions_used) + " transitions, budget " +
            std::to_string(mcfg_.transition_budget));
      }
    }
    for (const IterationResult& it : outcome.iterations) {
      out_.records.push_back(Record(method, it, wall_time));
      if (it.policy.weights().size() == 0) continue;
      std::string name = Tag(method) + "_it" + std::to_string(it.iteration);
      if (it.member >= 0) name += "_m" + std::to_string(it.member);
      out_.policies.push_back({name, it.policy});
    }
    for (const TraceTable& t : outcome.traces) {
      out_.traces.push_back({Tag(method) + "_" + t.name, t.csv});
    }
  }

  const Dataset& PriorPolicyData() {
    if (!prior_data_) {
      prior_data_ = CollectOfflineDataset(ctx_, Strategy::kPriorPolicy,
                                          mcfg_.iterations, &prior_.policy,
                                          nullptr);
      out_.datasets.push_back({"prior-policy", *prior_data_});
    }
    return *prior_data_;
  }

  const Dataset& OfflineData() {
    switch (strategy_) {
      case Strategy::kSimoptPolicy:
        return simopt_log_;
      case Strategy::kPriorPolicy:
        return PriorPolicyData();
      case Strategy::kRandom:
        if (!random_data_) {
          random_data_ = CollectOfflineDataset(
              ctx_, Strategy::kRandom, mcfg_.iterations, nullptr, nullptr);
          out_.datasets.push_back({"random", *random_data_});
        }
        return *random_data_;
    }
    throw std::logic_error("unreachable");
  }

  void RunOffline(const std::string& method) {
    const Dataset& all = OfflineData();
    const Stream stream = method == "droid" ? Stream::kDroid : Stream::kDropo;
    AdrOutcome outcome;
    for (int k = 1; k <= mcfg_.iterations; ++k) {
      auto t = std::chrono::steady_clock::now();
      const Dataset data = all.Prefix(k);
      const int64_t before = target_.collection_steps();
      OfflineInference inf = method == "droid"
                                 ? RunDroid(problem_, data, mcfg_, seed_)
                                 : RunDropo(problem_, data, mcfg_, seed_);
      out_.offline_inference_collection_steps +=
          target_.collection_steps() - before;
      if (target_.collection_steps() != before) {
        throw std::logic_error(method + ": inference touched the target");
      }
      IterationResult r = TrainAndEvaluate(ctx_, inf.dist, stream, k, -1);
      r.transitions_used = data.transitions();
      for (const TraceTable& tr : inf.traces) {
        outcome.traces.push_back(
            {"it" + std::to_string(k) + "_" + tr.name, tr.csv});
      }
      AdrOutcome one;
      one.iterations.push_back(std::move(r));
      Emit(method, one, Seconds(t));
    }
    for (const TraceTable& t : outcome.traces) {
      out_.traces.push_back({Tag(method) + "_" + t.name, t.csv});
    }
  }

  std::vector<std::string> methods_;
  EnvironmentSpec spec_;
  Problem problem_;
  MethodsConfig mcfg_;
  TargetDomain target_;
  CellContext ctx_;
  Strategy strategy_;
  std::string env_;
  std::string setting_;
  uint64_t seed_;

  IterationResult prior_;
  Dataset simopt_log_;
  std::optional<Dataset> prior_data_;
  std::optional<Dataset> random_data_;
  CellOutput out_;
};

std::string CellName(const std::string& env, const std::string& setting,
                     uint64_t seed) {
  return env + "_" + setting + "_s" + std::to_string(seed);
}

std::string MethodFile(const BenchmarkConfig& config,
                       const std::string& method) {
  return IsOffline(method) ? method + "_" + StrategyName(config.strategy)
                           : method;
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path.string() + ": cannot open");
  out << text;
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace

CellOutput RunCell(const BenchmarkConfig& config, const std::string& env,
                   Setting setting, uint64_t seed,
                   const std::vector<std::string>& methods) {
  return CellRunner(config, env, setting, seed, methods).Run();
}

RunSummary RunBenchmark(const BenchmarkConfig& config,
                        const RunFilters& filters, const std::string& out_root,
                        int jobs, const LogFn& log) {
  config.Validate();
  auto pick = [](const auto& all, const auto& filter) {
    if (filter.empty()) return all;
    std::decay_t<decltype(all)> out;
    for (const auto& x : all) {
      if (std::find(filter.begin(), filter.end(), x) != filter.end()) {
        out.push_back(x);
      }
    }
    return out;
  };
  const auto methods = pick(config.methods, filters.methods);
  const auto envs = pick(config.environments, filters.envs);
  const auto settings = pick(config.settings, filters.settings);
  const auto seeds = pick(config.seeds, filters.seeds);

  RunSummary summary;
  const fs::path run_dir = fs::path(out_root) / RunId(config);
  summary.run_dir = run_dir.string();
  for (const char* sub : {"cells", "datasets", "policies", "traces"}) {
    fs::create_directories(run_dir / sub);
  }
  const std::string snapshot = DumpConfig(config);
  if (!fs::exists(run_dir / "config.yaml")) {
    WriteText(run_dir / "config.yaml", snapshot);
  }

  struct Job {
    std::string env;
    Setting setting;
    uint64_t seed;
    std::vector<std::string> methods;
  };
  std::vector<Job> todo;
  for (const std::string& env : envs) {
    for (Setting s : settings) {
      for (uint64_t seed : seeds) {
        Job job{env, s, seed, {}};
        const std::string cell = CellName(env, SettingName(s), seed);
        for (const std::string& m : methods) {
          fs::path f = run_dir / "cells" /
                       (cell + "_" + MethodFile(config, m) + ".json");
          if (fs::exists(f)) {
            ++summary.cells_skipped;
          } else {
            job.methods.push_back(m);
          }
        }
        if (!job.methods.empty()) todo.push_back(std::move(job));
      }
    }
  }

  std::mutex mu;
  auto say = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard<std::mutex> lock(mu);
    log(msg);
  };
  std::vector<int> incomplete(todo.size(), 0);
  ParallelFor(
      static_cast<int>(todo.size()),
      [&](int i) {
        const Job& job = todo[i];
        const std::string cell =
            CellName(job.env, SettingName(job.setting), job.seed);
        say("running " + cell);
        auto t0 = std::chrono::steady_clock::now();
        CellOutput out =
            RunCell(config, job.env, job.setting, job.seed, job.methods);
        incomplete[i] = out.complete ? 0 : 1;
        for (const auto& [name, data] : out.datasets) {
          WriteDataset(data, (run_dir / "datasets" /
                              (cell + "_" + name + ".jsonl"))
                                 .string());
        }
        for (const auto& [name, policy] : out.policies) {
          SavePolicy(policy,
                     (run_dir / "policies" / (cell + "_" + name + ".txt"))
                         .string());
        }
        for (const TraceTable& t : out.traces) {
          WriteText(run_dir / "traces" / (cell + "_" + t.name + ".csv"),
                    t.csv);
        }
        // cell files last: their presence marks the work as done
        for (const std::string& m : job.methods) {
          std::vector<ResultRecord> mine;
          for (const ResultRecord& r : out.records) {
            if (r.method == m) mine.push_back(r);
          }
          if (mine.empty()) continue;
          WriteText(run_dir / "cells" /
                        (cell + "_" + MethodFile(config, m) + ".json"),
                    RecordsToJson(mine));
        }
        say((out.complete ? "done " : "INCOMPLETE ") + cell + " (" +
            std::to_string(Seconds(t0)) + " s)");
      },
      std::max(1, jobs));
  summary.cells_run = static_cast<int>(todo.size());
  for (int x : incomplete) summary.cells_incomplete += x;

  // rebuild the run-level tables from every cell file
  std::vector<ResultRecord> all;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(run_dir / "cells")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<ResultRecord> recs;
    try {
      recs = RecordsFromJson(ss.str());
    } catch (const std::exception& e) {
      throw std::runtime_error(f.string() + ": " + e.what());
    }
    all.insert(all.end(), recs.begin(), recs.end());
  }
  SortRecords(&all);
  ExportResults(all, (run_dir / "records.csv").string(), "csv");
  ExportResults(all, (run_dir / "records.json").string(), "json");
  summary.records = std::move(all);
  return summary;
}

Calibration CalibrateThreshold(const EnvironmentSpec& spec,
                               const TrainerConfig& trainer,
                               const std::vector<uint64_t>& seeds,
                               int eval_episodes, double fraction) {
  if (seeds.empty()) throw std::invalid_argument("calibrate: no seeds");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("calibrate: fraction must lie in (0, 1]");
  }
  const Problem problem = MakeProblem(spec, Setting::kVanilla);
  const DomainDistribution truth = PointMass(problem.TruthNormalized());
  Calibration c;
  c.env = spec.name;
  for (uint64_t seed : seeds) {
    TrainerConfig tc = trainer;
    tc.seed = seed;
    tc.reward_threshold = std::numeric_limits<double>::infinity();
    TrainResult tr = TrainPolicy(truth, problem.source, spec, tc);
    Rng rng = MakeRng(seed, {Tag(Stream::kEvaluation)});
    c.seed_returns.push_back(EvaluatePolicy(
        tr.policy, spec, spec.ground_truth.values, eval_episodes, rng, 0.0));
  }
  double sum = 0.0;
  for (double r : c.seed_returns) sum += r;
  c.converged = sum / c.seed_returns.size();
  Policy zero = Policy::Zero(
      Policy::ShapeFor(spec, Architecture::kLinear, {}), spec);
  Rng rng = MakeRng(seeds.front(), {Tag(Stream::kEvaluation), 1});
  c.worst = EvaluatePolicy(zero, spec, spec.ground_truth.values, eval_episodes,
                           rng, 0.0);
  c.threshold = spec.negative_rewards
                    ? c.worst + fraction * (c.converged - c.worst)
                    : fraction * c.converged;
  return c;
}

}  // namespace adr
