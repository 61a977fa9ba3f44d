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
#include <random>
#include <sstream>
#include <stdexcept>

#include "adr/methods/adr.h"
#include "adr/optim/gp.h"

namespace adr {

Uniform SampleUniformBounds(int dims, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, kNormalizedMax);
  Uniform b{Eigen::VectorXd(dims), Eigen::VectorXd(dims)};
  for (int i = 0; i < dims; ++i) {
    const double x = u(rng), y = u(rng);
    b.lo[i] = std::min(x, y);
    b.hi[i] = std::max(x, y);
  }
  return b;
}

AdrOutcome RunUdr(const CellContext& ctx) {
  const MethodsConfig& cfg = *ctx.config;
  Rng rng = MakeRng(ctx.seed, {Tag(Stream::kUdr)});
  AdrOutcome out;
  double total = 0.0;
  for (int m = 0; m < cfg.udr_configs; ++m) {
    const Uniform bounds = SampleUniformBounds(ctx.problem->dims(), rng);
    IterationResult r = TrainAndEvaluate(ctx, bounds, Stream::kUdr, 1, m);
    total += r.raw_return;
    out.iterations.push_back(std::move(r));
  }
  for (int k = 1; k <= cfg.iterations; ++k) {
    IterationResult mean;
    mean.iteration = k;
    mean.member = -1;
    mean.raw_return = total / cfg.udr_configs;
    mean.transitions_used = 0;
    out.iterations.push_back(std::move(mean));
  }
  return out;
}

AdrOutcome RunBayrn(const CellContext& ctx, const AdrOutcome& udr) {
  const MethodsConfig& cfg = *ctx.config;
  const int n = ctx.problem->dims();
  if (ctx.problem->spec.n_xi() >= 8) {
    throw std::invalid_argument(
        "bayrn: Gaussian-process optimization is limited to fewer than 8 "
        "dynamics parameters");
  }

  // observations: (bounds, return, policy)
  std::vector<Eigen::VectorXd> xs;
  std::vector<double> ys;
  std::vector<const IterationResult*> sources;
  std::vector<IterationResult> own;
  own.reserve(cfg.iterations);
  for (const IterationResult& r : udr.iterations) {
    if (r.member < 0) continue;
    const Uniform& b = r.inferred->uniform();
    Eigen::VectorXd x(2 * n);
    x << b.lo, b.hi;
    xs.push_back(x);
    ys.push_back(r.raw_return);
    sources.push_back(&r);
  }
  if (xs.empty()) throw std::invalid_argument("bayrn: no UDR results to start from");

  AdrOutcome out;
  std::ostringstream trace;
  trace << "iteration,observations,suggested_return,best_return,jitter\n";
  const Eigen::VectorXd lo = Eigen::VectorXd::Zero(2 * n);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(2 * n, kNormalizedMax);
  for (int k = 1; k <= cfg.iterations; ++k) {
    const int m = static_cast<int>(xs.size());
    Eigen::MatrixXd x(m, 2 * n);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
      x.row(i) = xs[i];
      y[i] = ys[i];
    }
    y.array() -= y.mean();
    double signal = y.squaredNorm() / m;
    if (!(signal > 1e-12)) signal = 1.0;
    const GpModel gp =
        GpModel::Fit(x, y, {cfg.bayrn_length_scale, signal, 1e-4 * signal});
    Rng rng = MakeRng(ctx.seed, {Tag(Stream::kBayrn), uint64_t(k)});
    const Eigen::VectorXd next = BoSuggest(gp, lo, hi, rng, cfg.bayrn_starts);

    Uniform bounds{next.head(n).cwiseMin(next.tail(n)),
                   next.head(n).cwiseMax(next.tail(n))};
    IterationResult r;
    {
      TrainerConfig tc = cfg.trainer;
      tc.seed = DeriveSeed(ctx.seed, {Tag(Stream::kTraining),
                                      Tag(Stream::kBayrn), uint64_t(k), 0});
      tc.reward_threshold = ctx.problem->spec.reward_threshold;
      tc.threads = cfg.threads;
      TrainResult tr =
          TrainPolicy(bounds, ctx.problem->source, ctx.problem->spec, tc);
      r.policy = std::move(tr.policy);
      r.train_return = tr.train_return;
      r.reached_threshold = tr.reached_threshold;
    }
    r.iteration = k;
    r.inferred = bounds;
    r.raw_return = ctx.target->Evaluate(r.policy, cfg.bayrn_eval_episodes,
                                        {Tag(Stream::kBayrn), uint64_t(k)});
    own.push_back(std::move(r));
    Eigen::VectorXd stored(2 * n);
    stored << bounds.lo, bounds.hi;
    xs.push_back(stored);
    ys.push_back(own.back().raw_return);
    sources.push_back(&own.back());

    const int best = static_cast<int>(
        std::max_element(ys.begin(), ys.end()) - ys.begin());
    IterationResult report = *sources[best];
    report.iteration = k;
    report.member = -1;
    report.raw_return = ys[best];
    report.transitions_used = k * cfg.trajectory_len;
    out.iterations.push_back(std::move(report));
    trace << k << ',' << xs.size() << ',' << own.back().raw_return << ','
          << ys[best] << ',' << gp.jitter() << '\n';
  }
  out.traces.push_back({"bayrn", trace.str()});
  return out;
}

}  // namespace adr
