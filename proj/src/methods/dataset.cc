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

#include "adr/methods/dataset.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace adr {
namespace {

using nlohmann::json;

json ToJson(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Eigen::VectorXd VectorFrom(const json& j, const char* field) {
  const json& a = j.at(field);
  if (!a.is_array()) throw std::invalid_argument(std::string(field) + " is not an array");
  Eigen::VectorXd v(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) {
      throw std::invalid_argument(std::string(field) + " has a non-numeric entry");
    }
    v[i] = a[i].get<double>();
  }
  return v;
}

}  // namespace

int Dataset::transitions() const {
  int n = 0;
  for (const Trajectory& t : trajectories) n += t.size();
  return n;
}

Dataset Dataset::Prefix(int k) const {
  if (k < 0 || k > size()) {
    throw std::out_of_range("dataset has " + std::to_string(size()) +
                            " trajectories, asked for " + std::to_string(k));
  }
  Dataset d;
  d.trajectories.assign(trajectories.begin(), trajectories.begin() + k);
  return d;
}

std::string SerializeDataset(const Dataset& dataset) {
  std::string out;
  for (const Trajectory& traj : dataset.trajectories) {
    for (int t = 0; t < traj.size(); ++t) {
      const bool last = t + 1 == traj.size();
      json j;
      j["iteration"] = traj.meta.iteration;
      j["t"] = t;
      j["s"] = ToJson(traj.states[t]);
      j["a"] = ToJson(traj.actions[t]);
      j["s_next"] = ToJson(traj.states[t + 1]);
      j["r"] = traj.rewards[t];
      j["done"] = last && traj.done;
      j["diverged"] = last && traj.diverged;
      j["strategy"] = traj.meta.strategy;
      j["seed"] = traj.meta.seed;
      j["noise_variance"] = traj.meta.noise_variance;
      j["policy_iteration"] = traj.meta.policy_iteration;
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

void WriteDataset(const Dataset& dataset, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << SerializeDataset(dataset);
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

DatasetError::DatasetError(const std::string& source, int line,
                           const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
      line_(line) {}

Dataset ParseDataset(std::istream& in, const std::string& source_name) {
  Dataset d;
  std::string line;
  int number = 0;
  bool open = false;  // last trajectory may still grow
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object()) throw std::invalid_argument("not a JSON object");
      const int iteration = j.at("iteration").get<int>();
      const int t = j.at("t").get<int>();
      Eigen::VectorXd s = VectorFrom(j, "s");
      Eigen::VectorXd a = VectorFrom(j, "a");
      Eigen::VectorXd s_next = VectorFrom(j, "s_next");
      if (!j.at("r").is_number()) throw std::invalid_argument("r is not a number");
      const double r = j.at("r").get<double>();
      if (t == 0 || !open || d.trajectories.back().meta.iteration != iteration) {
        Trajectory traj;
        traj.meta.iteration = iteration;
        traj.meta.strategy = j.at("strategy").get<std::string>();
        traj.meta.seed = j.at("seed").get<uint64_t>();
        traj.meta.noise_variance = j.at("noise_variance").get<double>();
        traj.meta.policy_iteration = j.at("policy_iteration").get<int>();
        traj.states.push_back(s);
        d.trajectories.push_back(std::move(traj));
      }
      Trajectory& traj = d.trajectories.back();
      if (t != traj.size()) {
        throw std::invalid_argument("expected t=" + std::to_string(traj.size()) +
                                    ", found t=" + std::to_string(t));
      }
      if (traj.states.back() != s) {
        throw std::invalid_argument("s does not match the previous s_next");
      }
      traj.actions.push_back(std::move(a));
      traj.states.push_back(std::move(s_next));
      traj.rewards.push_back(r);
      traj.done = j.at("done").get<bool>();
      traj.diverged = j.at("diverged").get<bool>();
      open = !(traj.done || traj.diverged);
    } catch (const std::exception& e) {
      throw DatasetError(source_name, number, e.what());
    }
  }
  return d;
}

Dataset ReadDataset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open dataset '" + path + "'");
  return ParseDataset(f, path);
}

std::vector<std::string> ValidateDataset(const Dataset& dataset, int max_len,
                                         const EnvironmentSpec* spec) {
  std::vector<std::string> issues;
  auto fail = [&](int k, const std::string& what) {
    issues.push_back("trajectory " + std::to_string(k + 1) + ": " + what);
  };
  for (int k = 0; k < dataset.size(); ++k) {
    const Trajectory& traj = dataset.trajectories[k];
    if (traj.meta.iteration != k + 1) {
      fail(k, "iteration index " + std::to_string(traj.meta.iteration) +
                  " breaks cumulative indexing");
    }
    if (traj.size() < 1) fail(k, "empty trajectory");
    if (traj.size() > max_len) {
      fail(k, "length " + std::to_string(traj.size()) + " exceeds " +
                  std::to_string(max_len));
    }
    if (traj.states.size() != traj.actions.size() + 1 ||
        traj.rewards.size() != traj.actions.size()) {
      fail(k, "inconsistent state/action/reward counts");
      continue;
    }
    const int n_state = spec ? spec->latent_dim() : traj.states[0].size();
    const int n_action = spec ? spec->n_a()
                              : (traj.actions.empty() ? 0 : traj.actions[0].size());
    for (size_t i = 0; i < traj.states.size(); ++i) {
      if (traj.states[i].size() != n_state) {
        fail(k, "state " + std::to_string(i) + " has wrong dimension");
      } else if (!traj.states[i].allFinite()) {
        fail(k, "state " + std::to_string(i) + " is not finite");
      }
    }
    for (size_t i = 0; i < traj.actions.size(); ++i) {
      if (traj.actions[i].size() != n_action) {
        fail(k, "action " + std::to_string(i) + " has wrong dimension");
      } else if (!traj.actions[i].allFinite()) {
        fail(k, "action " + std::to_string(i) + " is not finite");
      }
      if (!std::isfinite(traj.rewards[i])) {
        fail(k, "reward " + std::to_string(i) + " is not finite");
      }
    }
    if (!(traj.meta.noise_variance >= 0.0)) fail(k, "negative noise variance");
  }
  return issues;
}

}  // namespace adr
