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

#include "adr/harness/config.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace adr {
namespace {

// Shortest text that parses back to the same double.
std::string Num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string Join(const std::vector<std::string>& names) {
  std::string out;
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Fail(const std::string& path,
                         const std::string& what) const {
    throw ConfigError(source_ + ": " + path + ": " + what);
  }

  void CheckKeys(const YAML::Node& node, const std::string& path,
                 const std::set<std::string>& allowed) const {
    if (!node.IsMap()) Fail(path, "expected a mapping");
    for (const auto& kv : node) {
      std::string key = kv.first.as<std::string>();
      if (allowed.count(key)) continue;
      std::vector<std::string> names(allowed.begin(), allowed.end());
      std::string hint = Suggest(key, names);
      Fail(path, "unknown key '" + key + "'" +
                     (hint.empty() ? "" : " (did you mean '" + hint + "'?)"));
    }
  }

  template <typename T>
  void Get(const YAML::Node& node, const std::string& key,
           const std::string& path, T* out) const {
    YAML::Node v = node[key];
    if (!v) return;
    try {
      *out = v.as<T>();
    } catch (const YAML::Exception&) {
      Fail(path + "." + key, "cannot convert '" + Scalar(v) + "'");
    }
  }

  template <typename T>
  void GetOptional(const YAML::Node& node, const std::string& key,
                   const std::string& path, std::optional<T>* out) const {
    if (!node[key]) return;
    T value{};
    Get(node, key, path, &value);
    *out = value;
  }

 private:
  static std::string Scalar(const YAML::Node& v) {
    if (v.IsScalar()) return v.Scalar();
    std::ostringstream os;
    os << v;
    return os.str();
  }

  std::string source_;
};

void ApplyTrainer(const Reader& r, const YAML::Node& node, TrainerConfig* t) {
  const std::string path = "trainer";
  r.CheckKeys(node, path,
              {"gamma", "population", "elites", "episodes_per_candidate",
               "max_generations", "init_std", "noise_std", "min_noise_std",
               "architecture", "hidden"});
  r.Get(node, "gamma", path, &t->gamma);
  r.Get(node, "population", path, &t->population);
  r.Get(node, "elites", path, &t->elites);
  r.Get(node, "episodes_per_candidate", path, &t->episodes_per_candidate);
  r.Get(node, "max_generations", path, &t->max_generations);
  r.Get(node, "init_std", path, &t->init_std);
  r.Get(node, "noise_std", path, &t->noise_std);
  r.Get(node, "min_noise_std", path, &t->min_noise_std);
  r.Get(node, "hidden", path, &t->hidden);
  if (node["architecture"]) {
    std::string a;
    r.Get(node, "architecture", path, &a);
    try {
      t->architecture = ParseArchitecture(a);
    } catch (const std::invalid_argument& e) {
      r.Fail(path + ".architecture", e.what());
    }
  }
}

void ApplyEnvironment(const Reader& r, const YAML::Node& node,
                      const std::string& name, EnvironmentEntry* e) {
  const std::string path = "environments." + name;
  r.CheckKeys(node, path,
              {"ground_truth", "noise_variance", "reward_threshold",
               "worst_return", "architecture", "hidden", "max_generations"});
  r.Get(node, "ground_truth", path, &e->ground_truth);
  r.GetOptional(node, "noise_variance", path, &e->noise_variance);
  r.GetOptional(node, "reward_threshold", path, &e->reward_threshold);
  r.GetOptional(node, "worst_return", path, &e->worst_return);
  r.GetOptional(node, "hidden", path, &e->hidden);
  r.GetOptional(node, "max_generations", path, &e->max_generations);
  if (node["architecture"]) {
    std::string a;
    r.Get(node, "architecture", path, &a);
    try {
      e->architecture = ParseArchitecture(a);
    } catch (const std::invalid_argument& ex) {
      r.Fail(path + ".architecture", ex.what());
    }
  }
}

void Apply(const Reader& r, const YAML::Node& root, BenchmarkConfig* c) {
  if (!root || root.IsNull()) return;
  r.CheckKeys(root, "<root>",
              {"benchmark", "trainer", "environments", "udr", "bayrn",
               "simopt", "droid", "dropo"});
  MethodsConfig& m = c->methods_config;

  if (YAML::Node b = root["benchmark"]) {
    const std::string path = "benchmark";
    r.CheckKeys(b, path,
                {"environments", "settings", "methods", "seeds",
                 "collection_strategy", "iterations", "trajectory_len",
                 "transition_budget", "eval_episodes", "threads"});
    r.Get(b, "environments", path, &c->environments);
    r.Get(b, "methods", path, &c->methods);
    r.Get(b, "seeds", path, &c->seeds);
    if (b["settings"]) {
      std::vector<std::string> names;
      r.Get(b, "settings", path, &names);
      c->settings.clear();
      for (const std::string& n : names) {
        try {
          c->settings.push_back(ParseSetting(n));
        } catch (const std::invalid_argument& e) {
          r.Fail(path + ".settings", e.what());
        }
      }
    }
    if (b["collection_strategy"]) {
      std::string s;
      r.Get(b, "collection_strategy", path, &s);
      try {
        c->strategy = ParseStrategy(s);
      } catch (const std::invalid_argument& e) {
        r.Fail(path + ".collection_strategy", e.what());
      }
    }
    r.Get(b, "iterations", path, &m.iterations);
    r.Get(b, "trajectory_len", path, &m.trajectory_len);
    r.Get(b, "transition_budget", path, &m.transition_budget);
    r.Get(b, "eval_episodes", path, &m.eval_episodes);
    r.Get(b, "threads", path, &m.threads);
  }
  if (YAML::Node t = root["trainer"]) ApplyTrainer(r, t, &m.trainer);
  if (YAML::Node envs = root["environments"]) {
    if (!envs.IsMap()) r.Fail("environments", "expected a mapping");
    for (const auto& kv : envs) {
      std::string name = kv.first.as<std::string>();
      auto it = std::find_if(
          c->env_entries.begin(), c->env_entries.end(),
          [&](const EnvironmentEntry& e) { return e.name == name; });
      if (it == c->env_entries.end()) {
        std::string hint = Suggest(name, KnownEnvironments());
        r.Fail("environments",
               "unknown environment '" + name + "' (valid: " +
                   Join(KnownEnvironments()) + ")" +
                   (hint.empty() ? "" : ", did you mean '" + hint + "'?"));
      }
      ApplyEnvironment(r, kv.second, name, &*it);
    }
  }
  if (YAML::Node u = root["udr"]) {
    r.CheckKeys(u, "udr", {"configs"});
    r.Get(u, "configs", "udr", &m.udr_configs);
  }
  if (YAML::Node b = root["bayrn"]) {
    r.CheckKeys(b, "bayrn", {"eval_episodes", "starts", "length_scale"});
    r.Get(b, "eval_episodes", "bayrn", &m.bayrn_eval_episodes);
    r.Get(b, "starts", "bayrn", &m.bayrn_starts);
    r.Get(b, "length_scale", "bayrn", &m.bayrn_length_scale);
  }
  if (YAML::Node s = root["simopt"]) {
    r.CheckKeys(s, "simopt",
                {"kl_bound", "samples_per_update", "updates_per_iteration",
                 "variance_floor", "enforce_kl", "simopt1_updates",
                 "discrepancy_l1", "discrepancy_l2", "missing_step_factor"});
    r.Get(s, "kl_bound", "simopt", &m.reps.kl_bound);
    r.Get(s, "samples_per_update", "simopt", &m.reps.samples_per_update);
    r.Get(s, "updates_per_iteration", "simopt",
          &m.reps.updates_per_iteration);
    r.Get(s, "variance_floor", "simopt", &m.reps.variance_floor);
    r.Get(s, "enforce_kl", "simopt", &m.reps.enforce_kl);
    r.Get(s, "simopt1_updates", "simopt", &m.simopt1_updates);
    r.Get(s, "discrepancy_l1", "simopt", &m.discrepancy_l1);
    r.Get(s, "discrepancy_l2", "simopt", &m.discrepancy_l2);
    r.Get(s, "missing_step_factor", "simopt", &m.missing_step_factor);
  }
  if (YAML::Node d = root["droid"]) {
    r.CheckKeys(d, "droid", {"evals", "sigma0"});
    r.Get(d, "evals", "droid", &m.droid_evals);
    r.Get(d, "sigma0", "droid", &m.droid_sigma0);
  }
  if (YAML::Node d = root["dropo"]) {
    r.CheckKeys(d, "dropo",
                {"evals", "sigma0", "epsilons", "samples_per_dim", "holdout"});
    r.Get(d, "evals", "dropo", &m.dropo_evals);
    r.Get(d, "sigma0", "dropo", &m.dropo_sigma0);
    r.Get(d, "epsilons", "dropo", &m.dropo_epsilons);
    r.Get(d, "samples_per_dim", "dropo", &m.dropo_samples_per_dim);
    r.Get(d, "holdout", "dropo", &m.dropo_holdout);
  }
}

void EmitNums(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v) out << Num(x);
  out << YAML::EndSeq;
}

void EmitInts(YAML::Emitter& out, const std::vector<int>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (int x : v) out << x;
  out << YAML::EndSeq;
}

}  // namespace

std::vector<std::string> KnownMethods() {
  return {"udr", "bayrn", "simopt", "simopt1", "droid", "dropo"};
}

int EditDistance(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string Suggest(const std::string& name,
                    const std::vector<std::string>& candidates) {
  std::string best;
  int best_d = 4;
  for (const std::string& c : candidates) {
    int d = EditDistance(name, c);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

void BenchmarkConfig::Validate() const {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (environments.empty()) fail("benchmark.environments is empty");
  if (settings.empty()) fail("benchmark.settings is empty");
  if (methods.empty()) fail("benchmark.methods is empty");
  if (seeds.empty()) fail("benchmark.seeds is empty");
  std::vector<std::string> known = KnownMethods();
  for (const std::string& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      std::string hint = Suggest(m, known);
      fail("unknown method '" + m + "' (valid: " + Join(known) + ")" +
           (hint.empty() ? "" : ", did you mean '" + hint + "'?"));
    }
  }
  for (const std::string& e : environments) {
    SpecFor(e).Validate();
    MethodsFor(e).trainer.Validate();
  }
  try {
    methods_config.Validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

const EnvironmentEntry& BenchmarkConfig::Entry(const std::string& env) const {
  for (const EnvironmentEntry& e : env_entries) {
    if (e.name == env) return e;
  }
  std::vector<std::string> names;
  for (const EnvironmentEntry& e : env_entries) names.push_back(e.name);
  std::string hint = Suggest(env, names);
  throw ConfigError("unknown environment '" + env + "' (valid: " +
                    Join(names) + ")" +
                    (hint.empty() ? "" : ", did you mean '" + hint + "'?"));
}

EnvironmentSpec BenchmarkConfig::SpecFor(const std::string& env) const {
  const EnvironmentEntry& e = Entry(env);
  EnvironmentSpec spec = MakeDefaultSpec(env);
  if (!e.ground_truth.empty()) {
    if (static_cast<int>(e.ground_truth.size()) != spec.n_xi()) {
      throw ConfigError("environments." + env + ".ground_truth needs " +
                        std::to_string(spec.n_xi()) + " values");
    }
    spec.ground_truth.values = Eigen::Map<const Eigen::VectorXd>(
        e.ground_truth.data(), e.ground_truth.size());
    spec.xi_lo = 0.25 * spec.ground_truth.values;
    spec.xi_hi = 2.5 * spec.ground_truth.values;
  }
  if (e.noise_variance) spec.noise_variance = *e.noise_variance;
  if (e.reward_threshold) spec.reward_threshold = *e.reward_threshold;
  if (e.worst_return) spec.worst_return = *e.worst_return;
  try {
    spec.Validate();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  return spec;
}

MethodsConfig BenchmarkConfig::MethodsFor(const std::string& env) const {
  const EnvironmentEntry& e = Entry(env);
  MethodsConfig m = methods_config;
  if (e.architecture) m.trainer.architecture = *e.architecture;
  if (e.hidden) m.trainer.hidden = *e.hidden;
  if (e.max_generations) m.trainer.max_generations = *e.max_generations;
  return m;
}

BenchmarkConfig DefaultBenchmarkConfig() {
  BenchmarkConfig c;
  // Thresholds: 90% of the return reached by training on the ground truth,
  // see `adr_bench calibrate`. Pendulum is cost-style and uses the
  // zero-action return as the 0 anchor.
  EnvironmentEntry pendulum;
  pendulum.name = "pendulum";
  pendulum.ground_truth = {1.0, 1.0, 0.05};
  pendulum.noise_variance = 1e-4;
  pendulum.reward_threshold = -693.7;
  pendulum.worst_return = -4874.7;
  pendulum.architecture = Architecture::kLinear;
  pendulum.hidden = std::vector<int>{};
  pendulum.max_generations = 300;

  EnvironmentEntry cartpole;
  cartpole.name = "cartpole";
  cartpole.ground_truth = {1.0, 0.3, 1.0, 0.1, 0.01};
  cartpole.noise_variance = 1e-4;
  cartpole.reward_threshold = 388.6;
  cartpole.architecture = Architecture::kMlp;
  cartpole.hidden = std::vector<int>{32, 32};
  cartpole.max_generations = 150;

  EnvironmentEntry acrobot;
  acrobot.name = "acrobot";
  acrobot.ground_truth = {1.0, 1.0, 1.0, 1.0, 0.05, 0.05};
  acrobot.noise_variance = 1e-3;
  acrobot.reward_threshold = 260.8;
  acrobot.architecture = Architecture::kMlp;
  acrobot.hidden = std::vector<int>{32, 32};
  acrobot.max_generations = 150;

  c.env_entries = {pendulum, cartpole, acrobot};
  return c;
}

BenchmarkConfig ParseConfig(const std::string& yaml_text,
                            const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(source + ": " + e.what());
  }
  BenchmarkConfig c = DefaultBenchmarkConfig();
  Reader reader(source);
  Apply(reader, root, &c);
  try {
    c.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

BenchmarkConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str(), path);
}

std::string DumpConfig(const BenchmarkConfig& c) {
  const MethodsConfig& m = c.methods_config;
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "benchmark" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "environments" << YAML::Value << YAML::Flow
      << c.environments;
  std::vector<std::string> settings;
  for (Setting s : c.settings) settings.push_back(SettingName(s));
  out << YAML::Key << "settings" << YAML::Value << YAML::Flow << settings;
  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << c.methods;
  out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (uint64_t s : c.seeds) out << s;
  out << YAML::EndSeq;
  out << YAML::Key << "collection_strategy" << YAML::Value
      << StrategyName(c.strategy);
  out << YAML::Key << "iterations" << YAML::Value << m.iterations;
  out << YAML::Key << "trajectory_len" << YAML::Value << m.trajectory_len;
  out << YAML::Key << "transition_budget" << YAML::Value
      << m.transition_budget;
  out << YAML::Key << "eval_episodes" << YAML::Value << m.eval_episodes;
  out << YAML::Key << "threads" << YAML::Value << m.threads;
  out << YAML::EndMap;

  const TrainerConfig& t = m.trainer;
  out << YAML::Key << "trainer" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gamma" << YAML::Value << Num(t.gamma);
  out << YAML::Key << "population" << YAML::Value << t.population;
  out << YAML::Key << "elites" << YAML::Value << t.elites;
  out << YAML::Key << "episodes_per_candidate" << YAML::Value
      << t.episodes_per_candidate;
  out << YAML::Key << "max_generations" << YAML::Value << t.max_generations;
  out << YAML::Key << "init_std" << YAML::Value << Num(t.init_std);
  out << YAML::Key << "noise_std" << YAML::Value << Num(t.noise_std);
  out << YAML::Key << "min_noise_std" << YAML::Value << Num(t.min_noise_std);
  out << YAML::Key << "architecture" << YAML::Value
      << ArchitectureName(t.architecture);
  out << YAML::Key << "hidden" << YAML::Value;
  EmitInts(out, t.hidden);
  out << YAML::EndMap;

  out << YAML::Key << "environments" << YAML::Value << YAML::BeginMap;
  for (const EnvironmentEntry& e : c.env_entries) {
    out << YAML::Key << e.name << YAML::Value << YAML::BeginMap;
    if (!e.ground_truth.empty()) {
      out << YAML::Key << "ground_truth" << YAML::Value;
      EmitNums(out, e.ground_truth);
    }
    if (e.noise_variance) {
      out << YAML::Key << "noise_variance" << YAML::Value
          << Num(*e.noise_variance);
    }
    if (e.reward_threshold) {
      out << YAML::Key << "reward_threshold" << YAML::Value
          << Num(*e.reward_threshold);
    }
    if (e.worst_return) {
      out << YAML::Key << "worst_return" << YAML::Value
          << Num(*e.worst_return);
    }
    if (e.architecture) {
      out << YAML::Key << "architecture" << YAML::Value
          << ArchitectureName(*e.architecture);
    }
    if (e.hidden) {
      out << YAML::Key << "hidden" << YAML::Value;
      EmitInts(out, *e.hidden);
    }
    if (e.max_generations) {
      out << YAML::Key << "max_generations" << YAML::Value
          << *e.max_generations;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndMap;

  out << YAML::Key << "udr" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "configs" << YAML::Value << m.udr_configs;
  out << YAML::EndMap;

  out << YAML::Key << "bayrn" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "eval_episodes" << YAML::Value << m.bayrn_eval_episodes;
  out << YAML::Key << "starts" << YAML::Value << m.bayrn_starts;
  out << YAML::Key << "length_scale" << YAML::Value
      << Num(m.bayrn_length_scale);
  out << YAML::EndMap;

  out << YAML::Key << "simopt" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kl_bound" << YAML::Value << Num(m.reps.kl_bound);
  out << YAML::Key << "samples_per_update" << YAML::Value
      << m.reps.samples_per_update;
  out << YAML::Key << "updates_per_iteration" << YAML::Value
      << m.reps.updates_per_iteration;
  out << YAML::Key << "variance_floor" << YAML::Value
      << Num(m.reps.variance_floor);
  out << YAML::Key << "enforce_kl" << YAML::Value << m.reps.enforce_kl;
  out << YAML::Key << "simopt1_updates" << YAML::Value << m.simopt1_updates;
  out << YAML::Key << "discrepancy_l1" << YAML::Value << Num(m.discrepancy_l1);
  out << YAML::Key << "discrepancy_l2" << YAML::Value << Num(m.discrepancy_l2);
  out << YAML::Key << "missing_step_factor" << YAML::Value
      << Num(m.missing_step_factor);
  out << YAML::EndMap;

  out << YAML::Key << "droid" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "evals" << YAML::Value << m.droid_evals;
  out << YAML::Key << "sigma0" << YAML::Value << Num(m.droid_sigma0);
  out << YAML::EndMap;

  out << YAML::Key << "dropo" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "evals" << YAML::Value << m.dropo_evals;
  out << YAML::Key << "sigma0" << YAML::Value << Num(m.dropo_sigma0);
  out << YAML::Key << "epsilons" << YAML::Value;
  EmitNums(out, m.dropo_epsilons);
  out << YAML::Key << "samples_per_dim" << YAML::Value
      << m.dropo_samples_per_dim;
  out << YAML::Key << "holdout" << YAML::Value << Num(m.dropo_holdout);
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string Fnv1aHex(const std::string& text) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string RunId(const BenchmarkConfig& config) {
  return Fnv1aHex(DumpConfig(config));
}

}  // namespace adr
