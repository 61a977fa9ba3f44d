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

#include "adr/policy/policy.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adr {
namespace {

using Buffer = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, Policy::kMaxWidth, 1>;

std::vector<int> LayerSizes(const PolicyShape& shape) {
  std::vector<int> sizes = {shape.n_in};
  if (shape.architecture == Architecture::kMlp) {
    sizes.insert(sizes.end(), shape.hidden.begin(), shape.hidden.end());
  }
  sizes.push_back(shape.n_out);
  return sizes;
}

}  // namespace

int PolicyShape::NumWeights() const {
  std::vector<int> sizes = LayerSizes(*this);
  int total = 0;
  for (size_t i = 0; i + 1 < sizes.size(); ++i) {
    total += sizes[i + 1] * (sizes[i] + 1);
  }
  return total;
}

std::string ArchitectureName(Architecture a) {
  return a == Architecture::kLinear ? "linear" : "mlp";
}

Architecture ParseArchitecture(const std::string& name) {
  if (name == "linear") return Architecture::kLinear;
  if (name == "mlp") return Architecture::kMlp;
  throw std::invalid_argument("unknown policy architecture '" + name +
                              "' (expected linear or mlp)");
}

Policy::Policy(PolicyShape shape, Eigen::VectorXd action_lo,
               Eigen::VectorXd action_hi, Eigen::VectorXd weights)
    : shape_(std::move(shape)),
      action_lo_(std::move(action_lo)),
      action_hi_(std::move(action_hi)),
      weights_(std::move(weights)) {
  if (weights_.size() != shape_.NumWeights()) {
    throw std::invalid_argument(
        "policy expects " + std::to_string(shape_.NumWeights()) +
        " weights, got " + std::to_string(weights_.size()));
  }
  if (action_lo_.size() != shape_.n_out || action_hi_.size() != shape_.n_out) {
    throw std::invalid_argument("action bounds do not match the policy output");
  }
  for (int width : LayerSizes(shape_)) {
    if (width <= 0 || width > kMaxWidth) {
      throw std::invalid_argument("policy layer width out of range");
    }
  }
}

PolicyShape Policy::ShapeFor(const EnvironmentSpec& spec,
                             Architecture architecture,
                             const std::vector<int>& hidden) {
  PolicyShape shape;
  shape.architecture = architecture;
  shape.n_in = spec.n_s();
  shape.n_out = spec.n_a();
  if (architecture == Architecture::kMlp) shape.hidden = hidden;
  else shape.hidden.clear();
  return shape;
}

Policy Policy::Zero(const PolicyShape& shape, const EnvironmentSpec& spec) {
  return Policy(shape, spec.action_lo, spec.action_hi,
                Eigen::VectorXd::Zero(shape.NumWeights()));
}

void Policy::Act(const Eigen::VectorXd& obs, Eigen::VectorXd* action) const {
  const std::vector<int>& hidden = shape_.hidden;
  const bool mlp = shape_.architecture == Architecture::kMlp;
  const int layers = mlp ? static_cast<int>(hidden.size()) + 1 : 1;

  Buffer in = obs;
  Buffer out;
  const double* w = weights_.data();
  int width = shape_.n_in;
  for (int l = 0; l < layers; ++l) {
    const int next = (l + 1 < layers) ? hidden[l] : shape_.n_out;
    Eigen::Map<const Eigen::MatrixXd> weight(w, next, width);
    Eigen::Map<const Eigen::VectorXd> bias(w + next * width, next);
    out.noalias() = weight * in;
    out += bias;
    out = out.array().tanh();
    w += next * (width + 1);
    width = next;
    in = out;
  }
  action->resize(shape_.n_out);
  for (int i = 0; i < shape_.n_out; ++i) {
    const double mid = 0.5 * (action_hi_[i] + action_lo_[i]);
    const double half = 0.5 * (action_hi_[i] - action_lo_[i]);
    (*action)[i] = mid + half * in[i];
  }
}

Eigen::VectorXd Policy::Act(const Eigen::VectorXd& obs) const {
  Eigen::VectorXd action;
  Act(obs, &action);
  return action;
}

Controller Policy::AsController() const {
  return [this](const Eigen::VectorXd& obs, Eigen::VectorXd* action) {
    Act(obs, action);
  };
}

bool Policy::operator==(const Policy& other) const {
  return shape_ == other.shape_ && action_lo_ == other.action_lo_ &&
         action_hi_ == other.action_hi_ && weights_ == other.weights_;
}

void SavePolicy(const Policy& policy, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write policy file " + path);
  const PolicyShape& shape = policy.shape();
  char buf[64];
  auto hex = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%a", v);
    return std::string(buf);
  };
  out << "architecture " << ArchitectureName(shape.architecture) << "\n";
  out << "inputs " << shape.n_in << "\noutputs " << shape.n_out << "\n";
  out << "hidden";
  for (int h : shape.hidden) out << ' ' << h;
  out << "\naction_lo";
  for (double v : policy.action_lo()) out << ' ' << hex(v);
  out << "\naction_hi";
  for (double v : policy.action_hi()) out << ' ' << hex(v);
  out << "\nweights " << policy.weights().size() << "\n";
  for (double v : policy.weights()) out << hex(v) << "\n";
  if (!out) throw std::runtime_error("error writing policy file " + path);
}

Policy LoadPolicy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read policy file " + path);
  auto fail = [&path](const std::string& what) {
    return std::runtime_error("malformed policy file " + path + ": " + what);
  };
  auto line_values = [&](const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw fail("missing '" + key + "'");
    std::stringstream ss(line);
    std::string k;
    ss >> k;
    if (k != key) throw fail("expected '" + key + "'");
    std::vector<std::string> values;
    std::string v;
    while (ss >> v) values.push_back(v);
    return values;
  };
  auto to_vec = [](const std::vector<std::string>& values) {
    Eigen::VectorXd v(values.size());
    for (size_t i = 0; i < values.size(); ++i) v[i] = std::strtod(values[i].c_str(), nullptr);
    return v;
  };
  try {
    PolicyShape shape;
    shape.architecture = ParseArchitecture(line_values("architecture").at(0));
    shape.n_in = std::stoi(line_values("inputs").at(0));
    shape.n_out = std::stoi(line_values("outputs").at(0));
    shape.hidden.clear();
    for (const auto& h : line_values("hidden")) shape.hidden.push_back(std::stoi(h));
    Eigen::VectorXd lo = to_vec(line_values("action_lo"));
    Eigen::VectorXd hi = to_vec(line_values("action_hi"));
    const int n = std::stoi(line_values("weights").at(0));
    Eigen::VectorXd weights(n);
    std::string line;
    for (int i = 0; i < n; ++i) {
      if (!std::getline(in, line)) throw fail("truncated weights");
      weights[i] = std::strtod(line.c_str(), nullptr);
    }
    return Policy(shape, lo, hi, weights);
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception& e) {
    throw fail(e.what());
  }
}

}  // namespace adr
