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

#ifndef ADR_METHODS_DATASET_H_
#define ADR_METHODS_DATASET_H_

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adr/envs/environment.h"

namespace adr {

// Cumulative target-domain data: trajectory k (1-based) carries
// meta.iteration == k.
struct Dataset {
  std::vector<Trajectory> trajectories;

  int size() const { return static_cast<int>(trajectories.size()); }
  int transitions() const;
  // the first k trajectories
  Dataset Prefix(int k) const;
};

// One JSON object per transition, in trajectory order:
//   {"iteration":1,"t":0,"s":[..],"a":[..],"s_next":[..],"r":-1.5,
//    "done":false,"diverged":false,"strategy":"random","seed":7,
//    "noise_variance":0.0001,"policy_iteration":-1}
// done and diverged describe the trajectory and are only set on its last
// transition. Doubles are written with round-trip precision, so equal
// datasets serialize to identical bytes.
std::string SerializeDataset(const Dataset& dataset);
void WriteDataset(const Dataset& dataset, const std::string& path);

class DatasetError : public std::runtime_error {
 public:
  DatasetError(const std::string& source, int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

// Throws DatasetError naming the offending line (1-based).
Dataset ParseDataset(std::istream& in, const std::string& source_name);
Dataset ReadDataset(const std::string& path);

// Protocol checks: trajectories no longer than max_len, finite values,
// consistent dimensions (against spec when given), consecutive time indices,
// s_next chaining and cumulative iteration indexing. Returns one message per
// violation; empty when valid.
std::vector<std::string> ValidateDataset(const Dataset& dataset, int max_len,
                                         const EnvironmentSpec* spec = nullptr);

}  // namespace adr

#endif  // ADR_METHODS_DATASET_H_
