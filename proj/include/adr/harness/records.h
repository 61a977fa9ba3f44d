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

#ifndef ADR_HARNESS_RECORDS_H_
#define ADR_HARNESS_RECORDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adr/dist/distribution.h"
#include "adr/envs/environment.h"

namespace adr {

// One benchmark measurement.
struct ResultRecord {
  std::string method;
  std::string env;
  std::string setting;
  // collection strategy of the offline data; empty for other methods
  std::string strategy;
  int iteration = 0;
  // UDR ensemble member, -1 for a method's answer
  int member = -1;
  uint64_t seed = 0;
  double raw_return = 0.0;
  double normalized_return = 0.0;
  int transitions_used = 0;
  std::optional<DomainDistribution> inferred;
  // "ok", "budget_exceeded" or "error"
  std::string status = "ok";
  std::string message;
  // seconds; written to records.json only so that records.csv is
  // reproducible
  double wall_time = 0.0;

  bool operator==(const ResultRecord& other) const;
};

// raw / threshold for positive-scale rewards. For cost-style rewards
// (worst set) the map is (raw - worst) / (threshold - worst), so the worst
// reference maps to 0 and the threshold to 1. Throws std::invalid_argument
// if the scale is degenerate.
double NormalizedReturn(double raw, double threshold,
                        std::optional<double> worst = std::nullopt);
double NormalizedReturn(double raw, const EnvironmentSpec& spec);

// records.csv columns, in order.
const std::vector<std::string>& RecordColumns();

std::string RecordsToCsv(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> RecordsFromCsv(const std::string& text);
std::string RecordsToJson(const std::vector<ResultRecord>& records);
std::vector<ResultRecord> RecordsFromJson(const std::string& text);

// format is "csv" or "json". I/O errors throw std::runtime_error naming path.
void ExportResults(const std::vector<ResultRecord>& records,
                   const std::string& path, const std::string& format);
std::vector<ResultRecord> ImportResults(const std::string& path);

// Stable order: env, setting, seed, method, strategy, iteration, member.
void SortRecords(std::vector<ResultRecord>* records);

struct SummaryRow {
  std::string method;
  std::string env;
  std::string setting;
  std::string strategy;
  int iteration = 0;
  int seeds = 0;
  double mean = 0.0;
  // sample standard deviation, 0 for a single seed
  double sd = 0.0;
  bool partial = false;
};

// Mean and sd of normalized_return over seeds per (method, env, setting,
// strategy, iteration), on answer records (member -1) with status ok. A row
// is partial when it has fewer than expected_seeds seeds.
std::vector<SummaryRow> Aggregate(const std::vector<ResultRecord>& records,
                                  int expected_seeds);

const std::vector<std::string>& SummaryColumns();
std::string SummaryToCsv(const std::vector<SummaryRow>& rows);
std::string SummaryToJson(const std::vector<SummaryRow>& rows);

}  // namespace adr

#endif  // ADR_HARNESS_RECORDS_H_
