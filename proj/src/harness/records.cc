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

#include "adr/harness/records.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace adr {
namespace {

using nlohmann::json;

std::string Num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseNum(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::string Quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// RFC 4180 rows; quoted fields may contain commas, quotes and newlines.
std::vector<std::vector<std::string>> ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw std::invalid_argument("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

json NumJson(double v) {
  if (std::isfinite(v)) return v;
  return Num(v);
}

double NumFromJson(const json& j) {
  if (j.is_string()) return ParseNum(j.get<std::string>());
  return j.get<double>();
}

}  // namespace

bool ResultRecord::operator==(const ResultRecord& o) const {
  auto same = [](double a, double b) {
    return a == b || (std::isnan(a) && std::isnan(b));
  };
  return method == o.method && env == o.env && setting == o.setting &&
         strategy == o.strategy && iteration == o.iteration &&
         member == o.member && seed == o.seed &&
         same(raw_return, o.raw_return) &&
         same(normalized_return, o.normalized_return) &&
         transitions_used == o.transitions_used && inferred == o.inferred &&
         status == o.status && message == o.message &&
         same(wall_time, o.wall_time);
}

double NormalizedReturn(double raw, double threshold,
                        std::optional<double> worst) {
  if (worst) {
    if (!(threshold != *worst)) {
      throw std::invalid_argument(
          "normalized return: threshold equals the worst reference");
    }
    return (raw - *worst) / (threshold - *worst);
  }
  if (!(threshold > 0.0)) {
    throw std::invalid_argument(
        "normalized return: positive-scale threshold must be > 0");
  }
  return raw / threshold;
}

double NormalizedReturn(double raw, const EnvironmentSpec& spec) {
  if (spec.negative_rewards) {
    return NormalizedReturn(raw, spec.reward_threshold, spec.worst_return);
  }
  return NormalizedReturn(raw, spec.reward_threshold);
}

const std::vector<std::string>& RecordColumns() {
  static const std::vector<std::string> kColumns = {
      "method",           "env",    "setting", "strategy",
      "iteration",        "member", "seed",    "raw_return",
      "normalized_return", "transitions_used", "status",
      "distribution",     "message"};
  return kColumns;
}

std::string RecordsToCsv(const std::vector<ResultRecord>& records) {
  std::ostringstream os;
  const auto& cols = RecordColumns();
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const ResultRecord& r : records) {
    os << Quote(r.method) << ',' << Quote(r.env) << ',' << Quote(r.setting)
       << ',' << Quote(r.strategy) << ',' << r.iteration << ',' << r.member
       << ',' << r.seed << ',' << Num(r.raw_return) << ','
       << Num(r.normalized_return) << ',' << r.transitions_used << ','
       << Quote(r.status) << ','
       << Quote(r.inferred ? ToString(*r.inferred) : "") << ','
       << Quote(r.message) << "\n";
  }
  return os.str();
}

std::vector<ResultRecord> RecordsFromCsv(const std::string& text) {
  auto rows = ParseCsv(text);
  if (rows.empty() || rows[0] != RecordColumns()) {
    throw std::invalid_argument("records CSV: header does not match");
  }
  std::vector<ResultRecord> out;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i];
    if (f.size() != RecordColumns().size()) {
      throw std::invalid_argument("records CSV: row " + std::to_string(i) +
                                  " has " + std::to_string(f.size()) +
                                  " fields");
    }
    ResultRecord r;
    r.method = f[0];
    r.env = f[1];
    r.setting = f[2];
    r.strategy = f[3];
    r.iteration = std::stoi(f[4]);
    r.member = std::stoi(f[5]);
    r.seed = std::stoull(f[6]);
    r.raw_return = ParseNum(f[7]);
    r.normalized_return = ParseNum(f[8]);
    r.transitions_used = std::stoi(f[9]);
    r.status = f[10];
    if (!f[11].empty()) r.inferred = DistributionFromString(f[11]);
    r.message = f[12];
    out.push_back(std::move(r));
  }
  return out;
}

std::string RecordsToJson(const std::vector<ResultRecord>& records) {
  json arr = json::array();
  for (const ResultRecord& r : records) {
    json j;
    j["method"] = r.method;
    j["env"] = r.env;
    j["setting"] = r.setting;
    j["strategy"] = r.strategy;
    j["iteration"] = r.iteration;
    j["member"] = r.member;
    j["seed"] = r.seed;
    j["raw_return"] = NumJson(r.raw_return);
    j["normalized_return"] = NumJson(r.normalized_return);
    j["transitions_used"] = r.transitions_used;
    j["status"] = r.status;
    j["distribution"] = r.inferred ? ToString(*r.inferred) : "";
    j["message"] = r.message;
    j["wall_time"] = NumJson(r.wall_time);
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

std::vector<ResultRecord> RecordsFromJson(const std::string& text) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("records JSON: ") + e.what());
  }
  if (!arr.is_array()) {
    throw std::invalid_argument("records JSON: expected an array");
  }
  std::vector<ResultRecord> out;
  try {
    for (const json& j : arr) {
      ResultRecord r;
      r.method = j.at("method").get<std::string>();
      r.env = j.at("env").get<std::string>();
      r.setting = j.at("setting").get<std::string>();
      r.strategy = j.at("strategy").get<std::string>();
      r.iteration = j.at("iteration").get<int>();
      r.member = j.at("member").get<int>();
      r.seed = j.at("seed").get<uint64_t>();
      r.raw_return = NumFromJson(j.at("raw_return"));
      r.normalized_return = NumFromJson(j.at("normalized_return"));
      r.transitions_used = j.at("transitions_used").get<int>();
      r.status = j.at("status").get<std::string>();
      std::string d = j.at("distribution").get<std::string>();
      if (!d.empty()) r.inferred = DistributionFromString(d);
      r.message = j.at("message").get<std::string>();
      r.wall_time = NumFromJson(j.at("wall_time"));
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("records JSON: ") + e.what());
  }
  return out;
}

void ExportResults(const std::vector<ResultRecord>& records,
                   const std::string& path, const std::string& format) {
  if (format == "csv") {
    WriteFile(path, RecordsToCsv(records));
  } else if (format == "json") {
    WriteFile(path, RecordsToJson(records));
  } else {
    throw std::invalid_argument("unknown format '" + format +
                                "' (valid: csv, json)");
  }
}

std::vector<ResultRecord> ImportResults(const std::string& path) {
  std::string text = ReadFile(path);
  try {
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
      return RecordsFromJson(text);
    }
    return RecordsFromCsv(text);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void SortRecords(std::vector<ResultRecord>* records) {
  std::stable_sort(records->begin(), records->end(),
                   [](const ResultRecord& a, const ResultRecord& b) {
                     return std::tie(a.env, a.setting, a.seed, a.method,
                                     a.strategy, a.iteration, a.member) <
                            std::tie(b.env, b.setting, b.seed, b.method,
                                     b.strategy, b.iteration, b.member);
                   });
}

std::vector<SummaryRow> Aggregate(const std::vector<ResultRecord>& records,
                                  int expected_seeds) {
  using Key = std::tuple<std::string, std::string, std::string, std::string,
                         int>;
  // seed -> value keeps the result independent of record order
  std::map<Key, std::map<uint64_t, double>> groups;
  for (const ResultRecord& r : records) {
    if (r.member != -1 || r.status != "ok") continue;
    groups[{r.method, r.env, r.setting, r.strategy, r.iteration}][r.seed] =
        r.normalized_return;
  }
  std::vector<SummaryRow> rows;
  for (const auto& [key, by_seed] : groups) {
    SummaryRow row;
    std::tie(row.method, row.env, row.setting, row.strategy, row.iteration) =
        key;
    row.seeds = static_cast<int>(by_seed.size());
    double sum = 0.0;
    for (const auto& [seed, v] : by_seed) sum += v;
    row.mean = sum / row.seeds;
    if (row.seeds > 1) {
      double ss = 0.0;
      for (const auto& [seed, v] : by_seed) ss += (v - row.mean) * (v - row.mean);
      row.sd = std::sqrt(ss / (row.seeds - 1));
    }
    row.partial = row.seeds < expected_seeds;
    rows.push_back(row);
  }
  return rows;
}

const std::vector<std::string>& SummaryColumns() {
  static const std::vector<std::string> kColumns = {
      "method", "env", "setting", "strategy", "iteration",
      "seeds",  "mean", "sd",     "partial"};
  return kColumns;
}

std::string SummaryToCsv(const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  const auto& cols = SummaryColumns();
  for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const SummaryRow& r : rows) {
    os << Quote(r.method) << ',' << Quote(r.env) << ',' << Quote(r.setting)
       << ',' << Quote(r.strategy) << ',' << r.iteration << ',' << r.seeds
       << ',' << Num(r.mean) << ',' << Num(r.sd) << ','
       << (r.partial ? "true" : "false") << "\n";
  }
  return os.str();
}

std::string SummaryToJson(const std::vector<SummaryRow>& rows) {
  json arr = json::array();
  for (const SummaryRow& r : rows) {
    arr.push_back({{"method", r.method},
                   {"env", r.env},
                   {"setting", r.setting},
                   {"strategy", r.strategy},
                   {"iteration", r.iteration},
                   {"seeds", r.seeds},
                   {"mean", NumJson(r.mean)},
                   {"sd", NumJson(r.sd)},
                   {"partial", r.partial}});
  }
  return arr.dump(1) + "\n";
}

}  // namespace adr
