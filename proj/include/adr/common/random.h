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

#ifndef ADR_COMMON_RANDOM_H_
#define ADR_COMMON_RANDOM_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace adr {

using Rng = std::mt19937_64;

// splitmix64 finalizer
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent stream seed from a base seed and a path of stream
// identifiers, e.g. DeriveSeed(seed, {generation, candidate, episode}).
inline uint64_t DeriveSeed(uint64_t base, std::initializer_list<uint64_t> path) {
  uint64_t s = MixSeed(base);
  for (uint64_t p : path) s = MixSeed(s ^ MixSeed(p + 0x632be59bd9b4e019ULL));
  return s;
}

inline Rng MakeRng(uint64_t base, std::initializer_list<uint64_t> path = {}) {
  return Rng(DeriveSeed(base, path));
}

// stream tags, keep them stable: they are part of the reproducibility contract
enum class Stream : uint64_t {
  kReset = 1,
  kNoise = 2,
  kTraining = 3,
  kEvaluation = 4,
  kCollection = 5,
  kInference = 6,
  kUdr = 7,
  kBayrn = 8,
  kSimopt = 9,
  kSimopt1 = 10,
  kDroid = 11,
  kDropo = 12,
  kPrior = 13,
};

inline uint64_t Tag(Stream s) { return static_cast<uint64_t>(s); }

}  // namespace adr

#endif  // ADR_COMMON_RANDOM_H_
