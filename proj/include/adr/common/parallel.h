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

#ifndef ADR_COMMON_PARALLEL_H_
#define ADR_COMMON_PARALLEL_H_

#include <functional>

namespace adr {

// Number of worker threads used by ParallelFor when none is given. Defaults to
// the hardware concurrency.
int DefaultThreads();
void SetDefaultThreads(int threads);

// Runs fn(i) for i in [0, n). Work items must write to disjoint outputs; the
// result is then independent of scheduling. The first exception thrown by a
// work item is rethrown on the calling thread.
void ParallelFor(int n, const std::function<void(int)>& fn, int threads = 0);

}  // namespace adr

#endif  // ADR_COMMON_PARALLEL_H_
