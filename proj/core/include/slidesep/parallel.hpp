// Copyright 2026 The slidesep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLIDESEP_PARALLEL_HPP_
#define SLIDESEP_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace slidesep {

// Name of the environment variable holding the default worker count.
inline constexpr const char* kThreadsEnv = "SLIDESEP_THREADS";

// SLIDESEP_THREADS if set to a positive integer, else hardware concurrency
// (at least 1).
int default_thread_count();

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
// handed out in index order; callers write results into slot i so output
// order never depends on scheduling. If items throw, remaining items are
// skipped and one of the exceptions is rethrown after all workers stop.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace slidesep

#endif  // SLIDESEP_PARALLEL_HPP_
