// Copyright 2026 The EigenGreedy Authors.
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

#pragma once

#include <cstddef>
#include <functional>

namespace eigengreedy {

// Worker cap for internal fan-out. Defaults to EIGENGREEDY_THREADS
// (0 or unset = hardware concurrency).
std::size_t WorkerCount();
void SetWorkerCount(std::size_t workers);  // 0 restores the default

// Splits [0, count) into contiguous chunks, one per worker. `body` receives
// (begin, end, worker_index). Exceptions propagate after all workers join.
void ParallelFor(std::size_t count,
                 const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace eigengreedy
