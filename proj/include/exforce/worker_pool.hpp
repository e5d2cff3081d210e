// Copyright 2026 The exforce Authors
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

#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>

namespace exforce {

class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("computation exceeded its deadline") {}
};

// Fixed-size CPU worker budget. Each parallel region runs on at most size()
// threads (the caller's thread counts as worker 0) and tasks are claimed
// dynamically from a shared counter.
class WorkerPool {
 public:
  using Clock = std::chrono::steady_clock;

  explicit WorkerPool(unsigned workers);

  unsigned size() const { return workers_; }

  // Invokes fn(worker, task) for every task in [0, num_tasks). worker is in
  // [0, size()) and identifies the calling thread for private accumulators.
  // The first exception thrown by any task is rethrown after all threads
  // join. If a deadline is set and passes, remaining tasks are skipped and
  // TimeoutError is thrown.
  void for_each_task(std::size_t num_tasks,
                     const std::function<void(unsigned, std::size_t)>& fn) const;

  void set_deadline(Clock::time_point deadline) { deadline_ = deadline; }
  void clear_deadline() { deadline_.reset(); }
  bool expired() const { return deadline_ && Clock::now() >= *deadline_; }

 private:
  unsigned workers_;
  std::optional<Clock::time_point> deadline_;
};

// EXFORCE_WORKERS if set and positive, otherwise hardware concurrency.
unsigned default_worker_count();

}  // namespace exforce
