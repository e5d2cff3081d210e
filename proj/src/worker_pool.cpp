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

#include "exforce/worker_pool.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace exforce {

WorkerPool::WorkerPool(unsigned workers) : workers_(workers) {
  if (workers == 0) throw std::invalid_argument("worker count must be positive");
}

void WorkerPool::for_each_task(std::size_t num_tasks,
                               const std::function<void(unsigned, std::size_t)>& fn) const {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> timed_out{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&](unsigned worker) {
    while (!stop.load(std::memory_order_relaxed)) {
      if (expired()) {
        timed_out = true;
        stop = true;
        break;
      }
      const std::size_t task = next.fetch_add(1, std::memory_order_relaxed);
      if (task >= num_tasks) break;
      try {
        fn(worker, task);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };

  const auto spawned = static_cast<unsigned>(
      std::min<std::size_t>(workers_, std::max<std::size_t>(num_tasks, 1)));
  {
    std::vector<std::jthread> threads;
    threads.reserve(spawned > 0 ? spawned - 1 : 0);
    for (unsigned w = 1; w < spawned; ++w) threads.emplace_back(body, w);
    body(0);
  }
  if (error) std::rethrow_exception(error);
  if (timed_out) throw TimeoutError();
}

unsigned default_worker_count() {
  if (const char* env = std::getenv("EXFORCE_WORKERS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace exforce
