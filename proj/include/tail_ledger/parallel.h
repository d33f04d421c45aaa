// Copyright 2026 The Tail Ledger Authors
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

#ifndef TAIL_LEDGER_PARALLEL_H_
#define TAIL_LEDGER_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace tail_ledger {

// Number of worker threads: TAIL_LEDGER_THREADS when set and positive,
// otherwise the hardware concurrency (0 means auto).
std::size_t WorkerCount();

// Runs body(i) for i in [0, count). Work is split into contiguous blocks; the
// caller is responsible for writing results to index-addressed slots so that
// output never depends on the thread count. The first exception thrown by any
// body is rethrown on the calling thread.
void ParallelFor(std::size_t count,
                 const std::function<void(std::size_t)>& body);

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double Total() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_PARALLEL_H_
