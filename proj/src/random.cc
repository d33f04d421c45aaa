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

#include "tail_ledger/random.h"

#include <algorithm>

#include "tail_ledger/parallel.h"

namespace tail_ledger {

std::size_t Rng::FromCumulative(std::span<const double> cumulative) {
  const double u = Uniform();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) return cumulative.size() - 1;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::vector<double> CumulativeFromPmf(std::span<const double> pmf) {
  std::vector<double> cumulative(pmf.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    running.Add(pmf[i]);
    cumulative[i] = running.Total();
  }
  if (!cumulative.empty() && cumulative.back() > 0) {
    const double total = cumulative.back();
    for (double& c : cumulative) c /= total;
    cumulative.back() = 1.0;
  }
  return cumulative;
}

}  // namespace tail_ledger
