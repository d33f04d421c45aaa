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

// Hand-rolled generators and enumeration oracles shared by the unit tests.
// The oracles deliberately avoid the library's own enumeration code.

#ifndef TAIL_LEDGER_TESTS_TEST_SUPPORT_H_
#define TAIL_LEDGER_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tail_ledger/prior_model.h"
#include "tail_ledger/random.h"

namespace tail_ledger::testing {

// Positive weights with a spread of several orders of magnitude, normalized.
inline FrequencyPrior RandomPrior(Rng& rng, std::size_t size) {
  std::vector<double> w(size);
  double total = 0.0;
  for (double& v : w) {
    v = std::exp(4.0 * rng.Uniform() - 2.0);
    if (rng.Bernoulli(0.2)) v *= 10.0;
    total += v;
  }
  for (double& v : w) v /= total;
  return FrequencyPrior::Create(std::move(w), "random");
}

// Long-tailed priors of a few shapes: power laws with random exponent,
// log-normal weights, and two-level mixtures.
inline FrequencyPrior RandomTailPrior(Rng& rng, std::size_t min_size,
                                      std::size_t max_size) {
  const std::size_t size = min_size + rng.Below(max_size - min_size + 1);
  std::vector<double> w(size);
  const auto family = rng.Below(3);
  if (family == 0) {
    const double s = 0.5 + 1.5 * rng.Uniform();
    for (std::size_t i = 0; i < size; ++i) w[i] = std::pow(i + 1.0, -s);
  } else if (family == 1) {
    const double sigma = 0.5 + 2.5 * rng.Uniform();
    for (double& v : w) v = std::exp(sigma * rng.Normal());
  } else {
    const double ratio = 1.0 + 99.0 * rng.Uniform();
    const double heavy_share = 0.05 + 0.5 * rng.Uniform();
    for (double& v : w) v = rng.Bernoulli(heavy_share) ? ratio : 1.0;
  }
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return FrequencyPrior::Create(std::move(w), "random-tail");
}

// A prior with `heavy` entries sharing 1 - light_mass and the remaining
// size - heavy entries sharing light_mass. With light entries far below
// 1/(2n) and heavy ones far above ln(1/(theta*beta))/n the marginal has an
// empty middle band.
inline FrequencyPrior GapPrior(std::size_t size, std::size_t heavy,
                               double light_mass) {
  std::vector<double> w(size);
  for (std::size_t i = 0; i < size; ++i) {
    w[i] = i < heavy ? (1.0 - light_mass) / heavy
                     : light_mass / static_cast<double>(size - heavy);
  }
  return FrequencyPrior::Create(std::move(w), "gap");
}

// E[g(D(0))] under the generative process, by direct enumeration of every
// tuple of prior indices.
template <typename G>
long double EnumeratedExpectation(const FrequencyPrior& prior,
                                  std::size_t domain_size, G g) {
  const auto& e = prior.entries();
  const std::size_t k = e.size();
  std::vector<std::size_t> idx(domain_size, 0);
  long double total = 0.0L;
  long double count = 0.0L;
  for (;;) {
    long double s = 0.0L;
    for (std::size_t i : idx) s += e[i];
    total += static_cast<long double>(g(static_cast<double>(e[idx[0]] / s)));
    count += 1.0L;
    std::size_t pos = 0;
    while (pos < domain_size && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == domain_size) break;
  }
  return total / count;
}

// Weighted expectation over a sample set.
template <typename G>
double SampleExpectation(const FrequencySampleSet& s, G g) {
  long double total = 0.0L;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total += static_cast<long double>(s.weight(i)) * g(s.value(i));
  }
  return static_cast<double>(total);
}

struct MeanAndError {
  double mean = 0.0;
  double standard_error = 0.0;
};

inline MeanAndError Summarize(const std::vector<double>& xs) {
  MeanAndError out;
  if (xs.empty()) return out;
  long double s = 0.0L;
  for (double x : xs) s += x;
  const long double mean = s / xs.size();
  long double ss = 0.0L;
  for (double x : xs) ss += (x - mean) * (x - mean);
  out.mean = static_cast<double>(mean);
  if (xs.size() > 1) {
    out.standard_error =
        static_cast<double>(std::sqrt(ss / (xs.size() - 1) / xs.size()));
  }
  return out;
}

}  // namespace tail_ledger::testing

#endif  // TAIL_LEDGER_TESTS_TEST_SUPPORT_H_
