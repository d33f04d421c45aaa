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

// Frequency priors and the marginal distribution of a single normalized
// frequency that they induce.
//
// A prior is a list pi = (pi_1, ..., pi_N) of candidate frequencies. A random
// pmf over a domain of size N is drawn by giving every element an independent
// uniform pick from pi and normalizing. The distribution of one coordinate of
// that pmf is the marginal frequency distribution; FrequencySampleSet holds it
// either exactly (small N), as pooled Monte Carlo draws, or as the plug-in
// approximation that uses pi itself.

#ifndef TAIL_LEDGER_PRIOR_MODEL_H_
#define TAIL_LEDGER_PRIOR_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tail_ledger/random.h"

namespace tail_ledger {

inline constexpr double kPriorSumTolerance = 1e-9;
// Prior files whose entries sum within this distance of 1 are renormalized.
inline constexpr double kPriorFileRenormalizeTolerance = 1e-6;
inline constexpr std::uint64_t kExactMarginalBudget = 10'000'000;

class FrequencyPrior {
 public:
  // Throws InvalidArgument unless entries is non-empty, every entry lies in
  // (0, 1] and the entries sum to 1 within kPriorSumTolerance.
  static FrequencyPrior Create(std::vector<double> entries, std::string name);

  const std::vector<double>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const std::string& name() const { return name_; }
  double max_entry() const { return max_entry_; }
  // (1/N) * sum_j (pi_j - 1/N)^2.
  double variance() const { return variance_; }

 private:
  FrequencyPrior(std::vector<double> entries, std::string name);

  std::vector<double> entries_;
  std::string name_;
  double max_entry_ = 0.0;
  double variance_ = 0.0;
};

// Entry i is (1/i) / H_N.
FrequencyPrior ZipfPrior(std::size_t n);

// N copies of 1/N.
FrequencyPrior UniformPrior(std::size_t n);

// One frequency per line; blank lines and lines starting with '#' are
// skipped. Renormalizes when the sum is within 1e-6 of 1 and rejects
// otherwise. Diagnostics carry the 1-based line number.
FrequencyPrior ParsePrior(std::istream& in, std::string name);
FrequencyPrior LoadPriorFile(const std::string& path);

// Parses "zipf:N", "uniform:N" or "file:PATH" (a bare path is also accepted).
FrequencyPrior PriorFromSpec(const std::string& spec);

// Draws p_x uniformly from prior.entries() for each of domain_size elements
// and returns the normalized pmf.
std::vector<double> SampleFrequencyVector(const FrequencyPrior& prior,
                                          std::size_t domain_size, Rng& rng);
std::vector<double> SampleFrequencyVector(const FrequencyPrior& prior,
                                          std::size_t domain_size, Seed seed);

struct Provenance {
  enum class Kind { kExact, kMonteCarlo, kPlugIn };
  Kind kind = Kind::kExact;
  std::uint64_t replicates = 0;
  Seed seed = 0;
};

// Weighted support of a frequency distribution. Weights are stored only when
// they are not uniform.
class FrequencySampleSet {
 public:
  // Throws InvalidArgument unless values lie in (0, 1] and weights (when
  // given) are non-negative, match values in length and sum to 1 within
  // 1e-9. An empty weights vector means uniform weights.
  static FrequencySampleSet Create(std::vector<double> values,
                                   std::vector<double> weights,
                                   Provenance provenance);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double value(std::size_t i) const { return values_[i]; }
  double weight(std::size_t i) const {
    return weights_.empty() ? uniform_weight_ : weights_[i];
  }
  bool uniform_weights() const { return weights_.empty(); }
  const Provenance& provenance() const { return provenance_; }

  // "pihat-exact", "pihat-mc" or "pi-plug-in".
  std::string MethodName() const;

  // Weighted mean of the values.
  double Mean() const;

  // CSV with header "alpha,weight"; values printed with 17 significant
  // digits.
  void WriteCsv(std::ostream& out) const;

 private:
  FrequencySampleSet(std::vector<double> values, std::vector<double> weights,
                     Provenance provenance);

  std::vector<double> values_;
  std::vector<double> weights_;
  double uniform_weight_ = 0.0;
  Provenance provenance_;
};

// Pools all domain_size coordinates of `replicates` independent frequency
// vectors. Coordinates of one vector are exchangeable, so every pooled value
// is a draw from the single-coordinate marginal. Replicate r uses the stream
// DeriveSeed(seed, r); output is independent of the thread count.
FrequencySampleSet MarginalSamples(const FrequencyPrior& prior,
                                   std::size_t domain_size,
                                   std::uint64_t replicates, Seed seed);

// Exact single-coordinate marginal by enumerating all K^domain_size
// assignments of the K distinct prior values. Throws ResourceLimit when
// K^domain_size exceeds kExactMarginalBudget.
FrequencySampleSet ExactMarginal(const FrequencyPrior& prior,
                                 std::size_t domain_size);

// The prior's entries with uniform weights.
FrequencySampleSet PlugInSamples(const FrequencyPrior& prior);

// Distinct entries of the prior (exact equality) and the probability that a
// uniform pick from the prior lands on each.
struct DistinctValues {
  std::vector<double> values;
  std::vector<double> probabilities;
};
DistinctValues DistinctPriorValues(const FrequencyPrior& prior);

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_PRIOR_MODEL_H_
