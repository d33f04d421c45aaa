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

// Learning instances over an unstructured domain [N] with labels in [m]:
// a random pmf D from a frequency prior, a true labeling f, a noisy observed
// labeling, and a dataset of n i.i.d. draws. Also the brute-force posterior
// oracle that enumerates every frequency assignment.

#ifndef TAIL_LEDGER_DISCRETE_MODEL_H_
#define TAIL_LEDGER_DISCRETE_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "tail_ledger/prior_model.h"
#include "tail_ledger/random.h"

namespace tail_ledger {

using Point = std::uint32_t;
using Label = std::uint32_t;

struct LabelPriorSpec {
  enum class Kind { kIidUniform, kExplicitTable };

  Kind kind = Kind::kIidUniform;
  std::size_t num_classes = 2;
  // Explicit tables: one row per domain point, each a pmf over labels.
  std::vector<std::vector<double>> table;
  // Probability that the observed label is not resampled. With probability
  // 1 - kappa it is replaced by a uniform draw over all labels (possibly the
  // true one).
  double noise_kappa = 1.0;

  static LabelPriorSpec IidUniform(std::size_t num_classes,
                                   double noise_kappa = 1.0);
  // Rows are normalized to sum to 1; throws on negative or all-zero rows.
  static LabelPriorSpec ExplicitTable(std::vector<std::vector<double>> table,
                                      double noise_kappa = 1.0);

  void Validate() const;
  // Prior pmf of f(x).
  std::vector<double> PointPrior(Point x) const;
};

struct Example {
  Point point = 0;
  Label label = 0;
};

// An ordered dataset with per-point label counts computed on construction.
class Dataset {
 public:
  Dataset(std::size_t domain_size, std::size_t num_classes,
          std::vector<Example> examples);

  std::size_t size() const { return examples_.size(); }
  std::size_t domain_size() const { return domain_size_; }
  std::size_t num_classes() const { return num_classes_; }
  const std::vector<Example>& examples() const { return examples_; }
  const Example& example(std::size_t i) const { return examples_[i]; }

  std::uint32_t multiplicity(Point x) const { return multiplicity_[x]; }
  // Number of copies of x carrying each label.
  std::span<const std::uint32_t> label_counts(Point x) const {
    return {label_counts_.data() + static_cast<std::size_t>(x) * num_classes_,
            num_classes_};
  }

  // Distinct points that occur exactly ell times (ell = 0 gives the unseen
  // points).
  std::vector<Point> PointsWithMultiplicity(std::uint32_t ell) const;
  // Sum over ell of ell * |X_{S#ell}|; equals size() by construction.
  std::size_t MultiplicityMass() const;

  Dataset Without(std::size_t i) const;
  Dataset WithLabel(std::size_t i, Label y) const;

 private:
  std::size_t domain_size_;
  std::size_t num_classes_;
  std::vector<Example> examples_;
  std::vector<std::uint32_t> multiplicity_;
  std::vector<std::uint32_t> label_counts_;
};

struct DiscreteInstance {
  std::size_t domain_size = 0;
  std::size_t num_classes = 0;
  Seed seed = 0;
  std::vector<double> pmf;
  std::vector<Label> true_labels;
  std::vector<Label> observed_labels;
  Dataset dataset{1, 1, {}};

  // JSON object with fields N, n, m, seed, D, f, f_tilde, S in that order.
  // S is a list of [point, label] pairs. Doubles use the shortest
  // representation that round-trips.
  void WriteJson(std::ostream& out) const;
};

// Samples D from the prior, f from the label prior, the noisy labeling, and
// n draws (x, f_tilde(x)) with x ~ D. Independent sub-streams of `seed` drive
// the four stages.
DiscreteInstance SampleInstance(const FrequencyPrior& prior,
                                const LabelPriorSpec& label_prior,
                                std::size_t n, Seed seed);

// Draws n points i.i.d. from pmf, labeled by `labels`.
Dataset SampleDataset(std::span<const double> pmf,
                      std::span<const Label> labels, std::size_t num_classes,
                      std::size_t n, Rng& rng);

// Posterior mean of D(x) given a sample of size n that contains x exactly ell
// times: E[a^(l+1) (1-a)^(n-l)] / E[a^l (1-a)^(n-l)], 0 <= ell <= n.
double PosteriorMeanFrequency(const FrequencySampleSet& samples,
                              std::uint64_t ell, std::uint64_t n);

inline constexpr std::uint64_t kBruteForceBudget = 100'000'000;

// Calls visit(pmf, probability) for every assignment of distinct prior values
// to the domain_size points, with pmf normalized. Throws ResourceLimit when
// the number of assignments exceeds `budget`.
void EnumerateFrequencyVectors(
    const FrequencyPrior& prior, std::size_t domain_size, std::uint64_t budget,
    const std::function<void(std::span<const double>, double)>& visit);

// Pr[U = sequence] where D is drawn from the prior over a domain of size
// domain_size and U ~ D^n, by full enumeration.
double SequenceProbability(const FrequencyPrior& prior,
                           std::size_t domain_size,
                           std::span<const Point> sequence);

// E[D(query) | U = sequence] by enumerating every frequency assignment and
// weighting it by the exact sequence likelihood. Requires
// K^domain_size * domain_size^n <= kBruteForceBudget.
double BruteForcePosterior(const FrequencyPrior& prior,
                           std::size_t domain_size,
                           std::span<const Point> sequence, Point query);

struct FactorizationSides {
  double joint = 0.0;     // Pr[U = V]
  double factored = 0.0;  // E[a^l (1-a)^(n-l)] * Pr[U' = V without x]
};

// Both sides of the factorization of a sequence probability through one of
// its points. The joint side is enumerated over the full domain, the factored
// side uses the exact marginal and an enumeration over the reduced domain.
FactorizationSides Factorization(const FrequencyPrior& prior,
                                 std::size_t domain_size,
                                 std::span<const Point> sequence, Point x);

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_DISCRETE_MODEL_H_
