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

#include "tail_ledger/discrete_model.h"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "json.hpp"
#include "tail_ledger/parallel.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace tail_ledger {
namespace {

std::vector<double> NormalizeRow(std::vector<double> row, std::size_t index) {
  double total = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("label prior row " + std::to_string(index) +
                            " has a negative or non-finite entry");
    }
    total += v;
  }
  if (total <= 0.0) {
    throw InvalidArgument("label prior row " + std::to_string(index) +
                          " sums to zero");
  }
  for (double& v : row) v /= total;
  return row;
}

// Returns base^exponent, throwing ResourceLimit once it exceeds budget.
std::uint64_t CheckedPower(std::uint64_t base, std::size_t exponent,
                           std::uint64_t budget, const std::string& what) {
  std::uint64_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) {
    if (base != 0 && result > budget / base) {
      throw ResourceLimit(what + " exceeds the enumeration bound of " +
                          std::to_string(budget));
    }
    result *= base;
  }
  return result;
}

}  // namespace

LabelPriorSpec LabelPriorSpec::IidUniform(std::size_t num_classes,
                                          double noise_kappa) {
  LabelPriorSpec spec;
  spec.kind = Kind::kIidUniform;
  spec.num_classes = num_classes;
  spec.noise_kappa = noise_kappa;
  spec.Validate();
  return spec;
}

LabelPriorSpec LabelPriorSpec::ExplicitTable(
    std::vector<std::vector<double>> table, double noise_kappa) {
  if (table.empty()) throw InvalidArgument("label prior table is empty");
  LabelPriorSpec spec;
  spec.kind = Kind::kExplicitTable;
  spec.num_classes = table.front().size();
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = NormalizeRow(std::move(table[i]), i);
  }
  spec.table = std::move(table);
  spec.noise_kappa = noise_kappa;
  spec.Validate();
  return spec;
}

void LabelPriorSpec::Validate() const {
  if (num_classes < 2) {
    throw InvalidArgument("number of classes must be at least 2");
  }
  if (!(noise_kappa >= 0.0 && noise_kappa <= 1.0)) {
    throw InvalidArgument("noise kappa must lie in [0, 1]");
  }
  if (kind == Kind::kExplicitTable) {
    for (const auto& row : table) {
      if (row.size() != num_classes) {
        throw InvalidArgument("label prior rows must all have m entries");
      }
    }
  }
}

std::vector<double> LabelPriorSpec::PointPrior(Point x) const {
  if (kind == Kind::kIidUniform) {
    return std::vector<double>(num_classes, 1.0 / num_classes);
  }
  if (x >= table.size()) {
    throw InvalidArgument("point " + std::to_string(x) +
                          " has no row in the label prior table");
  }
  return table[x];
}

Dataset::Dataset(std::size_t domain_size, std::size_t num_classes,
                 std::vector<Example> examples)
    : domain_size_(domain_size),
      num_classes_(num_classes),
      examples_(std::move(examples)),
      multiplicity_(domain_size, 0),
      label_counts_(domain_size * num_classes, 0) {
  if (domain_size == 0) throw InvalidArgument("domain size must be at least 1");
  if (num_classes == 0) throw InvalidArgument("number of classes is zero");
  for (const Example& e : examples_) {
    if (e.point >= domain_size || e.label >= num_classes) {
      throw InvalidArgument("example (" + std::to_string(e.point) + ", " +
                            std::to_string(e.label) + ") is out of range");
    }
    ++multiplicity_[e.point];
    ++label_counts_[static_cast<std::size_t>(e.point) * num_classes + e.label];
  }
}

std::vector<Point> Dataset::PointsWithMultiplicity(std::uint32_t ell) const {
  std::vector<Point> points;
  for (std::size_t x = 0; x < domain_size_; ++x) {
    if (multiplicity_[x] == ell) points.push_back(static_cast<Point>(x));
  }
  return points;
}

std::size_t Dataset::MultiplicityMass() const {
  std::size_t total = 0;
  for (std::uint32_t c : multiplicity_) total += c;
  return total;
}

Dataset Dataset::Without(std::size_t i) const {
  if (i >= examples_.size()) throw InvalidArgument("index out of range");
  std::vector<Example> rest = examples_;
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
  return Dataset(domain_size_, num_classes_, std::move(rest));
}

Dataset Dataset::WithLabel(std::size_t i, Label y) const {
  if (i >= examples_.size()) throw InvalidArgument("index out of range");
  std::vector<Example> changed = examples_;
  changed[i].label = y;
  return Dataset(domain_size_, num_classes_, std::move(changed));
}

void DiscreteInstance::WriteJson(std::ostream& out) const {
  nlohmann::ordered_json j;
  j["N"] = domain_size;
  j["n"] = dataset.size();
  j["m"] = num_classes;
  j["seed"] = seed;
  j["D"] = pmf;
  j["f"] = true_labels;
  j["f_tilde"] = observed_labels;
  nlohmann::ordered_json s = nlohmann::ordered_json::array();
  for (const Example& e : dataset.examples()) {
    s.push_back({e.point, e.label});
  }
  j["S"] = std::move(s);
  out << j.dump() << '\n';
}

Dataset SampleDataset(std::span<const double> pmf,
                      std::span<const Label> labels, std::size_t num_classes,
                      std::size_t n, Rng& rng) {
  if (labels.size() != pmf.size()) {
    throw InvalidArgument("labeling and pmf sizes differ");
  }
  const std::vector<double> cumulative = CumulativeFromPmf(pmf);
  std::vector<Example> examples(n);
  for (Example& e : examples) {
    e.point = static_cast<Point>(rng.FromCumulative(cumulative));
    e.label = labels[e.point];
  }
  return Dataset(pmf.size(), num_classes, std::move(examples));
}

DiscreteInstance SampleInstance(const FrequencyPrior& prior,
                                const LabelPriorSpec& label_prior,
                                std::size_t n, Seed seed) {
  label_prior.Validate();
  const std::size_t domain_size = prior.size();
  if (label_prior.kind == LabelPriorSpec::Kind::kExplicitTable &&
      label_prior.table.size() != domain_size) {
    throw InvalidArgument("label prior table must have one row per point");
  }
  const std::size_t m = label_prior.num_classes;

  DiscreteInstance instance;
  instance.domain_size = domain_size;
  instance.num_classes = m;
  instance.seed = seed;
  instance.pmf = SampleFrequencyVector(prior, domain_size, DeriveSeed(seed, 0));

  Rng label_rng(DeriveSeed(seed, 1));
  instance.true_labels.resize(domain_size);
  for (std::size_t x = 0; x < domain_size; ++x) {
    if (label_prior.kind == LabelPriorSpec::Kind::kIidUniform) {
      instance.true_labels[x] = static_cast<Label>(label_rng.Below(m));
    } else {
      const std::vector<double> cumulative =
          CumulativeFromPmf(label_prior.table[x]);
      instance.true_labels[x] =
          static_cast<Label>(label_rng.FromCumulative(cumulative));
    }
  }

  Rng noise_rng(DeriveSeed(seed, 2));
  instance.observed_labels = instance.true_labels;
  for (Label& y : instance.observed_labels) {
    if (!noise_rng.Bernoulli(label_prior.noise_kappa)) {
      y = static_cast<Label>(noise_rng.Below(m));
    }
  }

  Rng data_rng(DeriveSeed(seed, 3));
  instance.dataset =
      SampleDataset(instance.pmf, instance.observed_labels, m, n, data_rng);
  return instance;
}

double PosteriorMeanFrequency(const FrequencySampleSet& samples,
                              std::uint64_t ell, std::uint64_t n) {
  if (ell > n) throw InvalidArgument("ell must not exceed n");
  const double a = static_cast<double>(ell);
  const double b = static_cast<double>(n - ell);
  const double log_den = LogMoment(samples, a, b);
  if (!std::isfinite(log_den)) {
    throw NumericDegeneracy("posterior denominator is zero");
  }
  const double log_num = LogMoment(samples, a + 1.0, b);
  if (!std::isfinite(log_num)) return 0.0;
  return std::exp(log_num - log_den);
}

void EnumerateFrequencyVectors(
    const FrequencyPrior& prior, std::size_t domain_size, std::uint64_t budget,
    const std::function<void(std::span<const double>, double)>& visit) {
  const std::vector<double>& entries = prior.entries();
  const std::size_t k = entries.size();
  const std::uint64_t total =
      CheckedPower(k, domain_size, budget, "K^N = " + std::to_string(k) + "^" +
                                               std::to_string(domain_size));
  const double probability = std::pow(1.0 / k, static_cast<double>(domain_size));
  std::vector<std::size_t> digit(domain_size, 0);
  std::vector<double> pmf(domain_size);
  for (std::uint64_t step = 0; step < total; ++step) {
    double normalizer = 0.0;
    for (std::size_t x = 0; x < domain_size; ++x) {
      normalizer += entries[digit[x]];
    }
    for (std::size_t x = 0; x < domain_size; ++x) {
      pmf[x] = entries[digit[x]] / normalizer;
    }
    visit(pmf, probability);
    for (std::size_t pos = 0; pos < domain_size; ++pos) {
      if (++digit[pos] < k) break;
      digit[pos] = 0;
    }
  }
}

double SequenceProbability(const FrequencyPrior& prior,
                           std::size_t domain_size,
                           std::span<const Point> sequence) {
  for (Point x : sequence) {
    if (x >= domain_size) throw InvalidArgument("sequence point out of range");
  }
  if (domain_size == 0) return sequence.empty() ? 1.0 : 0.0;
  CompensatedSum total;
  EnumerateFrequencyVectors(
      prior, domain_size, kBruteForceBudget,
      [&](std::span<const double> pmf, double probability) {
        double likelihood = probability;
        for (Point x : sequence) likelihood *= pmf[x];
        total.Add(likelihood);
      });
  return total.Total();
}

double BruteForcePosterior(const FrequencyPrior& prior,
                           std::size_t domain_size,
                           std::span<const Point> sequence, Point query) {
  if (domain_size == 0 || query >= domain_size) {
    throw InvalidArgument("query point out of range");
  }
  const std::uint64_t assignments = CheckedPower(
      prior.size(), domain_size, kBruteForceBudget, "brute-force posterior");
  const std::uint64_t sequences = CheckedPower(
      domain_size, sequence.size(), kBruteForceBudget, "brute-force posterior");
  if (assignments > kBruteForceBudget / sequences) {
    throw ResourceLimit("brute-force posterior needs K^N * N^n <= " +
                        std::to_string(kBruteForceBudget));
  }
  for (Point x : sequence) {
    if (x >= domain_size) throw InvalidArgument("sequence point out of range");
  }
  CompensatedSum numerator;
  CompensatedSum denominator;
  EnumerateFrequencyVectors(
      prior, domain_size, kBruteForceBudget,
      [&](std::span<const double> pmf, double probability) {
        double likelihood = probability;
        for (Point x : sequence) likelihood *= pmf[x];
        numerator.Add(likelihood * pmf[query]);
        denominator.Add(likelihood);
      });
  if (denominator.Total() <= 0.0) {
    throw NumericDegeneracy("sequence has zero probability");
  }
  return numerator.Total() / denominator.Total();
}

FactorizationSides Factorization(const FrequencyPrior& prior,
                                 std::size_t domain_size,
                                 std::span<const Point> sequence, Point x) {
  if (x >= domain_size) throw InvalidArgument("point out of range");
  std::vector<Point> rest;
  std::uint64_t ell = 0;
  for (Point z : sequence) {
    if (z == x) {
      ++ell;
    } else {
      rest.push_back(z > x ? z - 1 : z);
    }
  }
  const std::uint64_t n = sequence.size();
  FactorizationSides sides;
  sides.joint = SequenceProbability(prior, domain_size, sequence);
  const FrequencySampleSet marginal = ExactMarginal(prior, domain_size);
  const double moment = std::exp(LogMoment(marginal, static_cast<double>(ell),
                                           static_cast<double>(n - ell)));
  sides.factored = moment * SequenceProbability(prior, domain_size - 1, rest);
  return sides;
}

}  // namespace tail_ledger
