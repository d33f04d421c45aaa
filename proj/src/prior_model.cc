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

#include "tail_ledger/prior_model.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "tail_ledger/parallel.h"
#include "tail_ledger/status.h"

namespace tail_ledger {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double Sum(std::span<const double> xs) {
  CompensatedSum sum;
  for (double x : xs) sum.Add(x);
  return sum.Total();
}

}  // namespace

FrequencyPrior::FrequencyPrior(std::vector<double> entries, std::string name)
    : entries_(std::move(entries)), name_(std::move(name)) {
  max_entry_ = *std::max_element(entries_.begin(), entries_.end());
  const double center = 1.0 / static_cast<double>(entries_.size());
  CompensatedSum squares;
  for (double e : entries_) squares.Add((e - center) * (e - center));
  variance_ = squares.Total() / static_cast<double>(entries_.size());
}

FrequencyPrior FrequencyPrior::Create(std::vector<double> entries,
                                      std::string name) {
  if (entries.empty()) {
    throw InvalidArgument("frequency prior must have at least one entry");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i] > 0.0) || entries[i] > 1.0) {
      std::ostringstream msg;
      msg << "frequency prior entry " << i << " = " << entries[i]
          << " is outside (0, 1]";
      throw InvalidArgument(msg.str());
    }
  }
  const double total = Sum(entries);
  if (std::abs(total - 1.0) > kPriorSumTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(17) << "frequency prior entries sum to " << total
        << "; expected 1 within " << kPriorSumTolerance;
    throw InvalidArgument(msg.str());
  }
  return FrequencyPrior(std::move(entries), std::move(name));
}

FrequencyPrior ZipfPrior(std::size_t n) {
  if (n == 0) throw InvalidArgument("zipf prior requires N >= 1");
  std::vector<double> entries(n);
  CompensatedSum harmonic;
  for (std::size_t i = 0; i < n; ++i) {
    entries[i] = 1.0 / static_cast<double>(i + 1);
    harmonic.Add(entries[i]);
  }
  const double h = harmonic.Total();
  for (double& e : entries) e /= h;
  return FrequencyPrior::Create(std::move(entries),
                                "zipf:" + std::to_string(n));
}

FrequencyPrior UniformPrior(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform prior requires N >= 1");
  return FrequencyPrior::Create(
      std::vector<double>(n, 1.0 / static_cast<double>(n)),
      "uniform:" + std::to_string(n));
}

FrequencyPrior ParsePrior(std::istream& in, std::string name) {
  std::vector<double> entries;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string text = Trim(line);
    if (text.empty() || text[0] == '#') continue;
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw InvalidArgument(name + ": line " + std::to_string(line_number) +
                            ": not a decimal frequency: '" + text + "'");
    }
    if (!(value > 0.0) || value > 1.0) {
      throw InvalidArgument(name + ": line " + std::to_string(line_number) +
                            ": frequency " + text + " is outside (0, 1]");
    }
    entries.push_back(value);
  }
  if (entries.empty()) {
    throw InvalidArgument(name + ": no frequencies found");
  }
  const double total = Sum(entries);
  if (std::abs(total - 1.0) > kPriorFileRenormalizeTolerance) {
    std::ostringstream msg;
    msg << std::setprecision(17) << name << ": frequencies sum to " << total
        << "; expected 1 within " << kPriorFileRenormalizeTolerance;
    throw InvalidArgument(msg.str());
  }
  for (double& e : entries) e /= total;
  return FrequencyPrior::Create(std::move(entries), std::move(name));
}

FrequencyPrior LoadPriorFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open prior file: " + path);
  return ParsePrior(in, path);
}

FrequencyPrior PriorFromSpec(const std::string& spec) {
  auto parse_size = [&](const std::string& digits) -> std::size_t {
    std::size_t value = 0;
    auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size() ||
        value == 0) {
      throw InvalidArgument("prior: expected a positive integer size in '" +
                            spec + "'");
    }
    return value;
  };
  if (spec.rfind("zipf:", 0) == 0) return ZipfPrior(parse_size(spec.substr(5)));
  if (spec.rfind("uniform:", 0) == 0) {
    return UniformPrior(parse_size(spec.substr(8)));
  }
  if (spec.rfind("file:", 0) == 0) return LoadPriorFile(spec.substr(5));
  return LoadPriorFile(spec);
}

std::vector<double> SampleFrequencyVector(const FrequencyPrior& prior,
                                          std::size_t domain_size, Rng& rng) {
  if (domain_size == 0) {
    throw InvalidArgument("domain size must be at least 1");
  }
  const auto& entries = prior.entries();
  std::vector<double> pmf(domain_size);
  CompensatedSum total;
  for (double& p : pmf) {
    p = entries[rng.Below(entries.size())];
    total.Add(p);
  }
  const double normalizer = total.Total();
  for (double& p : pmf) p /= normalizer;
  return pmf;
}

std::vector<double> SampleFrequencyVector(const FrequencyPrior& prior,
                                          std::size_t domain_size, Seed seed) {
  Rng rng(seed);
  return SampleFrequencyVector(prior, domain_size, rng);
}

FrequencySampleSet::FrequencySampleSet(std::vector<double> values,
                                       std::vector<double> weights,
                                       Provenance provenance)
    : values_(std::move(values)),
      weights_(std::move(weights)),
      uniform_weight_(1.0 / static_cast<double>(values_.size())),
      provenance_(provenance) {}

FrequencySampleSet FrequencySampleSet::Create(std::vector<double> values,
                                              std::vector<double> weights,
                                              Provenance provenance) {
  if (values.empty()) throw InvalidArgument("sample set is empty");
  for (double v : values) {
    if (!(v > 0.0) || v > 1.0) {
      throw InvalidArgument("sample set value " + std::to_string(v) +
                            " is outside (0, 1]");
    }
  }
  if (!weights.empty()) {
    if (weights.size() != values.size()) {
      throw InvalidArgument("sample set weights and values differ in length");
    }
    for (double w : weights) {
      if (!(w >= 0.0)) throw InvalidArgument("sample set weight is negative");
    }
    if (std::abs(Sum(weights) - 1.0) > 1e-9) {
      throw InvalidArgument("sample set weights do not sum to 1");
    }
  }
  return FrequencySampleSet(std::move(values), std::move(weights), provenance);
}

std::string FrequencySampleSet::MethodName() const {
  switch (provenance_.kind) {
    case Provenance::Kind::kExact:
      return "pihat-exact";
    case Provenance::Kind::kMonteCarlo:
      return "pihat-mc";
    case Provenance::Kind::kPlugIn:
      return "pi-plug-in";
  }
  return "unknown";
}

double FrequencySampleSet::Mean() const {
  CompensatedSum sum;
  for (std::size_t i = 0; i < size(); ++i) sum.Add(weight(i) * values_[i]);
  return sum.Total();
}

void FrequencySampleSet::WriteCsv(std::ostream& out) const {
  out << "alpha,weight\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < size(); ++i) {
    out << values_[i] << ',' << weight(i) << '\n';
  }
}

FrequencySampleSet MarginalSamples(const FrequencyPrior& prior,
                                   std::size_t domain_size,
                                   std::uint64_t replicates, Seed seed) {
  if (replicates == 0) throw InvalidArgument("replicates must be at least 1");
  if (domain_size == 0) throw InvalidArgument("domain size must be at least 1");
  std::vector<double> values(replicates * domain_size);
  ParallelFor(replicates, [&](std::size_t r) {
    Rng rng(DeriveSeed(seed, r));
    const auto pmf = SampleFrequencyVector(prior, domain_size, rng);
    std::copy(pmf.begin(), pmf.end(), values.begin() + r * domain_size);
  });
  return FrequencySampleSet::Create(
      std::move(values), {},
      Provenance{Provenance::Kind::kMonteCarlo, replicates, seed});
}

DistinctValues DistinctPriorValues(const FrequencyPrior& prior) {
  std::map<double, std::size_t> counts;
  for (double e : prior.entries()) ++counts[e];
  DistinctValues out;
  const double total = static_cast<double>(prior.size());
  for (const auto& [value, count] : counts) {
    out.values.push_back(value);
    out.probabilities.push_back(static_cast<double>(count) / total);
  }
  return out;
}

FrequencySampleSet ExactMarginal(const FrequencyPrior& prior,
                                 std::size_t domain_size) {
  if (domain_size == 0) throw InvalidArgument("domain size must be at least 1");
  const DistinctValues distinct = DistinctPriorValues(prior);
  const std::size_t k = distinct.values.size();
  std::uint64_t assignments = 1;
  for (std::size_t i = 0; i < domain_size; ++i) {
    if (assignments > kExactMarginalBudget / k) {
      throw ResourceLimit("exact marginal needs K^N = " + std::to_string(k) +
                          "^" + std::to_string(domain_size) +
                          " assignments; the bound is K^N <= " +
                          std::to_string(kExactMarginalBudget));
    }
    assignments *= k;
  }

  // Odometer over assignments of distinct values to coordinates. The
  // normalizer is formed from per-value counts in a fixed order, so equal
  // multisets produce bit-identical alphas and merge in the map.
  std::map<double, CompensatedSum> support;
  std::vector<std::size_t> digit(domain_size, 0);
  std::vector<std::size_t> counts(k, 0);
  counts[0] = domain_size;
  for (std::uint64_t step = 0; step < assignments; ++step) {
    double normalizer = 0.0;
    double probability = 1.0;
    for (std::size_t v = 0; v < k; ++v) {
      normalizer += static_cast<double>(counts[v]) * distinct.values[v];
      if (counts[v] > 0) {
        probability *= std::pow(distinct.probabilities[v],
                                static_cast<double>(counts[v]));
      }
    }
    support[distinct.values[digit[0]] / normalizer].Add(probability);

    for (std::size_t pos = 0; pos < domain_size; ++pos) {
      --counts[digit[pos]];
      if (++digit[pos] < k) {
        ++counts[digit[pos]];
        break;
      }
      digit[pos] = 0;
      ++counts[0];
    }
  }

  std::vector<double> values;
  std::vector<double> weights;
  CompensatedSum total;
  for (const auto& [alpha, weight] : support) {
    values.push_back(alpha);
    weights.push_back(weight.Total());
    total.Add(weights.back());
  }
  const double normalizer = total.Total();
  for (double& w : weights) w /= normalizer;
  return FrequencySampleSet::Create(std::move(values), std::move(weights),
                                    Provenance{Provenance::Kind::kExact, 0, 0});
}

FrequencySampleSet PlugInSamples(const FrequencyPrior& prior) {
  return FrequencySampleSet::Create(prior.entries(), {},
                                    Provenance{Provenance::Kind::kPlugIn, 0, 0});
}

}  // namespace tail_ledger
