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

// Closed-form costs of limiting memorization or of label-private prediction,
// and per-subgroup reports of how those costs differ across a population
// made of subgroups with different frequency priors.

#ifndef TAIL_LEDGER_PRIVACY_DISPARITY_H_
#define TAIL_LEDGER_PRIVACY_DISPARITY_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tail_ledger/prior_model.h"
#include "tail_ledger/random.h"

namespace tail_ledger {

struct CostOptions {
  enum class Source { kPlugIn, kMarginalMonteCarlo };
  // kPlugIn takes expectations uniformly over the prior entries; the Monte
  // Carlo source uses the marginal over a domain of the prior's size.
  Source source = Source::kPlugIn;
  std::uint64_t replicates = 200;
  Seed seed = 7;
};

// (1 - 1/m) * sum_j a_j (1 - a_j)^n.
double OptError(const FrequencyPrior& prior, std::uint64_t n,
                std::size_t num_classes, const CostOptions& options = {});

// sum_j n a_j (1 - a_j)^(n-1).
double ExpectedSingletons(const FrequencyPrior& prior, std::uint64_t n,
                          const CostOptions& options = {});

double Tau1(const FrequencyPrior& prior, std::uint64_t n,
            const CostOptions& options = {});

// tau_1 * E[#singletons] * kappa * max(0, 1 - 1/m - gamma).
double MemorizationCost(const FrequencyPrior& prior, std::uint64_t n,
                        std::size_t num_classes, double gamma,
                        double kappa = 1.0, const CostOptions& options = {});

// tau_1 * E[#singletons] * kappa * max(0, 1 - e^eps/m - delta).
double PrivacyCost(const FrequencyPrior& prior, std::uint64_t n,
                   std::size_t num_classes, double epsilon, double delta,
                   double kappa = 1.0, const CostOptions& options = {});

struct SubgroupSpec {
  std::string name;
  FrequencyPrior prior;
  std::uint64_t n = 0;
  std::size_t num_classes = 2;
  double mixing_weight = 1.0;
};

struct CostParameters {
  enum class Kind { kMemorization, kPrivacy };
  Kind kind = Kind::kMemorization;
  double gamma = 0.5;
  double epsilon = 0.0;
  double delta = 0.0;
  double kappa = 1.0;

  static CostParameters Memorization(double gamma, double kappa = 1.0);
  static CostParameters Privacy(double epsilon, double delta,
                                double kappa = 1.0);
  // "gamma=0.5;kappa=1" or "eps=1.79...;delta=0;kappa=1".
  std::string Describe() const;
};

struct SubgroupResult {
  std::string name;
  double mixing_weight = 0.0;
  std::size_t domain_size = 0;
  std::uint64_t n = 0;
  std::size_t num_classes = 0;
  double tau1 = 0.0;
  double singletons = 0.0;
  double opt = 0.0;
  double cost = 0.0;
};

struct DisparityReport {
  CostParameters parameters;
  std::string method;  // "pi-plug-in" or "pihat-mc"
  std::vector<SubgroupResult> rows;

  // rows[i].cost / rows[j].cost; infinity when only the denominator is 0,
  // and 1 when both are.
  double CostRatio(std::size_t i, std::size_t j) const;
  // Mixing-weighted totals.
  double PopulationOpt() const;
  double PopulationCost() const;

  // CSV "subgroup,opt,cost,params"; params joins the subgroup's setting and
  // the cost parameters with ';'.
  void WriteCsv(std::ostream& out) const;
  // Fixed-width table with one row per subgroup and the cost ratio to the
  // first subgroup.
  void WriteTable(std::ostream& out) const;
};

// Throws InvalidArgument when the mixing weights do not sum to 1 within
// 1e-9, or when any subgroup has n = 0 or fewer than two classes.
DisparityReport BuildDisparityReport(const std::vector<SubgroupSpec>& subgroups,
                                     const CostParameters& parameters,
                                     const CostOptions& options = {});

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_PRIVACY_DISPARITY_H_
