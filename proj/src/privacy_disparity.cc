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

#include "tail_ledger/privacy_disparity.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "tail_ledger/parallel.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace tail_ledger {
namespace {

void CheckCommon(std::uint64_t n, std::size_t num_classes, double kappa) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (num_classes < 2) throw InvalidArgument("need at least two classes");
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw InvalidArgument("kappa must lie in [0, 1]");
  }
}

FrequencySampleSet Marginal(const FrequencyPrior& prior,
                            const CostOptions& options) {
  return MarginalSamples(prior, prior.size(), options.replicates,
                         options.seed);
}

// sum_j a_j^a (1 - a_j)^b over the prior entries, with powers in log space.
double PlugInMomentSum(const FrequencyPrior& prior, double a, double b) {
  CompensatedSum sum;
  for (double alpha : prior.entries()) {
    if (alpha >= 1.0) {
      if (b == 0.0) sum.Add(1.0);
      continue;
    }
    sum.Add(std::exp(a * std::log(alpha) + b * std::log1p(-alpha)));
  }
  return sum.Total();
}

double SingletonTerm(const FrequencyPrior& prior, std::uint64_t n,
                     const CostOptions& options) {
  return Tau1(prior, n, options) * ExpectedSingletons(prior, n, options);
}

}  // namespace

double OptError(const FrequencyPrior& prior, std::uint64_t n,
                std::size_t num_classes, const CostOptions& options) {
  CheckCommon(n, num_classes, 1.0);
  const double unseen_mass =
      options.source == CostOptions::Source::kPlugIn
          ? PlugInMomentSum(prior, 1.0, static_cast<double>(n))
          : static_cast<double>(prior.size()) *
                std::exp(LogMoment(Marginal(prior, options), 1.0,
                                   static_cast<double>(n)));
  return (1.0 - 1.0 / static_cast<double>(num_classes)) * unseen_mass;
}

double ExpectedSingletons(const FrequencyPrior& prior, std::uint64_t n,
                          const CostOptions& options) {
  if (n == 0) throw InvalidArgument("n must be positive");
  if (options.source == CostOptions::Source::kPlugIn) {
    return static_cast<double>(n) *
           PlugInMomentSum(prior, 1.0, static_cast<double>(n - 1));
  }
  return SingletonExpectation(Marginal(prior, options), n, prior.size());
}

double Tau1(const FrequencyPrior& prior, std::uint64_t n,
            const CostOptions& options) {
  if (options.source == CostOptions::Source::kPlugIn) {
    return TauPlugIn(prior, 1, n);
  }
  return Tau(Marginal(prior, options), 1, n);
}

double MemorizationCost(const FrequencyPrior& prior, std::uint64_t n,
                        std::size_t num_classes, double gamma, double kappa,
                        const CostOptions& options) {
  CheckCommon(n, num_classes, kappa);
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw InvalidArgument("gamma must lie in [0, 1]");
  }
  const double factor =
      std::max(0.0, 1.0 - 1.0 / static_cast<double>(num_classes) - gamma);
  if (factor == 0.0 || kappa == 0.0) return 0.0;
  return SingletonTerm(prior, n, options) * kappa * factor;
}

double PrivacyCost(const FrequencyPrior& prior, std::uint64_t n,
                   std::size_t num_classes, double epsilon, double delta,
                   double kappa, const CostOptions& options) {
  CheckCommon(n, num_classes, kappa);
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be >= 0");
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw InvalidArgument("delta must lie in [0, 1]");
  }
  const double factor = std::max(
      0.0, 1.0 - std::exp(epsilon) / static_cast<double>(num_classes) - delta);
  if (factor == 0.0 || kappa == 0.0) return 0.0;
  return SingletonTerm(prior, n, options) * kappa * factor;
}

CostParameters CostParameters::Memorization(double gamma, double kappa) {
  CostParameters p;
  p.kind = Kind::kMemorization;
  p.gamma = gamma;
  p.kappa = kappa;
  return p;
}

CostParameters CostParameters::Privacy(double epsilon, double delta,
                                       double kappa) {
  CostParameters p;
  p.kind = Kind::kPrivacy;
  p.epsilon = epsilon;
  p.delta = delta;
  p.kappa = kappa;
  return p;
}

std::string CostParameters::Describe() const {
  std::ostringstream out;
  out.precision(17);
  if (kind == Kind::kMemorization) {
    out << "gamma=" << gamma;
  } else {
    out << "eps=" << epsilon << ";delta=" << delta;
  }
  out << ";kappa=" << kappa;
  return out.str();
}

double DisparityReport::CostRatio(std::size_t i, std::size_t j) const {
  const double a = rows.at(i).cost;
  const double b = rows.at(j).cost;
  if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return a / b;
}

double DisparityReport::PopulationOpt() const {
  CompensatedSum sum;
  for (const SubgroupResult& r : rows) sum.Add(r.mixing_weight * r.opt);
  return sum.Total();
}

double DisparityReport::PopulationCost() const {
  CompensatedSum sum;
  for (const SubgroupResult& r : rows) sum.Add(r.mixing_weight * r.cost);
  return sum.Total();
}

void DisparityReport::WriteCsv(std::ostream& out) const {
  std::ostringstream buffer;
  buffer.precision(17);
  buffer << "subgroup,opt,cost,params\n";
  for (const SubgroupResult& r : rows) {
    buffer << r.name << ',' << r.opt << ',' << r.cost << ",weight="
           << r.mixing_weight << ";N=" << r.domain_size << ";n=" << r.n
           << ";m=" << r.num_classes << ';' << parameters.Describe()
           << ";method=" << method << '\n';
  }
  out << buffer.str();
}

void DisparityReport::WriteTable(std::ostream& out) const {
  std::ostringstream buffer;
  buffer << "cost parameters: " << parameters.Describe() << " (" << method
         << ")\n";
  buffer << std::left << std::setw(16) << "subgroup" << std::right
         << std::setw(8) << "weight" << std::setw(8) << "N" << std::setw(8)
         << "n" << std::setw(5) << "m" << std::setw(10) << "opt"
         << std::setw(10) << "cost" << std::setw(8) << "ratio" << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SubgroupResult& r = rows[i];
    buffer << std::left << std::setw(16) << r.name << std::right << std::fixed
           << std::setprecision(4) << std::setw(8) << r.mixing_weight
           << std::setw(8) << r.domain_size << std::setw(8) << r.n
           << std::setw(5) << r.num_classes << std::setw(10) << r.opt
           << std::setw(10) << r.cost << std::setprecision(2) << std::setw(8)
           << CostRatio(i, 0) << '\n';
  }
  buffer << std::fixed << std::setprecision(4) << "population opt "
         << PopulationOpt() << ", population cost " << PopulationCost()
         << '\n';
  out << buffer.str();
}

DisparityReport BuildDisparityReport(const std::vector<SubgroupSpec>& subgroups,
                                     const CostParameters& parameters,
                                     const CostOptions& options) {
  if (subgroups.empty()) throw InvalidArgument("need at least one subgroup");
  CompensatedSum weights;
  for (const SubgroupSpec& g : subgroups) {
    if (!(g.mixing_weight >= 0.0 && g.mixing_weight <= 1.0)) {
      throw InvalidArgument("mixing weights must lie in [0, 1]");
    }
    weights.Add(g.mixing_weight);
  }
  if (std::abs(weights.Total() - 1.0) > 1e-9) {
    throw InvalidArgument("mixing weights must sum to 1");
  }
  DisparityReport report;
  report.parameters = parameters;
  report.method = options.source == CostOptions::Source::kPlugIn ? "pi-plug-in"
                                                                 : "pihat-mc";
  report.rows.resize(subgroups.size());
  ParallelFor(subgroups.size(), [&](std::size_t i) {
    const SubgroupSpec& g = subgroups[i];
    SubgroupResult& r = report.rows[i];
    r.name = g.name;
    r.mixing_weight = g.mixing_weight;
    r.domain_size = g.prior.size();
    r.n = g.n;
    r.num_classes = g.num_classes;
    r.opt = OptError(g.prior, g.n, g.num_classes, options);
    r.tau1 = Tau1(g.prior, g.n, options);
    r.singletons = ExpectedSingletons(g.prior, g.n, options);
    r.cost = parameters.kind == CostParameters::Kind::kMemorization
                 ? MemorizationCost(g.prior, g.n, g.num_classes,
                                    parameters.gamma, parameters.kappa, options)
                 : PrivacyCost(g.prior, g.n, g.num_classes, parameters.epsilon,
                               parameters.delta, parameters.kappa, options);
  });
  return report;
}

}  // namespace tail_ledger
