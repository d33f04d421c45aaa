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

// Tail statistics of a marginal frequency distribution: the per-multiplicity
// excess-error rates tau_l, interval weights, expected singleton counts, and
// the closed-form bounds that relate them.
//
// Every function accepts any FrequencySampleSet, whether exact, Monte Carlo
// or plug-in; reports record which one was used.

#ifndef TAIL_LEDGER_TAIL_ANALYSIS_H_
#define TAIL_LEDGER_TAIL_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tail_ledger/prior_model.h"

namespace tail_ledger {

// log E[alpha^a * (1 - alpha)^b], accumulated in log space with compensated
// summation. Returns -infinity when every term underflows to zero.
double LogMoment(const FrequencySampleSet& samples, double a, double b);

// E[alpha^(l+1) (1-alpha)^(n-l)] / E[alpha^l (1-alpha)^(n-l)] for 1 <= l <= n.
// Throws NumericDegeneracy when the denominator is zero.
double Tau(const FrequencySampleSet& samples, std::uint64_t ell,
           std::uint64_t n);

// Tau with the expectation taken uniformly over prior.entries().
double TauPlugIn(const FrequencyPrior& prior, std::uint64_t ell,
                 std::uint64_t n);

enum class IntervalBounds { kClosed, kOpen };

// N * E[alpha * 1{alpha in [lo, hi]}]: the expected mass of the pmf carried by
// elements whose frequency falls in the interval. Requires 0 <= lo <= hi <= 1.
double Weight(const FrequencySampleSet& samples, double lo, double hi,
              std::size_t domain_size,
              IntervalBounds bounds = IntervalBounds::kClosed);

// Plug-in weight of the prior: sum_j pi_j * 1{pi_j in [lo, hi]}.
double PriorWeight(const FrequencyPrior& prior, double lo, double hi);

// n * N * E[alpha (1 - alpha)^(n-1)].
double SingletonExpectation(const FrequencySampleSet& samples, std::uint64_t n,
                            std::size_t domain_size);

// Below this dataset size the constants of the tau_1 lower bound are not
// guaranteed; alpha (1-alpha)^(n-1) >= 1/(5n) holds on [1/3n, 2/n] from here.
inline constexpr std::uint64_t kTau1LowerBoundMinN = 100;

// (1/5n) * Weight(samples, 1/(3n), 2/n). Guarantee: Tau(samples, 1, n) is at
// least this value. Requires n >= kTau1LowerBoundMinN.
double Tau1LowerBound(const FrequencySampleSet& samples, std::uint64_t n,
                      std::size_t domain_size);

// (1/7n) * PriorWeight(prior, 1/(2n), 1/n), stated for pi_max <= 1/200 and
// large n, N. Throws InvalidArgument when pi_max > 1/200.
double Tau1LowerBoundFromPrior(const FrequencyPrior& prior, std::uint64_t n);

struct NoMiddleBound {
  double bound = 0.0;  // 2 * theta
  double beta = 0.0;   // Weight(samples, 0, theta)
  double t = 0.0;      // ln(1 / (theta * beta)) + 2
};

// Upper bound tau_1 <= 2 theta for distributions with no frequencies strictly
// between theta and t/n. Verifies theta <= 1/(2n) and the gap condition and
// throws GapConditionUnsatisfied (with the offending mass) otherwise.
NoMiddleBound Tau1NoMiddleUpper(const FrequencySampleSet& samples,
                                std::uint64_t n, double theta,
                                std::size_t domain_size);

struct RelatePriorsResult {
  double lhs = 0.0;  // weight of [lo, hi] under the sampled marginal
  double rhs = 0.0;  // lower bound computed from the prior itself
  double delta = 0.0;
  double lhs_standard_error = 0.0;  // across frequency-vector replicates
};

// Compares the marginal's weight on [lo, hi] against the Bernstein-based lower
// bound expressed through the prior, with
// delta = 2 exp(-gamma^2 / (2 (N-1) Var[pi] + 2 gamma pi_max / 3)).
// Requires 0 < lo < hi < 1 and gamma > 0.
RelatePriorsResult RelatePriorsCheck(const FrequencyPrior& prior, double lo,
                                     double hi, double gamma,
                                     std::uint64_t replicates, Seed seed);

struct IntervalWeightEntry {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

struct TailReport {
  std::uint64_t n = 0;
  std::size_t domain_size = 0;
  std::map<std::uint64_t, double> tau;
  double singleton_expectation = 0.0;
  std::vector<IntervalWeightEntry> weights;
  std::string method;

  // CSV with header "quantity,ell_or_interval,value,method". Intervals print
  // as "[lo;hi]".
  void WriteCsv(std::ostream& out) const;
};

TailReport BuildTailReport(
    const FrequencySampleSet& samples, std::uint64_t n,
    std::size_t domain_size, const std::vector<std::uint64_t>& ells,
    const std::vector<std::pair<double, double>>& intervals);

// sum_l tau_l * errn_profile[l]. Every key must be present in the report.
double ExcessErrorBound(const TailReport& report,
                        const std::map<std::uint64_t, double>& errn_profile);

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_TAIL_ANALYSIS_H_
