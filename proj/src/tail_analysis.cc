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

#include "tail_ledger/tail_analysis.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "tail_ledger/parallel.h"
#include "tail_ledger/status.h"

namespace tail_ledger {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(alpha^a (1-alpha)^b); a zero exponent contributes nothing even when the
// base is zero.
double LogKernel(double alpha, double a, double b) {
  double lt = 0.0;
  if (a != 0.0) lt += a * std::log(alpha);
  if (b != 0.0) {
    if (alpha >= 1.0) return kNegInf;
    lt += b * std::log1p(-alpha);
  }
  return lt;
}

void CheckEll(std::uint64_t ell, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (ell < 1 || ell > n) {
    throw InvalidArgument("ell must satisfy 1 <= ell <= n; got ell=" +
                          std::to_string(ell) + ", n=" + std::to_string(n));
  }
}

double MomentRatio(const FrequencySampleSet& samples, std::uint64_t ell,
                   std::uint64_t n) {
  const double a = static_cast<double>(ell);
  const double b = static_cast<double>(n - ell);
  const double log_den = LogMoment(samples, a, b);
  if (log_den == kNegInf) {
    throw NumericDegeneracy("E[alpha^" + std::to_string(ell) +
                            " (1-alpha)^" + std::to_string(n - ell) +
                            "] is zero for this sample set");
  }
  const double log_num = LogMoment(samples, a + 1.0, b);
  if (log_num == kNegInf) return 0.0;
  return std::exp(log_num - log_den);
}

void CheckInterval(double lo, double hi) {
  if (!(lo >= 0.0) || !(hi <= 1.0) || lo > hi) {
    std::ostringstream msg;
    msg << "interval must satisfy 0 <= lo <= hi <= 1; got [" << lo << ", "
        << hi << "]";
    throw InvalidArgument(msg.str());
  }
}

bool InInterval(double x, double lo, double hi, IntervalBounds bounds) {
  return bounds == IntervalBounds::kClosed ? (x >= lo && x <= hi)
                                           : (x > lo && x < hi);
}

}  // namespace

double LogMoment(const FrequencySampleSet& samples, double a, double b) {
  const auto& values = samples.values();
  double max_term = kNegInf;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!samples.uniform_weights() && samples.weight(i) == 0.0) continue;
    max_term = std::max(max_term, LogKernel(values[i], a, b));
  }
  if (max_term == kNegInf) return kNegInf;
  CompensatedSum sum;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double lt = LogKernel(values[i], a, b);
    if (lt == kNegInf) continue;
    const double scaled = std::exp(lt - max_term);
    sum.Add(samples.uniform_weights() ? scaled : samples.weight(i) * scaled);
  }
  double result = max_term + std::log(sum.Total());
  if (samples.uniform_weights()) result += std::log(samples.weight(0));
  return result;
}

double Tau(const FrequencySampleSet& samples, std::uint64_t ell,
           std::uint64_t n) {
  CheckEll(ell, n);
  return MomentRatio(samples, ell, n);
}

double TauPlugIn(const FrequencyPrior& prior, std::uint64_t ell,
                 std::uint64_t n) {
  return Tau(PlugInSamples(prior), ell, n);
}

double Weight(const FrequencySampleSet& samples, double lo, double hi,
              std::size_t domain_size, IntervalBounds bounds) {
  CheckInterval(lo, hi);
  CompensatedSum sum;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double alpha = samples.value(i);
    if (InInterval(alpha, lo, hi, bounds)) sum.Add(samples.weight(i) * alpha);
  }
  return static_cast<double>(domain_size) * sum.Total();
}

double PriorWeight(const FrequencyPrior& prior, double lo, double hi) {
  CheckInterval(lo, hi);
  CompensatedSum sum;
  for (double p : prior.entries()) {
    if (p >= lo && p <= hi) sum.Add(p);
  }
  return sum.Total();
}

double SingletonExpectation(const FrequencySampleSet& samples, std::uint64_t n,
                            std::size_t domain_size) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const double log_moment =
      LogMoment(samples, 1.0, static_cast<double>(n - 1));
  if (log_moment == kNegInf) return 0.0;
  return static_cast<double>(n) * static_cast<double>(domain_size) *
         std::exp(log_moment);
}

double Tau1LowerBound(const FrequencySampleSet& samples, std::uint64_t n,
                      std::size_t domain_size) {
  if (n < kTau1LowerBoundMinN) {
    throw InvalidArgument("tau_1 lower bound requires n >= " +
                          std::to_string(kTau1LowerBoundMinN));
  }
  const double nd = static_cast<double>(n);
  return Weight(samples, 1.0 / (3.0 * nd), 2.0 / nd, domain_size) / (5.0 * nd);
}

double Tau1LowerBoundFromPrior(const FrequencyPrior& prior, std::uint64_t n) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (prior.max_entry() > 1.0 / 200.0) {
    throw InvalidArgument("prior-based tau_1 bound requires pi_max <= 1/200");
  }
  const double nd = static_cast<double>(n);
  return PriorWeight(prior, 1.0 / (2.0 * nd), 1.0 / nd) / (7.0 * nd);
}

NoMiddleBound Tau1NoMiddleUpper(const FrequencySampleSet& samples,
                                std::uint64_t n, double theta,
                                std::size_t domain_size) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const double nd = static_cast<double>(n);
  if (!(theta > 0.0) || theta > 1.0 / (2.0 * nd)) {
    throw InvalidArgument("theta must satisfy 0 < theta <= 1/(2n)");
  }
  NoMiddleBound result;
  result.bound = 2.0 * theta;
  result.beta = Weight(samples, 0.0, theta, domain_size);
  if (!(result.beta > 0.0)) {
    throw GapConditionUnsatisfied(
        "no-middle bound: weight of [0, theta] is zero, so t is undefined");
  }
  result.t = std::log(1.0 / (theta * result.beta)) + 2.0;
  const double upper = std::min(1.0, result.t / nd);
  if (upper > theta) {
    const double middle =
        Weight(samples, theta, upper, domain_size, IntervalBounds::kOpen);
    if (middle > 0.0) {
      std::ostringstream msg;
      msg << std::setprecision(6) << "no-middle bound: weight of (" << theta
          << ", " << upper << ") is " << middle << "; the gap must be empty";
      throw GapConditionUnsatisfied(msg.str());
    }
  }
  return result;
}

RelatePriorsResult RelatePriorsCheck(const FrequencyPrior& prior, double lo,
                                     double hi, double gamma,
                                     std::uint64_t replicates, Seed seed) {
  if (!(lo > 0.0) || !(hi < 1.0) || !(lo < hi)) {
    throw InvalidArgument("relate-priors check requires 0 < lo < hi < 1");
  }
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be positive");
  const std::size_t domain_size = prior.size();
  const double nd = static_cast<double>(domain_size);

  const FrequencySampleSet samples =
      MarginalSamples(prior, domain_size, replicates, seed);
  RelatePriorsResult result;
  result.lhs = Weight(samples, lo, hi, domain_size);

  // Replicates occupy consecutive blocks of domain_size values.
  if (replicates > 1) {
    CompensatedSum squares;
    for (std::uint64_t r = 0; r < replicates; ++r) {
      CompensatedSum block;
      for (std::size_t i = r * domain_size; i < (r + 1) * domain_size; ++i) {
        const double alpha = samples.value(i);
        if (alpha >= lo && alpha <= hi) block.Add(alpha);
      }
      const double diff = block.Total() - result.lhs;
      squares.Add(diff * diff);
    }
    const double rd = static_cast<double>(replicates);
    result.lhs_standard_error =
        std::sqrt(squares.Total() / (rd - 1.0) / rd);
  }

  const double base = 1.0 - 1.0 / nd;
  result.delta =
      2.0 * std::exp(-gamma * gamma /
                     (2.0 * (nd - 1.0) * prior.variance() +
                      2.0 * gamma * prior.max_entry() / 3.0));
  const double lower_denominator = base + lo - gamma;
  const double upper_denominator = base + hi + gamma;
  const double prior_lo = lower_denominator > 0.0
                              ? lo / lower_denominator
                              : std::numeric_limits<double>::infinity();
  const double prior_hi = hi / upper_denominator;
  const double prior_weight =
      prior_lo <= prior_hi ? PriorWeight(prior, prior_lo, std::min(prior_hi, 1.0))
                           : 0.0;
  result.rhs = (1.0 - result.delta) / upper_denominator * prior_weight;
  return result;
}

void TailReport::WriteCsv(std::ostream& out) const {
  out << "quantity,ell_or_interval,value,method\n";
  out << std::setprecision(17);
  for (const auto& [ell, value] : tau) {
    out << "tau," << ell << ',' << value << ',' << method << '\n';
  }
  out << "singleton_expectation,," << singleton_expectation << ',' << method
      << '\n';
  for (const auto& w : weights) {
    out << "weight,[" << w.lo << ';' << w.hi << "]," << w.value << ','
        << method << '\n';
  }
}

TailReport BuildTailReport(
    const FrequencySampleSet& samples, std::uint64_t n,
    std::size_t domain_size, const std::vector<std::uint64_t>& ells,
    const std::vector<std::pair<double, double>>& intervals) {
  TailReport report;
  report.n = n;
  report.domain_size = domain_size;
  report.method = samples.MethodName();
  for (std::uint64_t ell : ells) report.tau[ell] = Tau(samples, ell, n);
  report.singleton_expectation = SingletonExpectation(samples, n, domain_size);
  for (const auto& [lo, hi] : intervals) {
    report.weights.push_back(
        {lo, hi, std::clamp(Weight(samples, lo, hi, domain_size), 0.0, 1.0)});
  }
  return report;
}

double ExcessErrorBound(const TailReport& report,
                        const std::map<std::uint64_t, double>& errn_profile) {
  CompensatedSum sum;
  for (const auto& [ell, errn] : errn_profile) {
    if (errn < 0.0) throw InvalidArgument("errn profile values must be >= 0");
    const auto it = report.tau.find(ell);
    if (it == report.tau.end()) {
      throw InvalidArgument("tail report has no tau for ell=" +
                            std::to_string(ell));
    }
    sum.Add(it->second * errn);
  }
  return sum.Total();
}

}  // namespace tail_ledger
