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

// Simulated learning algorithms over the discrete model and the metrics used
// to analyze them: errn, generalization error, memorization scores,
// leave-one-out stability and the confidence margin.
//
// Every learner here is pointwise: its prediction at x depends only on the
// labels S carries at x. Prediction pmfs are therefore exact and metrics are
// computed from them directly; Monte Carlo is used only where a predictor h
// has to be drawn.

#ifndef TAIL_LEDGER_LEARNERS_H_
#define TAIL_LEDGER_LEARNERS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tail_ledger/discrete_model.h"
#include "tail_ledger/prior_model.h"
#include "tail_ledger/random.h"

namespace tail_ledger {

using Pmf = std::vector<double>;

struct Learner {
  enum class Kind {
    kBayesOptimalMemorizer,
    kGammaLimited,
    kRrLabelPrivate,
    kNoFit,
    kFitMultiplicityAtLeast,
  };

  Kind kind = Kind::kBayesOptimalMemorizer;
  LabelPriorSpec label_prior;
  double gamma = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::uint32_t min_multiplicity = 1;

  static Learner Memorizer(LabelPriorSpec label_prior);
  static Learner GammaLimited(LabelPriorSpec label_prior, double gamma);
  static Learner RrLabelPrivate(LabelPriorSpec label_prior, double epsilon,
                                double delta = 0.0);
  static Learner NoFit(LabelPriorSpec label_prior);
  static Learner FitMultiplicityAtLeast(LabelPriorSpec label_prior,
                                        std::uint32_t k);

  // "bayes-optimal-memorizer", "gamma-limited(0.5)", ...
  std::string Name() const;
};

// Parses the learner names accepted by the CLI: memorizer, no-fit,
// gamma-limited:G, rr:EPS[:DELTA], fit-at-least:K.
Learner ParseLearner(const std::string& text, LabelPriorSpec label_prior);

// Randomized-response stay probability e^eps / (e^eps + m - 1).
double RrStayProbability(double epsilon, std::size_t num_classes);

// Prediction pmf at x given the label counts S carries at x.
Pmf PredictFromCounts(const Learner& learner, Point x,
                      std::span<const std::uint32_t> counts);

Pmf PredictionDistribution(const Learner& learner, const Dataset& s, Point x);

// Prediction pmf at x_i of the learner trained on S without example i.
Pmf PredictionWithout(const Learner& learner, const Dataset& s, std::size_t i);

// (1/ell) E_h |{i : x_i occurs ell times in S and h(x_i) != y_i}|. Exact when
// mc_reps is 0, otherwise averaged over mc_reps predictor draws.
double Errn(const Learner& learner, const Dataset& s, std::uint64_t ell,
            std::uint64_t mc_reps = 0, Seed seed = 0);

// All nonzero-multiplicity errn values, exact.
std::map<std::uint64_t, double> ErrnProfile(const Learner& learner,
                                            const Dataset& s);

// sum_x pmf(x) * Pr_h[h(x) != labels(x)].
double PopulationError(const Learner& learner, const Dataset& s,
                       std::span<const double> pmf,
                       std::span<const Label> labels);

// Error against the true labeling f of the instance.
double GeneralizationError(const Learner& learner,
                           const DiscreteInstance& instance);

// (1/n) sum_i Pr_h[h(x_i) != y_i].
double EmpiricalError(const Learner& learner, const Dataset& s);

double MemScore(const Learner& learner, const Dataset& s, std::size_t i);

double LooStability(const Learner& learner, const Dataset& s);

// Posterior advantage of y_i over the best other label for a singleton x_i,
// clipped below at zero. Requires the iid-uniform label prior.
double ConfMargin(const Dataset& s, std::size_t i,
                  const LabelPriorSpec& label_prior);

struct MetricReport {
  double err = 0.0;
  std::map<std::uint64_t, double> errn;
  std::vector<double> mem;
  double loostab = 0.0;
  // Singleton indices only.
  std::map<std::size_t, double> conf;

  // CSV "metric,index_or_ell,value".
  void WriteCsv(std::ostream& out) const;
};

MetricReport BuildMetricReport(const Learner& learner,
                               const DiscreteInstance& instance,
                               const LabelPriorSpec& label_prior);

struct MainBoundResult {
  double lhs_excess = 0.0;  // E[err(A)] - E[err(memorizer)]
  double rhs_sum = 0.0;     // E[sum_ell tau_ell * errn(A, ell)]
  double gap = 0.0;         // lhs_excess - rhs_sum
  double gap_standard_error = 0.0;
  // Exact mode only: the largest per-dataset deviation from the identity
  // with tau_ell in place of the posterior frequency of each seen point.
  double max_dataset_residual = 0.0;
};

// Full enumeration over frequency assignments, sequences and labelings.
// Requires the noiseless iid-uniform label prior and small N, n, m.
MainBoundResult VerifyMainBoundExact(const FrequencyPrior& prior,
                                     const LabelPriorSpec& label_prior,
                                     std::size_t n, const Learner& learner);

// Monte Carlo over `instances` sampled instances; tau_ell from
// tau_replicates frequency-vector draws.
MainBoundResult VerifyMainBound(const FrequencyPrior& prior,
                                const LabelPriorSpec& label_prior,
                                std::size_t n, const Learner& learner,
                                std::uint64_t instances,
                                std::uint64_t tau_replicates, Seed seed);

struct MemGapResult {
  double avg_mem = 0.0;  // E[(1/n) sum_i mem(A, S, i)]
  // E[err_P(A, S')] - E[err_S(A, S)] with |S'| = n - 1.
  double emp_gap = 0.0;
  double difference_standard_error = 0.0;
};

// Exact for a fixed distribution P = (pmf, labels) by enumerating all
// datasets of size n and n - 1.
MemGapResult VerifyMemGapExact(const Learner& learner,
                               std::span<const double> pmf,
                               std::span<const Label> labels,
                               std::size_t num_classes, std::size_t n);

MemGapResult VerifyMemGapIdentity(const Learner& learner,
                                  const FrequencyPrior& prior,
                                  const LabelPriorSpec& label_prior,
                                  std::size_t n, std::uint64_t replicates,
                                  Seed seed);

struct ForcedLabelFit {
  // E_{y~rho} Pr_{A(S^{i<-y})}[h(x_i) = y]
  double fit_probability = 0.0;
  // E_{y~rho} mem(A, S^{i<-y}, i)
  double mean_mem = 0.0;
  double rho_max = 0.0;
};

// Replaces the label of example i by y ~ rho and measures how often the
// learner fits it. An empty rho means uniform.
ForcedLabelFit MeasureForcedLabelFit(const Learner& learner, const Dataset& s,
                                     std::size_t i,
                                     std::span<const double> rho = {});

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_LEARNERS_H_
