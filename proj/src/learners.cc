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

#include "tail_ledger/learners.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

#include "tail_ledger/parallel.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace tail_ledger {
namespace {

// Uniform over the indices attaining the maximum.
Pmf UniformOverArgmax(std::span<const double> scores) {
  const double best = *std::max_element(scores.begin(), scores.end());
  Pmf pmf(scores.size(), 0.0);
  std::size_t ties = 0;
  for (double s : scores) ties += s == best;
  for (std::size_t y = 0; y < scores.size(); ++y) {
    if (scores[y] == best) pmf[y] = 1.0 / static_cast<double>(ties);
  }
  return pmf;
}

Pmf ModePmf(const LabelPriorSpec& label_prior, Point x) {
  return UniformOverArgmax(label_prior.PointPrior(x));
}

Pmf MajorityPmf(std::span<const std::uint32_t> counts) {
  std::vector<double> scores(counts.begin(), counts.end());
  return UniformOverArgmax(scores);
}

std::uint32_t Total(std::span<const std::uint32_t> counts) {
  std::uint32_t total = 0;
  for (std::uint32_t c : counts) total += c;
  return total;
}

void ValidateLearner(const Learner& learner) {
  learner.label_prior.Validate();
  if (!(learner.gamma >= 0.0 && learner.gamma <= 1.0)) {
    throw InvalidArgument("gamma must lie in [0, 1]");
  }
  if (!(learner.epsilon >= 0.0) || !std::isfinite(learner.epsilon)) {
    throw InvalidArgument("epsilon must be finite and non-negative");
  }
  if (!(learner.delta >= 0.0 && learner.delta <= 1.0)) {
    throw InvalidArgument("delta must lie in [0, 1]");
  }
  if (learner.min_multiplicity < 1) {
    throw InvalidArgument("minimum multiplicity must be at least 1");
  }
}

void CheckCompatible(const Learner& learner, const Dataset& s) {
  if (learner.label_prior.num_classes != s.num_classes()) {
    throw InvalidArgument("learner and dataset disagree on the label count");
  }
}

double ParseNumber(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

std::vector<std::string> SplitColons(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

double ErrorAt(const Pmf& pmf, Label y) { return 1.0 - pmf[y]; }

// Calls visit(sequence) for every sequence in [domain]^n.
template <typename F>
void ForEachSequence(std::size_t domain, std::size_t n, F visit) {
  std::vector<Point> seq(n, 0);
  for (;;) {
    visit(static_cast<const std::vector<Point>&>(seq));
    std::size_t pos = 0;
    while (pos < n && ++seq[pos] == domain) seq[pos++] = 0;
    if (pos == n) break;
  }
}

double MeanOf(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.Add(x);
  return xs.empty() ? 0.0 : s.Total() / static_cast<double>(xs.size());
}

double StandardErrorOf(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = MeanOf(xs);
  CompensatedSum ss;
  for (double x : xs) ss.Add((x - mean) * (x - mean));
  const double k = static_cast<double>(xs.size());
  return std::sqrt(ss.Total() / (k - 1.0) / k);
}

}  // namespace

Learner Learner::Memorizer(LabelPriorSpec label_prior) {
  Learner l;
  l.kind = Kind::kBayesOptimalMemorizer;
  l.label_prior = std::move(label_prior);
  ValidateLearner(l);
  return l;
}

Learner Learner::GammaLimited(LabelPriorSpec label_prior, double gamma) {
  Learner l;
  l.kind = Kind::kGammaLimited;
  l.label_prior = std::move(label_prior);
  l.gamma = gamma;
  ValidateLearner(l);
  return l;
}

Learner Learner::RrLabelPrivate(LabelPriorSpec label_prior, double epsilon,
                                double delta) {
  Learner l;
  l.kind = Kind::kRrLabelPrivate;
  l.label_prior = std::move(label_prior);
  l.epsilon = epsilon;
  l.delta = delta;
  ValidateLearner(l);
  return l;
}

Learner Learner::NoFit(LabelPriorSpec label_prior) {
  Learner l;
  l.kind = Kind::kNoFit;
  l.label_prior = std::move(label_prior);
  ValidateLearner(l);
  return l;
}

Learner Learner::FitMultiplicityAtLeast(LabelPriorSpec label_prior,
                                        std::uint32_t k) {
  Learner l;
  l.kind = Kind::kFitMultiplicityAtLeast;
  l.label_prior = std::move(label_prior);
  l.min_multiplicity = k;
  ValidateLearner(l);
  return l;
}

std::string Learner::Name() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::kBayesOptimalMemorizer:
      out << "bayes-optimal-memorizer";
      break;
    case Kind::kGammaLimited:
      out << "gamma-limited(" << gamma << ")";
      break;
    case Kind::kRrLabelPrivate:
      out << "rr-label-private(" << epsilon << "," << delta << ")";
      break;
    case Kind::kNoFit:
      out << "no-fit";
      break;
    case Kind::kFitMultiplicityAtLeast:
      out << "fit-multiplicity-at-least(" << min_multiplicity << ")";
      break;
  }
  return out.str();
}

Learner ParseLearner(const std::string& text, LabelPriorSpec label_prior) {
  const auto parts = SplitColons(text);
  const std::string& head = parts[0];
  auto expect = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() < lo || parts.size() > hi) {
      throw InvalidArgument("malformed learner '" + text + "'");
    }
  };
  if (head == "memorizer" || head == "bayes-optimal-memorizer") {
    expect(1, 1);
    return Learner::Memorizer(std::move(label_prior));
  }
  if (head == "no-fit") {
    expect(1, 1);
    return Learner::NoFit(std::move(label_prior));
  }
  if (head == "gamma-limited") {
    expect(2, 2);
    return Learner::GammaLimited(std::move(label_prior),
                                 ParseNumber(parts[1], "gamma"));
  }
  if (head == "rr" || head == "rr-label-private") {
    expect(2, 3);
    const double delta =
        parts.size() == 3 ? ParseNumber(parts[2], "delta") : 0.0;
    return Learner::RrLabelPrivate(std::move(label_prior),
                                   ParseNumber(parts[1], "epsilon"), delta);
  }
  if (head == "fit-at-least" || head == "fit-multiplicity-at-least") {
    expect(2, 2);
    const double k = ParseNumber(parts[1], "k");
    if (k < 1 || k != std::floor(k) || k > 1e9) {
      throw InvalidArgument("k must be a positive integer");
    }
    return Learner::FitMultiplicityAtLeast(std::move(label_prior),
                                           static_cast<std::uint32_t>(k));
  }
  throw InvalidArgument("unknown learner '" + text +
                        "'; expected memorizer, no-fit, gamma-limited:G, "
                        "rr:EPS[:DELTA] or fit-at-least:K");
}

double RrStayProbability(double epsilon, std::size_t num_classes) {
  if (num_classes < 2) throw InvalidArgument("need at least two labels");
  // e^eps / (e^eps + m - 1), written to stay finite for large eps.
  return 1.0 / (1.0 + static_cast<double>(num_classes - 1) *
                          std::exp(-epsilon));
}

Pmf PredictFromCounts(const Learner& learner, Point x,
                      std::span<const std::uint32_t> counts) {
  const std::size_t m = learner.label_prior.num_classes;
  if (counts.size() != m) {
    throw InvalidArgument("label counts do not match the label count");
  }
  const std::uint32_t total = Total(counts);
  switch (learner.kind) {
    case Learner::Kind::kBayesOptimalMemorizer:
      return total == 0 ? ModePmf(learner.label_prior, x) : MajorityPmf(counts);
    case Learner::Kind::kNoFit:
      return ModePmf(learner.label_prior, x);
    case Learner::Kind::kFitMultiplicityAtLeast:
      return total >= learner.min_multiplicity && total > 0
                 ? MajorityPmf(counts)
                 : ModePmf(learner.label_prior, x);
    case Learner::Kind::kGammaLimited: {
      Pmf pmf = ModePmf(learner.label_prior, x);
      if (total == 0) return pmf;
      // Emitting the label of a uniformly chosen copy with probability gamma
      // and recursing on the remaining copies otherwise.
      const double fit =
          1.0 - std::pow(1.0 - learner.gamma, static_cast<double>(total));
      for (std::size_t y = 0; y < m; ++y) {
        pmf[y] = fit * counts[y] / static_cast<double>(total) +
                 (1.0 - fit) * pmf[y];
      }
      return pmf;
    }
    case Learner::Kind::kRrLabelPrivate: {
      const Pmf base =
          total == 0 ? ModePmf(learner.label_prior, x) : MajorityPmf(counts);
      const double stay = RrStayProbability(learner.epsilon, m);
      const double move = (1.0 - stay) / static_cast<double>(m - 1);
      Pmf pmf(m);
      for (std::size_t y = 0; y < m; ++y) {
        const double rr = stay * base[y] + move * (1.0 - base[y]);
        pmf[y] = learner.delta * base[y] + (1.0 - learner.delta) * rr;
      }
      return pmf;
    }
  }
  throw InvalidArgument("unknown learner kind");
}

Pmf PredictionDistribution(const Learner& learner, const Dataset& s, Point x) {
  CheckCompatible(learner, s);
  if (x >= s.domain_size()) {
    throw InvalidArgument("point " + std::to_string(x) + " is outside [N]");
  }
  return PredictFromCounts(learner, x, s.label_counts(x));
}

Pmf PredictionWithout(const Learner& learner, const Dataset& s,
                      std::size_t i) {
  CheckCompatible(learner, s);
  if (i >= s.size()) throw InvalidArgument("index out of range");
  const Example& e = s.example(i);
  const auto counts = s.label_counts(e.point);
  std::vector<std::uint32_t> reduced(counts.begin(), counts.end());
  --reduced[e.label];
  return PredictFromCounts(learner, e.point, reduced);
}

double Errn(const Learner& learner, const Dataset& s, std::uint64_t ell,
            std::uint64_t mc_reps, Seed seed) {
  CheckCompatible(learner, s);
  if (ell < 1 || ell > s.size()) {
    throw InvalidArgument("ell must satisfy 1 <= ell <= n");
  }
  const auto points = s.PointsWithMultiplicity(static_cast<std::uint32_t>(ell));
  const double dl = static_cast<double>(ell);
  if (mc_reps == 0) {
    CompensatedSum total;
    for (Point x : points) {
      const Pmf pmf = PredictionDistribution(learner, s, x);
      const auto counts = s.label_counts(x);
      for (std::size_t y = 0; y < pmf.size(); ++y) {
        total.Add(counts[y] * (1.0 - pmf[y]));
      }
    }
    return total.Total() / dl;
  }
  std::vector<std::vector<double>> cumulative;
  cumulative.reserve(points.size());
  for (Point x : points) {
    cumulative.push_back(CumulativeFromPmf(PredictionDistribution(learner, s, x)));
  }
  std::vector<double> per_rep(mc_reps);
  ParallelFor(mc_reps, [&](std::size_t r) {
    Rng rng(DeriveSeed(seed, r));
    double mistakes = 0.0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      const std::size_t h = rng.FromCumulative(cumulative[k]);
      mistakes += dl - s.label_counts(points[k])[h];
    }
    per_rep[r] = mistakes / dl;
  });
  return MeanOf(per_rep);
}

std::map<std::uint64_t, double> ErrnProfile(const Learner& learner,
                                            const Dataset& s) {
  CheckCompatible(learner, s);
  std::map<std::uint64_t, CompensatedSum> sums;
  for (std::size_t x = 0; x < s.domain_size(); ++x) {
    const std::uint32_t ell = s.multiplicity(static_cast<Point>(x));
    if (ell == 0) continue;
    const Pmf pmf = PredictionDistribution(learner, s, static_cast<Point>(x));
    const auto counts = s.label_counts(static_cast<Point>(x));
    double mistakes = 0.0;
    for (std::size_t y = 0; y < pmf.size(); ++y) {
      mistakes += counts[y] * (1.0 - pmf[y]);
    }
    sums[ell].Add(mistakes / ell);
  }
  std::map<std::uint64_t, double> profile;
  for (const auto& [ell, sum] : sums) profile[ell] = sum.Total();
  return profile;
}

double PopulationError(const Learner& learner, const Dataset& s,
                       std::span<const double> pmf,
                       std::span<const Label> labels) {
  CheckCompatible(learner, s);
  if (pmf.size() != s.domain_size() || labels.size() != s.domain_size()) {
    throw InvalidArgument("distribution and dataset domains differ");
  }
  CompensatedSum total;
  for (std::size_t x = 0; x < pmf.size(); ++x) {
    if (pmf[x] == 0.0) continue;
    const Pmf p = PredictionDistribution(learner, s, static_cast<Point>(x));
    total.Add(pmf[x] * ErrorAt(p, labels[x]));
  }
  return total.Total();
}

double GeneralizationError(const Learner& learner,
                           const DiscreteInstance& instance) {
  return PopulationError(learner, instance.dataset, instance.pmf,
                         instance.true_labels);
}

double EmpiricalError(const Learner& learner, const Dataset& s) {
  CheckCompatible(learner, s);
  if (s.size() == 0) throw InvalidArgument("empirical error of an empty set");
  CompensatedSum total;
  for (std::size_t x = 0; x < s.domain_size(); ++x) {
    if (s.multiplicity(static_cast<Point>(x)) == 0) continue;
    const Pmf p = PredictionDistribution(learner, s, static_cast<Point>(x));
    const auto counts = s.label_counts(static_cast<Point>(x));
    for (std::size_t y = 0; y < p.size(); ++y) {
      total.Add(counts[y] * (1.0 - p[y]));
    }
  }
  return total.Total() / static_cast<double>(s.size());
}

double MemScore(const Learner& learner, const Dataset& s, std::size_t i) {
  if (i >= s.size()) throw InvalidArgument("index out of range");
  const Example& e = s.example(i);
  return PredictionDistribution(learner, s, e.point)[e.label] -
         PredictionWithout(learner, s, i)[e.label];
}

double LooStability(const Learner& learner, const Dataset& s) {
  if (s.size() == 0) throw InvalidArgument("stability of an empty set");
  CompensatedSum total;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total.Add(std::abs(MemScore(learner, s, i)));
  }
  return total.Total() / static_cast<double>(s.size());
}

double ConfMargin(const Dataset& s, std::size_t i,
                  const LabelPriorSpec& label_prior) {
  if (i >= s.size()) throw InvalidArgument("index out of range");
  if (s.multiplicity(s.example(i).point) != 1) {
    throw InvalidArgument("confidence margin is defined for singletons only");
  }
  if (label_prior.kind != LabelPriorSpec::Kind::kIidUniform) {
    throw UnsupportedPrior(
        "confidence margin needs the iid-uniform label prior; explicit "
        "tables have no closed-form posterior here");
  }
  const double m = static_cast<double>(label_prior.num_classes);
  const double kappa = label_prior.noise_kappa;
  // Posterior of f(x_i): kappa + (1 - kappa)/m on y_i, (1 - kappa)/m else.
  const double observed = kappa + (1.0 - kappa) / m;
  const double other = (1.0 - kappa) / m;
  return std::max(0.0, observed - other);
}

void MetricReport::WriteCsv(std::ostream& out) const {
  out << "metric,index_or_ell,value\n" << std::setprecision(17);
  out << "err,," << err << '\n';
  for (const auto& [ell, v] : errn) out << "errn," << ell << ',' << v << '\n';
  for (std::size_t i = 0; i < mem.size(); ++i) {
    out << "mem," << i << ',' << mem[i] << '\n';
  }
  out << "loostab,," << loostab << '\n';
  for (const auto& [i, v] : conf) out << "conf," << i << ',' << v << '\n';
}

MetricReport BuildMetricReport(const Learner& learner,
                               const DiscreteInstance& instance,
                               const LabelPriorSpec& label_prior) {
  const Dataset& s = instance.dataset;
  MetricReport report;
  report.err = GeneralizationError(learner, instance);
  report.errn = ErrnProfile(learner, s);
  report.mem.resize(s.size());
  CompensatedSum abs_total;
  for (std::size_t i = 0; i < s.size(); ++i) {
    report.mem[i] = MemScore(learner, s, i);
    abs_total.Add(std::abs(report.mem[i]));
  }
  report.loostab =
      s.size() == 0 ? 0.0 : abs_total.Total() / static_cast<double>(s.size());
  if (label_prior.kind == LabelPriorSpec::Kind::kIidUniform) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.multiplicity(s.example(i).point) == 1) {
        report.conf[i] = ConfMargin(s, i, label_prior);
      }
    }
  }
  return report;
}

MainBoundResult VerifyMainBoundExact(const FrequencyPrior& prior,
                                     const LabelPriorSpec& label_prior,
                                     std::size_t n, const Learner& learner) {
  if (label_prior.kind != LabelPriorSpec::Kind::kIidUniform ||
      label_prior.noise_kappa != 1.0) {
    throw InvalidArgument(
        "exact decomposition needs the noiseless iid-uniform label prior");
  }
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const std::size_t dom = prior.size();
  const std::size_t m = label_prior.num_classes;
  double work = std::pow(static_cast<double>(prior.size()), dom) *
                std::pow(static_cast<double>(dom), n) *
                std::pow(static_cast<double>(m), std::min(n, dom));
  if (work > static_cast<double>(kBruteForceBudget)) {
    throw ResourceLimit("exact decomposition exceeds the enumeration bound");
  }
  const Learner optimal = Learner::Memorizer(label_prior);
  const FrequencySampleSet marginal = ExactMarginal(prior, dom);
  std::vector<double> tau(n + 1, 0.0);
  for (std::size_t ell = 1; ell <= n; ++ell) tau[ell] = Tau(marginal, ell, n);

  std::vector<std::vector<double>> vectors;
  std::vector<double> vector_probability;
  EnumerateFrequencyVectors(prior, dom, kBruteForceBudget,
                            [&](std::span<const double> pmf, double p) {
                              vectors.emplace_back(pmf.begin(), pmf.end());
                              vector_probability.push_back(p);
                            });

  CompensatedSum lhs;
  CompensatedSum rhs;
  double max_residual = 0.0;
  ForEachSequence(dom, n, [&](const std::vector<Point>& seq) {
    CompensatedSum sequence_probability;
    std::vector<CompensatedSum> mass(dom);
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      double w = vector_probability[k];
      for (Point x : seq) w *= vectors[k][x];
      sequence_probability.Add(w);
      for (std::size_t x = 0; x < dom; ++x) mass[x].Add(w * vectors[k][x]);
    }
    const double pv = sequence_probability.Total();
    if (pv <= 0.0) return;
    std::vector<double> posterior(dom);
    for (std::size_t x = 0; x < dom; ++x) posterior[x] = mass[x].Total() / pv;

    std::vector<Point> distinct(seq.begin(), seq.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()),
                   distinct.end());
    const double labeling_probability =
        std::pow(1.0 / static_cast<double>(m), distinct.size());
    std::vector<Label> f(dom, 0);
    std::vector<std::size_t> digit(distinct.size(), 0);
    for (;;) {
      for (std::size_t k = 0; k < distinct.size(); ++k) {
        f[distinct[k]] = static_cast<Label>(digit[k]);
      }
      std::vector<Example> examples;
      for (Point x : seq) examples.push_back({x, f[x]});
      const Dataset s(dom, m, std::move(examples));

      double excess = 0.0;
      double bound = 0.0;
      for (std::size_t x = 0; x < dom; ++x) {
        const Point px = static_cast<Point>(x);
        const Pmf a = PredictionDistribution(learner, s, px);
        const Pmf o = PredictionDistribution(optimal, s, px);
        const std::uint32_t ell = s.multiplicity(px);
        // Given Z, f(x) is uniform on unseen points, so every prediction
        // errs there with probability 1 - 1/m.
        if (ell == 0) continue;
        const double d = ErrorAt(a, f[x]) - ErrorAt(o, f[x]);
        excess += posterior[x] * d;
        bound += tau[ell] * ErrorAt(a, f[x]);
      }
      const double weight = pv * labeling_probability;
      lhs.Add(weight * excess);
      rhs.Add(weight * bound);
      max_residual =
          std::max(max_residual, std::abs(excess - bound));

      std::size_t pos = 0;
      while (pos < digit.size() && ++digit[pos] == m) digit[pos++] = 0;
      if (pos == digit.size()) break;
    }
  });

  MainBoundResult result;
  result.lhs_excess = lhs.Total();
  result.rhs_sum = rhs.Total();
  result.gap = result.lhs_excess - result.rhs_sum;
  result.max_dataset_residual = max_residual;
  return result;
}

MainBoundResult VerifyMainBound(const FrequencyPrior& prior,
                                const LabelPriorSpec& label_prior,
                                std::size_t n, const Learner& learner,
                                std::uint64_t instances,
                                std::uint64_t tau_replicates, Seed seed) {
  if (instances < 2) throw InvalidArgument("need at least two instances");
  const Learner optimal = Learner::Memorizer(label_prior);
  std::vector<double> excess(instances);
  std::vector<std::map<std::uint64_t, double>> profiles(instances);
  ParallelFor(instances, [&](std::size_t r) {
    const DiscreteInstance inst =
        SampleInstance(prior, label_prior, n, DeriveSeed(seed, r));
    excess[r] = GeneralizationError(learner, inst) -
                GeneralizationError(optimal, inst);
    profiles[r] = ErrnProfile(learner, inst.dataset);
  });

  std::set<std::uint64_t> ells;
  for (const auto& p : profiles) {
    for (const auto& [ell, v] : p) {
      if (v > 0.0) ells.insert(ell);
    }
  }
  const FrequencySampleSet marginal = MarginalSamples(
      prior, prior.size(), tau_replicates, DeriveSeed(seed, instances));
  const std::vector<std::uint64_t> ell_list(ells.begin(), ells.end());
  std::vector<double> tau_values(ell_list.size());
  ParallelFor(ell_list.size(), [&](std::size_t k) {
    tau_values[k] = Tau(marginal, ell_list[k], n);
  });
  std::map<std::uint64_t, double> tau;
  for (std::size_t k = 0; k < ell_list.size(); ++k) {
    tau[ell_list[k]] = tau_values[k];
  }

  std::vector<double> bound(instances);
  std::vector<double> gap(instances);
  for (std::size_t r = 0; r < instances; ++r) {
    CompensatedSum sum;
    for (const auto& [ell, v] : profiles[r]) {
      if (v > 0.0) sum.Add(tau.at(ell) * v);
    }
    bound[r] = sum.Total();
    gap[r] = excess[r] - bound[r];
  }
  MainBoundResult result;
  result.lhs_excess = MeanOf(excess);
  result.rhs_sum = MeanOf(bound);
  result.gap = MeanOf(gap);
  result.gap_standard_error = StandardErrorOf(gap);
  return result;
}

MemGapResult VerifyMemGapExact(const Learner& learner,
                               std::span<const double> pmf,
                               std::span<const Label> labels,
                               std::size_t num_classes, std::size_t n) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  const std::size_t dom = pmf.size();
  if (std::pow(static_cast<double>(dom), n) >
      static_cast<double>(kBruteForceBudget)) {
    throw ResourceLimit("exact identity check exceeds the enumeration bound");
  }
  auto make = [&](const std::vector<Point>& seq) {
    std::vector<Example> ex;
    for (Point x : seq) ex.push_back({x, labels[x]});
    return Dataset(dom, num_classes, std::move(ex));
  };
  auto probability = [&](const std::vector<Point>& seq) {
    double p = 1.0;
    for (Point x : seq) p *= pmf[x];
    return p;
  };
  CompensatedSum mem;
  CompensatedSum empirical;
  ForEachSequence(dom, n, [&](const std::vector<Point>& seq) {
    const double p = probability(seq);
    if (p == 0.0) return;
    const Dataset s = make(seq);
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) total.Add(MemScore(learner, s, i));
    mem.Add(p * total.Total() / static_cast<double>(n));
    empirical.Add(p * EmpiricalError(learner, s));
  });
  CompensatedSum population;
  ForEachSequence(dom, n - 1, [&](const std::vector<Point>& seq) {
    const double p = probability(seq);
    if (p == 0.0) return;
    population.Add(p * PopulationError(learner, make(seq), pmf, labels));
  });
  MemGapResult result;
  result.avg_mem = mem.Total();
  result.emp_gap = population.Total() - empirical.Total();
  return result;
}

MemGapResult VerifyMemGapIdentity(const Learner& learner,
                                  const FrequencyPrior& prior,
                                  const LabelPriorSpec& label_prior,
                                  std::size_t n, std::uint64_t replicates,
                                  Seed seed) {
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (replicates < 2) throw InvalidArgument("need at least two replicates");
  std::vector<double> mem(replicates);
  std::vector<double> gap(replicates);
  std::vector<double> diff(replicates);
  ParallelFor(replicates, [&](std::size_t r) {
    const Seed instance_seed = DeriveSeed(seed, r);
    const DiscreteInstance inst =
        SampleInstance(prior, label_prior, n, instance_seed);
    const Dataset& s = inst.dataset;
    Rng rng(DeriveSeed(instance_seed, 4));
    const Dataset shorter = SampleDataset(inst.pmf, inst.observed_labels,
                                          inst.num_classes, n - 1, rng);
    CompensatedSum total;
    for (std::size_t i = 0; i < n; ++i) total.Add(MemScore(learner, s, i));
    mem[r] = total.Total() / static_cast<double>(n);
    gap[r] = PopulationError(learner, shorter, inst.pmf, inst.observed_labels) -
             EmpiricalError(learner, s);
    diff[r] = mem[r] - gap[r];
  });
  MemGapResult result;
  result.avg_mem = MeanOf(mem);
  result.emp_gap = MeanOf(gap);
  result.difference_standard_error = StandardErrorOf(diff);
  return result;
}

ForcedLabelFit MeasureForcedLabelFit(const Learner& learner, const Dataset& s,
                                     std::size_t i,
                                     std::span<const double> rho) {
  CheckCompatible(learner, s);
  if (i >= s.size()) throw InvalidArgument("index out of range");
  const std::size_t m = s.num_classes();
  std::vector<double> weights(rho.begin(), rho.end());
  if (weights.empty()) weights.assign(m, 1.0 / static_cast<double>(m));
  if (weights.size() != m) throw InvalidArgument("rho must have m entries");
  const Example& e = s.example(i);
  const auto counts = s.label_counts(e.point);
  std::vector<std::uint32_t> without(counts.begin(), counts.end());
  --without[e.label];
  const Pmf left_out = PredictFromCounts(learner, e.point, without);

  ForcedLabelFit result;
  CompensatedSum fit;
  CompensatedSum mem;
  for (std::size_t y = 0; y < m; ++y) {
    result.rho_max = std::max(result.rho_max, weights[y]);
    if (weights[y] == 0.0) continue;
    std::vector<std::uint32_t> forced = without;
    ++forced[y];
    const double p = PredictFromCounts(learner, e.point, forced)[y];
    fit.Add(weights[y] * p);
    mem.Add(weights[y] * (p - left_out[y]));
  }
  result.fit_probability = fit.Total();
  result.mean_mem = mem.Total();
  return result;
}

}  // namespace tail_ledger
