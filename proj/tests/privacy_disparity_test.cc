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

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "tail_ledger/discrete_model.h"
#include "tail_ledger/learners.h"
#include "tail_ledger/status.h"
#include "test_support.h"

namespace tail_ledger {
namespace {

using testing::MeanAndError;
using testing::RandomTailPrior;
using testing::Summarize;

// Direct long-double evaluation of the plug-in sums.
long double PlugIn(const FrequencyPrior& prior, int a, std::uint64_t b) {
  long double total = 0.0L;
  for (double alpha : prior.entries()) {
    total += std::pow(static_cast<long double>(alpha), a) *
             std::pow(1.0L - alpha, static_cast<long double>(b));
  }
  return total;
}

TEST_CASE("closed forms against direct long-double sums") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const FrequencyPrior prior = RandomTailPrior(rng, 20, 400);
    const std::uint64_t n = 10 + rng.Below(500);
    const std::size_t m = 2 + rng.Below(9);
    const long double unseen = PlugIn(prior, 1, n);
    const long double single = PlugIn(prior, 1, n - 1);
    const long double tau1 = PlugIn(prior, 2, n - 1) / single;
    CHECK(OptError(prior, n, m) ==
          doctest::Approx(static_cast<double>((1.0L - 1.0L / m) * unseen))
              .epsilon(1e-10));
    CHECK(ExpectedSingletons(prior, n) ==
          doctest::Approx(static_cast<double>(n * single)).epsilon(1e-10));
    CHECK(Tau1(prior, n) ==
          doctest::Approx(static_cast<double>(tau1)).epsilon(1e-10));
    const double gamma = 0.3 * rng.Uniform();
    CHECK(MemorizationCost(prior, n, m, gamma) ==
          doctest::Approx(static_cast<double>(
                              tau1 * n * single *
                              std::max(0.0L, 1.0L - 1.0L / m - gamma)))
              .epsilon(1e-10));
  }
}

TEST_CASE("published subgroup numbers with the plug-in prior") {
  struct Row {
    std::size_t domain;
    std::uint64_t n;
    double opt;
    double cost;
  };
  const Row rows[] = {
      {5000, 50000, 0.018, 0.015},
      {5000, 10000, 0.113, 0.035},
      {25000, 50000, 0.107, 0.031},
  };
  for (const Row& r : rows) {
    const FrequencyPrior prior = ZipfPrior(r.domain);
    const double opt = OptError(prior, r.n, 10);
    const double cost = MemorizationCost(prior, r.n, 10, 0.5);
    MESSAGE("N=" << r.domain << " n=" << r.n << " opt=" << opt
                 << " cost=" << cost);
    CHECK(std::abs(opt - r.opt) <= 0.002);
    CHECK(std::abs(cost - r.cost) <= 0.002);
    CHECK(std::abs(PrivacyCost(prior, r.n, 10, std::log(6.0), 0.0) - cost) <=
          1e-12);
  }
}

TEST_CASE("trivial values") {
  const FrequencyPrior one = UniformPrior(1);
  CHECK(OptError(one, 5, 3) == 0.0);
  const FrequencyPrior prior = ZipfPrior(300);
  CHECK(MemorizationCost(prior, 200, 4, 0.75) == 0.0);
  CHECK(MemorizationCost(prior, 200, 4, 0.9) == 0.0);
  CHECK(PrivacyCost(prior, 200, 4, std::log(4.0), 0.0) == 0.0);
  CHECK(PrivacyCost(prior, 200, 4, 2.0, 0.0) == 0.0);
  CHECK(PrivacyCost(prior, 200, 4, 0.0, 1.0) == 0.0);
  CHECK(MemorizationCost(prior, 200, 4, 0.1, 0.0) == 0.0);
  CHECK_THROWS_AS(MemorizationCost(prior, 200, 1, 0.1), InvalidArgument);
  CHECK_THROWS_AS(MemorizationCost(prior, 200, 4, 1.5), InvalidArgument);
  CHECK_THROWS_AS(PrivacyCost(prior, 200, 4, -1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(PrivacyCost(prior, 200, 4, 1.0, 2.0), InvalidArgument);
}

TEST_CASE("monotonicity on random priors") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const FrequencyPrior prior = RandomTailPrior(rng, 10, 300);
    const std::uint64_t n = 20 + rng.Below(300);
    const std::size_t m = 2 + rng.Below(8);
    const double g1 = rng.Uniform(), g2 = rng.Uniform();
    const double k1 = rng.Uniform(), k2 = rng.Uniform();
    const double e1 = 3.0 * rng.Uniform(), e2 = 3.0 * rng.Uniform();
    const double d1 = rng.Uniform(), d2 = rng.Uniform();
    CHECK(MemorizationCost(prior, n, m, std::min(g1, g2), k1) >=
          MemorizationCost(prior, n, m, std::max(g1, g2), k1));
    CHECK(MemorizationCost(prior, n, m, g1, std::max(k1, k2)) >=
          MemorizationCost(prior, n, m, g1, std::min(k1, k2)));
    CHECK(PrivacyCost(prior, n, m, std::min(e1, e2), d1, k1) >=
          PrivacyCost(prior, n, m, std::max(e1, e2), d1, k1));
    CHECK(PrivacyCost(prior, n, m, e1, std::min(d1, d2), k1) >=
          PrivacyCost(prior, n, m, e1, std::max(d1, d2), k1));
    CHECK(PrivacyCost(prior, n, m, e1, d1, std::max(k1, k2)) >=
          PrivacyCost(prior, n, m, e1, d1, std::min(k1, k2)));
  }
}

TEST_CASE("label privacy costs at least the implied memorization limit") {
  // Label-private prediction is (e^eps - 1 + delta)-memorization limited, and
  // the privacy form is the sharper of the two bounds.
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const FrequencyPrior prior = RandomTailPrior(rng, 10, 300);
    const std::uint64_t n = 20 + rng.Below(300);
    const std::size_t m = 2 + rng.Below(8);
    const double eps = 0.7 * rng.Uniform();
    const double delta = 0.3 * rng.Uniform();
    const double gamma = std::exp(eps) - 1.0 + delta;
    if (gamma > 1.0) continue;
    CHECK(PrivacyCost(prior, n, m, eps, delta) >=
          MemorizationCost(prior, n, m, gamma) - 1e-15);
  }
}

TEST_CASE("opt error matches the memorizer's simulated error") {
  const FrequencyPrior prior = ZipfPrior(200);
  const LabelPriorSpec labels = LabelPriorSpec::IidUniform(3);
  const Learner memorizer = Learner::Memorizer(labels);
  std::vector<double> errors;
  for (Seed seed = 0; seed < 600; ++seed) {
    const DiscreteInstance inst = SampleInstance(prior, labels, 200, seed);
    errors.push_back(GeneralizationError(memorizer, inst));
  }
  const MeanAndError sim = Summarize(errors);
  CostOptions mc;
  mc.source = CostOptions::Source::kMarginalMonteCarlo;
  mc.replicates = 2000;
  const double predicted = OptError(prior, 200, 3, mc);
  MESSAGE("simulated " << sim.mean << " +- " << sim.standard_error
                       << ", closed form " << predicted);
  CHECK(std::abs(sim.mean - predicted) <= 3.0 * sim.standard_error);
}

TEST_CASE("zero-epsilon randomized response on singletons") {
  // With eps = 0 every prediction is uniform, so the singleton part of the
  // excess error is E[sum over singletons of D(x)] / 2 = tau_1 E[#single] / 2.
  const FrequencyPrior prior = ZipfPrior(150);
  const LabelPriorSpec labels = LabelPriorSpec::IidUniform(2);
  const Learner rr = Learner::RrLabelPrivate(labels, 0.0);
  std::vector<double> parts;
  for (Seed seed = 0; seed < 1500; ++seed) {
    const DiscreteInstance inst = SampleInstance(prior, labels, 150, seed);
    double part = 0.0;
    for (Point x : inst.dataset.PointsWithMultiplicity(1)) {
      const Pmf p = PredictionDistribution(rr, inst.dataset, x);
      part += inst.pmf[x] * (1.0 - p[inst.true_labels[x]]);
    }
    parts.push_back(part);
  }
  const MeanAndError sim = Summarize(parts);
  CostOptions mc;
  mc.source = CostOptions::Source::kMarginalMonteCarlo;
  mc.replicates = 2000;
  const double predicted = PrivacyCost(prior, 150, 2, 0.0, 0.0, 1.0, mc);
  MESSAGE("simulated " << sim.mean << " +- " << sim.standard_error
                       << ", closed form " << predicted);
  CHECK(std::abs(sim.mean - predicted) <= 3.0 * sim.standard_error);
}

TEST_CASE("disparity reports") {
  const FrequencyPrior small = ZipfPrior(5000);
  const std::vector<SubgroupSpec> by_size = {
      {"majority", small, 50000, 10, 5.0 / 6.0},
      {"minority", small, 10000, 10, 1.0 / 6.0},
  };
  const DisparityReport a =
      BuildDisparityReport(by_size, CostParameters::Memorization(0.5));
  CHECK(std::abs(a.rows[0].cost - 0.015) <= 0.002);
  CHECK(std::abs(a.rows[1].cost - 0.035) <= 0.002);
  CHECK(a.CostRatio(1, 0) > 2.0);
  CHECK(a.PopulationCost() ==
        doctest::Approx(5.0 / 6.0 * a.rows[0].cost + a.rows[1].cost / 6.0));

  const std::vector<SubgroupSpec> by_prior = {
      {"easy", small, 50000, 10, 0.5},
      {"hard", ZipfPrior(25000), 50000, 10, 0.5},
  };
  const DisparityReport b =
      BuildDisparityReport(by_prior, CostParameters::Privacy(std::log(6.0), 0));
  CHECK(std::abs(b.rows[0].cost - 0.015) <= 0.002);
  CHECK(std::abs(b.rows[1].cost - 0.031) <= 0.002);

  const std::vector<SubgroupSpec> same = {
      {"a", ZipfPrior(100), 100, 3, 0.5},
      {"b", ZipfPrior(100), 100, 3, 0.5},
  };
  const DisparityReport c =
      BuildDisparityReport(same, CostParameters::Memorization(0.2));
  CHECK(c.CostRatio(0, 1) == 1.0);
  for (const DisparityReport* r : {&a, &b, &c}) {
    for (const SubgroupResult& row : r->rows) {
      CHECK(row.opt >= 0.0);
      CHECK(row.opt <= 1.0);
      CHECK(row.cost >= 0.0);
      CHECK(row.cost <= 1.0);
    }
  }

  std::ostringstream csv;
  c.WriteCsv(csv);
  CHECK(csv.str().rfind("subgroup,opt,cost,params\na,", 0) == 0);
  CHECK(csv.str().find("gamma=0.20000000000000001;kappa=1") !=
        std::string::npos);
  std::ostringstream table;
  a.WriteTable(table);
  CHECK(table.str().find("minority") != std::string::npos);

  std::vector<SubgroupSpec> bad = same;
  bad[1].mixing_weight = 0.6;
  CHECK_THROWS_AS(BuildDisparityReport(bad, CostParameters::Memorization(0.2)),
                  InvalidArgument);
}

}  // namespace
}  // namespace tail_ledger
