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

#include <sstream>

#include "doctest.h"
#include "tail_ledger/status.h"
#include "test_support.h"

namespace tail_ledger {
namespace {

using testing::EnumeratedExpectation;
using testing::RandomPrior;

// Direct ratio in long double, for moderate n only.
double DirectTau(const FrequencySampleSet& s, int ell, int n) {
  long double num = 0.0L;
  long double den = 0.0L;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const long double a = s.value(i);
    const long double k = std::pow(a, static_cast<long double>(ell)) *
                          std::pow(1.0L - a, static_cast<long double>(n - ell));
    num += s.weight(i) * a * k;
    den += s.weight(i) * k;
  }
  return static_cast<double>(num / den);
}

TEST_CASE("tau of a degenerate sample set is 1/N") {
  const auto flat = ExactMarginal(UniformPrior(6), 6);
  for (int ell = 1; ell <= 5; ++ell) {
    CHECK(Tau(flat, ell, 5) == doctest::Approx(1.0 / 6).epsilon(1e-14));
  }
  CHECK(TauPlugIn(UniformPrior(40), 3, 100) ==
        doctest::Approx(1.0 / 40).epsilon(1e-14));
}

TEST_CASE("tau of the two-point prior") {
  const auto prior = FrequencyPrior::Create({0.75, 0.25}, "two");
  const auto m = ExactMarginal(prior, 2);
  // E[a^2] / E[a] over {0.25, 0.5, 0.75} with weights {1/4, 1/2, 1/4}.
  CHECK(Tau(m, 1, 1) == doctest::Approx(0.5625).epsilon(1e-14));
  const double oracle =
      static_cast<double>(EnumeratedExpectation(prior, 2, [](double a) {
        return a * a;
      }) / EnumeratedExpectation(prior, 2, [](double a) { return a; }));
  CHECK(Tau(m, 1, 1) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("tau matches the direct ratio on random exact marginals") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const auto prior = RandomPrior(rng, 1 + rng.Below(4));
    const std::size_t dom = 1 + rng.Below(4);
    const auto m = ExactMarginal(prior, dom);
    const int n = 1 + static_cast<int>(rng.Below(12));
    for (int ell = 1; ell <= n; ++ell) {
      double direct = 0.0;
      bool degenerate = false;
      try {
        const double t = Tau(m, ell, n);
        direct = DirectTau(m, ell, n);
        REQUIRE(t == doctest::Approx(direct).epsilon(1e-12));
        REQUIRE(t > 0.0);
        REQUIRE(t <= 1.0);
      } catch (const NumericDegeneracy&) {
        degenerate = true;
      }
      if (degenerate) {
        // Only possible when some alpha equals 1 and carries all the mass.
        REQUIRE(dom == 1);
      }
    }
  }
}

TEST_CASE("tau stays finite where naive powers underflow") {
  const auto prior = ZipfPrior(50000);
  const double t = TauPlugIn(prior, 1, 50000);
  CHECK(std::isfinite(t));
  CHECK(t > 0.0);
  // Reference by long-double direct summation over the prior entries.
  long double num = 0.0L;
  long double den = 0.0L;
  for (double p : prior.entries()) {
    const long double k = p * std::pow(1.0L - p, 49999.0L);
    num += p * k;
    den += k;
  }
  CHECK(t == doctest::Approx(static_cast<double>(num / den)).epsilon(1e-10));
  CHECK(TauPlugIn(prior, 40000, 50000) > 0.0);
}

TEST_CASE("tau argument checks") {
  const auto m = PlugInSamples(ZipfPrior(10));
  CHECK_THROWS_AS(Tau(m, 0, 5), InvalidArgument);
  CHECK_THROWS_AS(Tau(m, 6, 5), InvalidArgument);
  const auto one = FrequencySampleSet::Create({1.0}, {}, Provenance{});
  CHECK_THROWS_AS(Tau(one, 1, 3), NumericDegeneracy);
  CHECK(Tau(one, 3, 3) == 1.0);
}

TEST_CASE("plug-in and exact tau agree within ten percent") {
  const auto prior = FrequencyPrior::Create({0.4, 0.3, 0.2, 0.1}, "p4");
  const auto exact = ExactMarginal(prior, 4);
  for (int ell = 1; ell <= 3; ++ell) {
    const double a = Tau(exact, ell, 3);
    const double b = TauPlugIn(prior, ell, 3);
    CHECK(std::abs(a - b) <= 0.1 * a);
  }
}

TEST_CASE("weight") {
  const auto zipf = ZipfPrior(50000);
  const auto plug = PlugInSamples(zipf);
  CHECK(Weight(plug, 0.0, 1.0, 50000) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Weight(plug, 0.5, 0.5, 50000) == 0.0);
  CHECK_THROWS_AS(Weight(plug, 0.5, 0.4, 10), InvalidArgument);
  CHECK_THROWS_AS(Weight(plug, -0.1, 0.4, 10), InvalidArgument);
  CHECK(PriorWeight(zipf, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  // Monotone in the interval.
  Rng rng(8);
  const auto mc = MarginalSamples(ZipfPrior(300), 300, 20, 4);
  for (int i = 0; i < 200; ++i) {
    double a = rng.Uniform() * 0.05;
    double b = rng.Uniform() * 0.05;
    if (a > b) std::swap(a, b);
    const double inner = Weight(mc, a, b, 300);
    const double outer = Weight(mc, a * 0.5, std::min(1.0, b * 2.0), 300);
    REQUIRE(inner <= outer + 1e-15);
    REQUIRE(inner >= 0.0);
    REQUIRE(outer <= 1.0 + 1e-12);
  }
}

TEST_CASE("singleton expectation") {
  // Degenerate marginal: n (1 - 1/N)^(n-1) singletons.
  const auto flat = PlugInSamples(UniformPrior(100));
  CHECK(SingletonExpectation(flat, 50, 100) ==
        doctest::Approx(50 * std::pow(0.99, 49)).epsilon(1e-12));
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto prior = testing::RandomTailPrior(rng, 50, 400);
    const auto s = PlugInSamples(prior);
    const std::uint64_t n = 1 + rng.Below(2000);
    const double e = SingletonExpectation(s, n, prior.size());
    REQUIRE(e >= 0.0);
    REQUIRE(e <= static_cast<double>(n) * (1 + 1e-12));
    double direct = 0.0;
    for (double p : prior.entries()) {
      direct += n * p * std::pow(1.0 - p, static_cast<double>(n - 1));
    }
    REQUIRE(e == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("tau_1 lower bound holds on random long-tailed priors") {
  Rng rng(77);
  int nontrivial = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const auto prior = testing::RandomTailPrior(rng, 200, 3000);
    const auto mc = MarginalSamples(prior, prior.size(), 20, 1000 + trial);
    const double bound = Tau1LowerBound(mc, 1000, prior.size());
    const double tau1 = Tau(mc, 1, 1000);
    REQUIRE(bound <= tau1);
    if (bound > 0.0) ++nontrivial;
  }
  CHECK(nontrivial > 5);
  CHECK_THROWS_AS(Tau1LowerBound(PlugInSamples(ZipfPrior(10)), 99, 10),
                  InvalidArgument);
  CHECK_THROWS_AS(Tau1LowerBoundFromPrior(ZipfPrior(10), 1000),
                  InvalidArgument);
  const auto flat = UniformPrior(1500);
  CHECK(Tau1LowerBoundFromPrior(flat, 1000) ==
        doctest::Approx(1.0 / 7000.0).epsilon(1e-12));
  CHECK(Tau1LowerBoundFromPrior(flat, 1000) <= TauPlugIn(flat, 1, 1000));
}

TEST_CASE("no-middle upper bound on gap priors") {
  Rng rng(123);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t heavy = 2 + rng.Below(9);
    const double light = 0.02 + 0.18 * rng.Uniform();
    const auto prior = testing::GapPrior(5000, heavy, light);
    const std::uint64_t n = rng.Bernoulli(0.5) ? 500 : 1000;
    const double theta = 1.0 / (2.0 * n);
    const auto mc = MarginalSamples(prior, 5000, 10, 50 + trial);
    NoMiddleBound b;
    REQUIRE_NOTHROW(b = Tau1NoMiddleUpper(mc, n, theta, 5000));
    CHECK(b.bound == 2 * theta);
    CHECK(b.t == doctest::Approx(std::log(1 / (theta * b.beta)) + 2));
    CHECK(Tau(mc, 1, n) <= b.bound);
  }
}

TEST_CASE("no-middle detects a populated middle band") {
  const auto zipf = MarginalSamples(ZipfPrior(2000), 2000, 5, 1);
  CHECK_THROWS_AS(Tau1NoMiddleUpper(zipf, 1000, 1.0 / 2000, 2000),
                  GapConditionUnsatisfied);
  const auto big = FrequencySampleSet::Create({0.5, 0.5}, {}, Provenance{});
  CHECK_THROWS_AS(Tau1NoMiddleUpper(big, 100, 1.0 / 400, 2),
                  GapConditionUnsatisfied);
  CHECK_THROWS_AS(Tau1NoMiddleUpper(big, 100, 0.01, 2), InvalidArgument);
}

TEST_CASE("relate-priors check") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto prior = testing::RandomTailPrior(rng, 400, 2000);
    if (prior.max_entry() > 1.0 / 200) continue;
    const double lo = 0.2 / prior.size();
    const double hi = 5.0 / prior.size();
    const auto r = RelatePriorsCheck(prior, lo, hi, 0.25, 40, trial);
    CHECK(r.delta >= 0.0);
    CHECK(r.lhs >= r.rhs);
  }
  // Flat prior: every alpha is 1/N and delta vanishes.
  const auto flat = UniformPrior(1000);
  const auto r = RelatePriorsCheck(flat, 0.5e-3, 2e-3, 0.25, 5, 1);
  CHECK(r.lhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.delta < 1e-100);
  CHECK(r.rhs <= r.lhs);
}

TEST_CASE("tail report") {
  const auto prior = FrequencyPrior::Create({0.75, 0.25}, "two");
  const auto m = ExactMarginal(prior, 2);
  const auto report = BuildTailReport(m, 1, 2, {1}, {{0.0, 1.0}, {0.3, 0.6}});
  std::ostringstream out;
  report.WriteCsv(out);
  std::istringstream in(out.str());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "quantity,ell_or_interval,value,method");
  auto value_of = [&](std::size_t i, const std::string& prefix) {
    REQUIRE(lines[i].rfind(prefix, 0) == 0);
    const auto end = lines[i].rfind(',');
    CHECK(lines[i].substr(end + 1) == "pihat-exact");
    return std::stod(lines[i].substr(prefix.size(), end - prefix.size()));
  };
  CHECK(value_of(1, "tau,1,") == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(value_of(2, "singleton_expectation,,") ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(value_of(3, "weight,[0;1],") == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(value_of(4, "weight,[0.29999999999999999;0.59999999999999998],") ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(ExcessErrorBound(report, {{1, 0.5}}) == doctest::Approx(0.28125));
  CHECK_THROWS_AS(ExcessErrorBound(report, {{2, 0.5}}), InvalidArgument);
  CHECK_THROWS_AS(ExcessErrorBound(report, {{1, -0.5}}), InvalidArgument);
}

}  // namespace
}  // namespace tail_ledger
