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

#include <cstdlib>
#include <sstream>

#include "doctest.h"
#include "tail_ledger/status.h"
#include "test_support.h"

namespace tail_ledger {
namespace {

using testing::EnumeratedExpectation;
using testing::RandomPrior;
using testing::SampleExpectation;

TEST_CASE("zipf entries") {
  CHECK(ZipfPrior(1).entries() == std::vector<double>{1.0});
  const auto two = ZipfPrior(2).entries();
  CHECK(two[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK_THROWS_AS(ZipfPrior(0), InvalidArgument);

  const FrequencyPrior big = ZipfPrior(50000);
  double harmonic = 0.0;
  for (int j = 50000; j >= 1; --j) harmonic += 1.0 / j;
  CHECK(big.entries().back() ==
        doctest::Approx(1.0 / (50000 * harmonic)).epsilon(1e-12));
  CHECK(big.entries().back() == doctest::Approx(1.755e-6).epsilon(1e-3));
  for (std::size_t i = 1; i < big.size(); ++i) {
    REQUIRE(big.entries()[i] < big.entries()[i - 1]);
  }
}

TEST_CASE("prior validation") {
  CHECK_THROWS_AS(FrequencyPrior::Create({}, "e"), InvalidArgument);
  CHECK_THROWS_AS(FrequencyPrior::Create({0.5, 0.6}, "s"), InvalidArgument);
  CHECK_THROWS_AS(FrequencyPrior::Create({1.0, 0.0}, "z"), InvalidArgument);
  const auto p = FrequencyPrior::Create({0.5, 0.25, 0.25}, "p");
  CHECK(p.max_entry() == 0.5);
  const double third = 1.0 / 3.0;
  const double var = ((0.5 - third) * (0.5 - third) +
                      2 * (0.25 - third) * (0.25 - third)) / 3.0;
  CHECK(p.variance() == doctest::Approx(var).epsilon(1e-14));
}

TEST_CASE("prior file parsing") {
  std::istringstream ok("# header\n0.5\n\n0.3\n0.2000004\n");
  const auto p = ParsePrior(ok, "ok");
  CHECK(p.size() == 3);
  double total = 0.0;
  for (double e : p.entries()) total += e;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

  std::istringstream off("0.5\n0.3\n0.1\n");
  CHECK_THROWS_AS(ParsePrior(off, "off"), InvalidArgument);
  std::istringstream junk("0.5\nabc\n");
  try {
    ParsePrior(junk, "junk");
    FAIL("expected a parse error");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(PriorFromSpec("uniform:4").entries() ==
        std::vector<double>(4, 0.25));
  CHECK(PriorFromSpec("zipf:3").size() == 3);
  CHECK_THROWS_AS(PriorFromSpec("zipf:x"), InvalidArgument);
}

TEST_CASE("sample frequency vector") {
  const auto prior = ZipfPrior(7);
  CHECK(SampleFrequencyVector(prior, 1, Seed{3}) == std::vector<double>{1.0});
  Rng rng(11);
  for (int r = 0; r < 200; ++r) {
    const auto pmf = SampleFrequencyVector(prior, 1 + r % 9, rng);
    double total = 0.0;
    for (double v : pmf) total += v;
    REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  // E[D(x0)] = 1/N by exchangeability.
  const auto zipf100 = ZipfPrior(100);
  std::vector<double> first;
  for (int r = 0; r < 100000; ++r) {
    first.push_back(SampleFrequencyVector(zipf100, 100, DeriveSeed(5, r))[0]);
  }
  const auto s = testing::Summarize(first);
  CHECK(std::abs(s.mean - 0.01) <= 3.0 * s.standard_error);
}

TEST_CASE("exact marginal of the two-point prior") {
  const auto prior = FrequencyPrior::Create({0.75, 0.25}, "two");
  const auto m = ExactMarginal(prior, 2);
  REQUIRE(m.size() == 3);
  CHECK(m.value(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.value(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.value(2) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.weight(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.weight(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.weight(2) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(m.MethodName() == "pihat-exact");

  const auto flat = ExactMarginal(UniformPrior(5), 4);
  REQUIRE(flat.size() == 1);
  CHECK(flat.value(0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(flat.weight(0) == 1.0);
}

TEST_CASE("exact marginal matches an independent enumeration") {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const auto prior = RandomPrior(rng, 1 + rng.Below(4));
    const std::size_t n_dom = 1 + rng.Below(4);
    const auto m = ExactMarginal(prior, n_dom);
    double wsum = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) wsum += m.weight(i);
    REQUIRE(wsum == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(std::abs(m.Mean() - 1.0 / n_dom) <= 1e-12);
    for (double k : {2.0, 3.0, 0.5}) {
      const double lib = SampleExpectation(m, [k](double a) {
        return std::pow(a, k);
      });
      const double oracle = static_cast<double>(EnumeratedExpectation(
          prior, n_dom, [k](double a) { return std::pow(a, k); }));
      REQUIRE(lib == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact marginal budget") {
  CHECK_THROWS_AS(ExactMarginal(ZipfPrior(10), 8), ResourceLimit);
  try {
    ExactMarginal(ZipfPrior(10), 8);
  } catch (const ResourceLimit& e) {
    CHECK(std::string(e.what()).find("10000000") != std::string::npos);
  }
}

TEST_CASE("monte carlo marginal agrees with the exact one") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const auto prior = RandomPrior(rng, 2 + rng.Below(3));
    const std::size_t n_dom = 1 + rng.Below(4);
    const auto exact = ExactMarginal(prior, n_dom);
    const auto mc = MarginalSamples(prior, n_dom, 20000, 17 + trial);
    CHECK(mc.MethodName() == "pihat-mc");
    CHECK(mc.size() == 20000 * n_dom);
    // Per-replicate means of a^2 give an honest standard error despite the
    // correlation between pooled coordinates.
    std::vector<double> per_rep(20000, 0.0);
    for (std::size_t r = 0; r < 20000; ++r) {
      for (std::size_t c = 0; c < n_dom; ++c) {
        const double a = mc.value(r * n_dom + c);
        per_rep[r] += a * a / n_dom;
      }
    }
    const auto s = testing::Summarize(per_rep);
    const double exact2 =
        SampleExpectation(exact, [](double a) { return a * a; });
    CHECK(std::abs(s.mean - exact2) <= 4.0 * s.standard_error + 1e-15);
    CHECK(std::abs(mc.Mean() - 1.0 / n_dom) <= 1e-12);
  }
}

TEST_CASE("degenerate prior gives constant samples") {
  const auto mc = MarginalSamples(UniformPrior(8), 8, 10, 1);
  for (double v : mc.values()) CHECK(v == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("monte carlo output does not depend on the thread count") {
  const auto prior = ZipfPrior(500);
  setenv("TAIL_LEDGER_THREADS", "1", 1);
  const auto one = MarginalSamples(prior, 500, 37, 7);
  setenv("TAIL_LEDGER_THREADS", "5", 1);
  const auto five = MarginalSamples(prior, 500, 37, 7);
  unsetenv("TAIL_LEDGER_THREADS");
  CHECK(one.values() == five.values());
}

TEST_CASE("sample set csv") {
  const auto s = FrequencySampleSet::Create({0.5, 0.25}, {0.75, 0.25},
                                            Provenance{});
  std::ostringstream out;
  s.WriteCsv(out);
  CHECK(out.str() == "alpha,weight\n0.5,0.75\n0.25,0.25\n");
  CHECK_THROWS_AS(FrequencySampleSet::Create({0.5}, {0.9}, Provenance{}),
                  InvalidArgument);
  CHECK_THROWS_AS(FrequencySampleSet::Create({1.5}, {}, Provenance{}),
                  InvalidArgument);
}

}  // namespace
}  // namespace tail_ledger
