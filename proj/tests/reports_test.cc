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

#include "tail_ledger/reports.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "tail_ledger/discrete_model.h"
#include "tail_ledger/learners.h"
#include "tail_ledger/prior_model.h"
#include "tail_ledger/privacy_disparity.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace tail_ledger {
namespace {

std::string RunToString(const RunConfig& c, int expected_status = 0) {
  std::ostringstream out;
  CHECK(Run(c, out) == expected_status);
  return out.str();
}

RunConfig Config(const std::string& experiment) {
  RunConfig c;
  c.experiment = experiment;
  return c;
}

TEST_CASE("tau output equals the module report") {
  RunConfig c = Config("tau");
  c.prior = "zipf:300";
  c.n = 250;
  c.ells = {1, 2, 5};
  c.mc = 30;
  c.seed = 99;
  const FrequencyPrior prior = ZipfPrior(300);
  std::ostringstream direct;
  BuildTailReport(MarginalSamples(prior, 300, 30, 99), 250, 300, {1, 2, 5}, {})
      .WriteCsv(direct);
  CHECK(RunToString(c) == direct.str());

  c.method = "plug-in";
  std::ostringstream plug;
  BuildTailReport(PlugInSamples(prior), 250, 300, {1, 2, 5}, {})
      .WriteCsv(plug);
  CHECK(RunToString(c) == plug.str());
}

TEST_CASE("weight and singleton outputs equal the module reports") {
  RunConfig c = Config("weight");
  c.prior = "zipf:4";
  c.n = 3;
  c.method = "exact";
  c.intervals = {{0.0, 0.2}, {0.1, 1.0}};
  const FrequencySampleSet exact = ExactMarginal(ZipfPrior(4), 4);
  std::ostringstream direct;
  BuildTailReport(exact, 3, 4, {}, c.intervals).WriteCsv(direct);
  CHECK(RunToString(c) == direct.str());

  c.experiment = "singletons";
  std::ostringstream single;
  BuildTailReport(exact, 3, 4, {}, {}).WriteCsv(single);
  CHECK(RunToString(c) == single.str());
}

TEST_CASE("simulate output equals the module metric report") {
  RunConfig c = Config("simulate");
  c.prior = "zipf:20";
  c.n = 15;
  c.m = 3;
  c.kappa = 0.8;
  c.learner = "rr:1.5";
  c.seed = 5;
  const LabelPriorSpec labels = LabelPriorSpec::IidUniform(3, 0.8);
  const DiscreteInstance inst = SampleInstance(ZipfPrior(20), labels, 15, 5);
  std::ostringstream direct;
  BuildMetricReport(Learner::RrLabelPrivate(labels, 1.5), inst, labels)
      .WriteCsv(direct);
  CHECK(RunToString(c) == direct.str());

  c.format = "json";
  const std::string json = RunToString(c);
  CHECK(json.find("\"instance\"") != std::string::npos);
  CHECK(json.find("\"loostab\"") != std::string::npos);
}

TEST_CASE("disparity output equals the module report") {
  RunConfig c = Config("disparity");
  c.subgroups = {{"a", "zipf:500", 800, 10, 0.25},
                 {"b", "zipf:900", 400, 10, 0.75}};
  c.cost = "privacy";
  c.epsilon = 0.5;
  c.delta = 0.1;
  const DisparityReport direct = BuildDisparityReport(
      {{"a", ZipfPrior(500), 800, 10, 0.25},
       {"b", ZipfPrior(900), 400, 10, 0.75}},
      CostParameters::Privacy(0.5, 0.1));
  std::ostringstream csv;
  direct.WriteCsv(csv);
  CHECK(RunToString(c) == csv.str());
  c.format = "table";
  std::ostringstream table;
  direct.WriteTable(table);
  CHECK(RunToString(c) == table.str());
}

TEST_CASE("coupling rows are deterministic") {
  RunConfig c = Config("coupling");
  c.prior = "zipf:8";
  c.n = 8;
  c.dimension = 64;
  c.instances = 2;
  c.fresh = 3;
  const std::string a = RunToString(c);
  const std::string b = RunToString(c);
  CHECK(a == b);
  CHECK(a.rfind("instance,tau_measured,theta_measured,theta_required,"
                "certified,reference_margin,trained_margin,lambda_1\n",
                0) == 0);
}

TEST_CASE("config parsing rejects unknown keys and bad types") {
  CHECK_THROWS_WITH_AS(ParseRunConfigJson(R"({"experiment":"tau","nn":3})"),
                       doctest::Contains("'nn': unknown key"),
                       InvalidArgument);
  CHECK_THROWS_WITH_AS(ParseRunConfigJson(R"({"n":-3})"),
                       doctest::Contains("'n'"), InvalidArgument);
  CHECK_THROWS_WITH_AS(ParseRunConfigJson(R"({"n":"three"})"),
                       doctest::Contains("non-negative integer"),
                       InvalidArgument);
  CHECK_THROWS_AS(ParseRunConfigJson("{not json"), InvalidArgument);
  CHECK_THROWS_WITH_AS(
      ParseRunConfigJson(R"({"subgroups":[{"name":"a","size":3}]})"),
      doctest::Contains("subgroups[0].size"), InvalidArgument);
  const RunConfig weights = ParseRunConfigJson(
      R"({"subgroups":[{"name":"a","prior":"zipf:5","n":5,"m":3,"weight":"5/6"}]})");
  CHECK(weights.subgroups[0].weight == doctest::Approx(5.0 / 6.0));
}

TEST_CASE("config json round-trips") {
  RunConfig c = Config("disparity");
  c.ells = {1, 3};
  c.intervals = {{0.0, 0.5}};
  c.subgroups = {{"x", "zipf:10", 10, 3, 1.0}};
  c.seed = 18446744073709551615ULL;
  const std::string text = RunConfigToJson(c);
  CHECK(RunConfigToJson(ParseRunConfigJson(text)) == text);
}

TEST_CASE("validation names the field and the constraint") {
  RunConfig c = Config("tau");
  c.m = 1;
  CHECK_THROWS_WITH_AS(ValidateRunConfig(c),
                       doctest::Contains("'m': must be >= 2"),
                       InvalidArgument);
  c = Config("walk");
  CHECK_THROWS_WITH_AS(ValidateRunConfig(c), doctest::Contains("experiment"),
                       InvalidArgument);
  c = Config("disparity");
  c.subgroups = {{"a", "zipf:5", 5, 3, 0.4}};
  CHECK_THROWS_WITH_AS(ValidateRunConfig(c),
                       doctest::Contains("weights must sum to 1"),
                       InvalidArgument);
  c = Config("tau");
  c.format = "table";
  CHECK_THROWS_AS(ValidateRunConfig(c), InvalidArgument);
  c = Config("tau");
  c.kappa = 2.0;
  CHECK_THROWS_WITH_AS(ValidateRunConfig(c), doctest::Contains("kappa"),
                       InvalidArgument);
}

TEST_CASE("exit codes by error class") {
  CHECK(ExitCodeFor(InvalidArgument("x")) == 1);
  CHECK(ExitCodeFor(ResourceLimit("x")) == 1);
  CHECK(ExitCodeFor(NumericDegeneracy("x")) == 2);
  CHECK(ExitCodeFor(SeparationFailure("x")) == 2);
}

TEST_CASE("reports go to the output file when one is given") {
  RunConfig c = Config("singletons");
  c.prior = "zipf:10";
  c.n = 10;
  c.method = "plug-in";
  const std::string expected = RunToString(c);
  c.output = "reports_test_output.csv";
  CHECK(RunToString(c).empty());
  std::ifstream in(c.output);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str() == expected);
  std::remove(c.output.c_str());
}

TEST_CASE("claim rows and cost table") {
  const std::vector<ClaimRow> rows = CostTableClaims();
  CHECK(rows.size() == 9);
  for (const ClaimRow& r : rows) CHECK(r.pass);
  std::ostringstream table;
  WriteClaimTable(rows, table);
  CHECK(table.str().find("opt_N5000_n50000") != std::string::npos);
  std::ostringstream csv;
  WriteClaimCsv(rows, csv);
  CHECK(csv.str().rfind("claim,reference_value,computed,method,tolerance,pass\n",
                        0) == 0);
}

}  // namespace
}  // namespace tail_ledger
