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

// Configuration-driven experiment runner behind the command-line tool, and
// the table of published numeric claims with their recomputed values.

#ifndef TAIL_LEDGER_REPORTS_H_
#define TAIL_LEDGER_REPORTS_H_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tail_ledger/random.h"

namespace tail_ledger {

inline constexpr Seed kDefaultSeed = 7;

struct SubgroupConfig {
  std::string name;
  std::string prior;
  std::uint64_t n = 0;
  std::size_t m = 10;
  double weight = 0.0;
};

struct RunConfig {
  // tau | weight | singletons | simulate | coupling | disparity | reproduce
  std::string experiment;
  std::string prior = "zipf:1000";
  std::uint64_t n = 1000;
  // 0 means the prior's size.
  std::size_t domain_size = 0;
  std::size_t m = 2;
  double kappa = 1.0;
  double gamma = 0.5;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<std::uint64_t> ells = {1};
  std::vector<std::pair<double, double>> intervals;
  // mc | exact | plug-in; empty picks the experiment's default (mc for tail
  // statistics, plug-in for disparity).
  std::string method;
  std::uint64_t mc = 200;
  Seed seed = kDefaultSeed;
  std::string learner = "memorizer";
  // Mixture experiments.
  std::size_t dimension = 10000;
  std::uint64_t instances = 1;
  std::size_t fresh = 10;
  double radius = 1.0;
  double tolerance = 0.05;
  std::string geometry;  // geometry CSV path for the first instance
  // Disparity experiments.
  std::vector<SubgroupConfig> subgroups;
  std::string cost = "memorization";  // memorization | privacy
  // Output; empty path means standard output.
  std::string output;
  // csv | json | table; empty means table for reproduce, csv otherwise.
  std::string format;
};

// Parses a JSON object; every key must be a RunConfig field. Throws
// InvalidArgument naming the offending key.
RunConfig ParseRunConfigJson(const std::string& text);
// Canonical JSON form with every field present.
std::string RunConfigToJson(const RunConfig& config);

// Throws InvalidArgument naming the field and the violated constraint.
void ValidateRunConfig(const RunConfig& config);

// Validates, runs the experiment and writes its report to `out`. Returns the
// process exit status (0, or 3 when a reproduce row fails).
int Run(const RunConfig& config, std::ostream& out);

// 1 for validation errors, 2 for numeric failures, 1 for anything else.
int ExitCodeFor(const std::exception& error);

struct ClaimRow {
  std::string id;
  double reference_value = 0.0;
  double computed = 0.0;
  std::string method;
  double tolerance = 0.0;
  bool pass = false;
};

// Expected loss, singleton fraction and worst-case per-point loss for the
// Zipf prior with N = n = 50000.
std::vector<ClaimRow> ZipfTailClaims(Seed seed);
// Memorizer error and the excess of guessing on singletons, binary labels.
std::vector<ClaimRow> BinaryExampleClaims(Seed seed);
// Per-subgroup optimum and cost cells and the privacy / memorization-limit
// identity at eps = ln 6.
std::vector<ClaimRow> CostTableClaims();
std::vector<ClaimRow> ReproduceClaims(Seed seed);

void WriteClaimTable(const std::vector<ClaimRow>& rows, std::ostream& out);
void WriteClaimCsv(const std::vector<ClaimRow>& rows, std::ostream& out);

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_REPORTS_H_
