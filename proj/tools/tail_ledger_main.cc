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

// Command-line front end. Every subcommand fills a RunConfig (from --config
// and flags, flags winning) and hands it to tail_ledger::Run.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tail_ledger/reports.h"
#include "tail_ledger/status.h"

namespace {

using tail_ledger::InvalidArgument;
using tail_ledger::RunConfig;
using tail_ledger::SubgroupConfig;

struct Flags {
  std::string config_path;
  bool print_config = false;
  RunConfig values;
  std::vector<std::string> intervals;
  std::vector<std::string> subgroups;
  std::vector<std::uint64_t> ells;
};

void AddOptions(CLI::App* sub, Flags& f) {
  RunConfig& v = f.values;
  sub->add_option("--config", f.config_path, "JSON run configuration");
  sub->add_flag("--print-config", f.print_config,
                "print the effective configuration as JSON and exit");
  sub->add_option("--prior", v.prior, "zipf:N, uniform:N or a prior file");
  sub->add_option("--n", v.n, "dataset size");
  sub->add_option("--N", v.domain_size, "domain size (default: prior size)");
  sub->add_option("--m", v.m, "number of classes");
  sub->add_option("--kappa", v.kappa, "label noise parameter");
  sub->add_option("--gamma", v.gamma, "memorization limit");
  sub->add_option("--eps", v.epsilon, "privacy epsilon");
  sub->add_option("--delta", v.delta, "privacy delta");
  sub->add_option("--ell", f.ells, "multiplicities (repeatable)");
  sub->add_option("--interval", f.intervals, "frequency interval lo:hi");
  sub->add_option("--method", v.method, "mc, exact or plug-in");
  sub->add_option("--mc", v.mc, "Monte Carlo replicates");
  sub->add_option("--seed", v.seed, "64-bit seed");
  sub->add_option("--learner", v.learner,
                  "memorizer, no-fit, gamma-limited:G, rr:EPS[:DELTA], "
                  "fit-at-least:K");
  sub->add_option("--d", v.dimension, "mixture dimension");
  sub->add_option("--instances", v.instances, "mixture instances");
  sub->add_option("--fresh", v.fresh, "fresh draws per subpopulation");
  sub->add_option("--radius", v.radius, "offset radius bound");
  sub->add_option("--tolerance", v.tolerance, "max-margin tolerance");
  sub->add_option("--geometry", v.geometry, "geometry CSV path");
  sub->add_option("--subgroup", f.subgroups,
                  "NAME=PRIOR,n,m,WEIGHT (repeatable; WEIGHT may be a/b)");
  sub->add_option("--cost", v.cost, "memorization or privacy");
  sub->add_option("--output", v.output, "output path (default: stdout)");
  sub->add_option("--format", v.format, "csv, json or table");
}

std::pair<double, double> ParseInterval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidArgument("--interval expects lo:hi, got '" + text + "'");
  }
  try {
    std::size_t a = 0, b = 0;
    const std::string lo = text.substr(0, colon);
    const std::string hi = text.substr(colon + 1);
    const double x = std::stod(lo, &a);
    const double y = std::stod(hi, &b);
    if (a != lo.size() || b != hi.size()) throw std::invalid_argument(text);
    return {x, y};
  } catch (const std::logic_error&) {
    throw InvalidArgument("--interval expects lo:hi, got '" + text + "'");
  }
}

// NAME=PRIOR,n,m,WEIGHT, parsed through the JSON path so both share checks.
SubgroupConfig ParseSubgroupFlag(const std::string& text) {
  const auto eq = text.find('=');
  std::vector<std::string> parts;
  if (eq != std::string::npos) {
    std::stringstream rest(text.substr(eq + 1));
    std::string item;
    while (std::getline(rest, item, ',')) parts.push_back(item);
  }
  if (eq == std::string::npos || parts.size() != 4) {
    throw InvalidArgument("--subgroup expects NAME=PRIOR,n,m,WEIGHT, got '" +
                          text + "'");
  }
  std::ostringstream json;
  json << R"({"subgroups":[{"name":")" << text.substr(0, eq)
       << R"(","prior":")" << parts[0] << R"(","n":)" << parts[1]
       << R"(,"m":)" << parts[2] << R"(,"weight":")" << parts[3] << "\"}]}";
  return tail_ledger::ParseRunConfigJson(json.str()).subgroups.front();
}

RunConfig Effective(const CLI::App* sub, const Flags& f) {
  RunConfig c;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      throw InvalidArgument("cannot read config file '" + f.config_path + "'");
    }
    std::stringstream text;
    text << in.rdbuf();
    c = tail_ledger::ParseRunConfigJson(text.str());
  }
  c.experiment = sub->get_name();
  const RunConfig& v = f.values;
  auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--prior")) c.prior = v.prior;
  if (given("--n")) c.n = v.n;
  if (given("--N")) c.domain_size = v.domain_size;
  if (given("--m")) c.m = v.m;
  if (given("--kappa")) c.kappa = v.kappa;
  if (given("--gamma")) c.gamma = v.gamma;
  if (given("--eps")) c.epsilon = v.epsilon;
  if (given("--delta")) c.delta = v.delta;
  if (given("--ell")) c.ells = f.ells;
  if (given("--interval")) {
    c.intervals.clear();
    for (const std::string& s : f.intervals) {
      c.intervals.push_back(ParseInterval(s));
    }
  }
  if (given("--method")) c.method = v.method;
  if (given("--mc")) c.mc = v.mc;
  if (given("--seed")) c.seed = v.seed;
  if (given("--learner")) c.learner = v.learner;
  if (given("--d")) c.dimension = v.dimension;
  if (given("--instances")) c.instances = v.instances;
  if (given("--fresh")) c.fresh = v.fresh;
  if (given("--radius")) c.radius = v.radius;
  if (given("--tolerance")) c.tolerance = v.tolerance;
  if (given("--geometry")) c.geometry = v.geometry;
  if (given("--subgroup")) {
    c.subgroups.clear();
    for (const std::string& s : f.subgroups) {
      c.subgroups.push_back(ParseSubgroupFlag(s));
    }
  }
  if (given("--cost")) c.cost = v.cost;
  if (given("--output")) c.output = v.output;
  if (given("--format")) c.format = v.format;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tail statistics, memorization costs and coupling experiments"};
  app.require_subcommand(1);
  Flags flags;
  const char* kCommands[][2] = {
      {"tau", "per-multiplicity excess-error rates"},
      {"weight", "interval weights of the frequency marginal"},
      {"singletons", "expected number of singletons"},
      {"simulate", "sample an instance and score a learner"},
      {"coupling", "mixture certificates, margins and coupling"},
      {"disparity", "per-subgroup optimum and cost"},
      {"reproduce", "recompute the published numbers"},
  };
  for (const auto& [name, help] : kCommands) {
    AddOptions(app.add_subcommand(name, help), flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    const CLI::App* sub = app.get_subcommands().front();
    const RunConfig config = Effective(sub, flags);
    if (flags.print_config) {
      std::cout << tail_ledger::RunConfigToJson(config) << '\n';
      return 0;
    }
    return tail_ledger::Run(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return tail_ledger::ExitCodeFor(e);
  }
}
