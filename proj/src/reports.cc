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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "tail_ledger/discrete_model.h"
#include "tail_ledger/learners.h"
#include "tail_ledger/mixture_coupling.h"
#include "tail_ledger/parallel.h"
#include "tail_ledger/prior_model.h"
#include "tail_ledger/privacy_disparity.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace tail_ledger {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void Invalid(const std::string& field, const std::string& what) {
  throw InvalidArgument("config field '" + field + "': " + what);
}

template <typename T>
T GetUnsigned(const Json& value, const std::string& field) {
  if (!value.is_number_unsigned()) {
    Invalid(field, "must be a non-negative integer");
  }
  const auto v = value.get<std::uint64_t>();
  if (v > std::numeric_limits<T>::max()) Invalid(field, "is out of range");
  return static_cast<T>(v);
}

double GetNumber(const Json& value, const std::string& field) {
  if (!value.is_number()) Invalid(field, "must be a number");
  return value.get<double>();
}

std::string GetString(const Json& value, const std::string& field) {
  if (!value.is_string()) Invalid(field, "must be a string");
  return value.get<std::string>();
}

// "0.25" or "5/6".
double ParseFraction(const std::string& text, const std::string& field) {
  const auto slash = text.find('/');
  auto parse = [&](const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      Invalid(field, "'" + text + "' is not a number or fraction");
    }
    return v;
  };
  if (slash == std::string::npos) return parse(text);
  const double den = parse(text.substr(slash + 1));
  if (den == 0.0) Invalid(field, "zero denominator in '" + text + "'");
  return parse(text.substr(0, slash)) / den;
}

SubgroupConfig ParseSubgroup(const Json& value, std::size_t index) {
  const std::string base = "subgroups[" + std::to_string(index) + "]";
  if (!value.is_object()) Invalid(base, "must be an object");
  SubgroupConfig g;
  for (const auto& [key, item] : value.items()) {
    const std::string field = base + "." + key;
    if (key == "name") {
      g.name = GetString(item, field);
    } else if (key == "prior") {
      g.prior = GetString(item, field);
    } else if (key == "n") {
      g.n = GetUnsigned<std::uint64_t>(item, field);
    } else if (key == "m") {
      g.m = GetUnsigned<std::size_t>(item, field);
    } else if (key == "weight") {
      g.weight = item.is_string() ? ParseFraction(item.get<std::string>(), field)
                                  : GetNumber(item, field);
    } else {
      Invalid(field, "unknown key");
    }
  }
  return g;
}

FrequencySampleSet SamplesFor(const RunConfig& c, const FrequencyPrior& prior,
                              std::size_t domain) {
  if (c.method == "exact") return ExactMarginal(prior, domain);
  if (c.method == "plug-in") return PlugInSamples(prior);
  return MarginalSamples(prior, domain, c.mc, c.seed);
}

std::string MethodOrDefault(const RunConfig& c) {
  if (!c.method.empty()) return c.method;
  return c.experiment == "disparity" ? "plug-in" : "mc";
}

std::string FormatOrDefault(const RunConfig& c) {
  if (!c.format.empty()) return c.format;
  return c.experiment == "reproduce" ? "table" : "csv";
}

Json TailReportJson(const TailReport& r) {
  Json out;
  out["n"] = r.n;
  out["N"] = r.domain_size;
  out["method"] = r.method;
  Json tau = Json::object();
  for (const auto& [ell, value] : r.tau) tau[std::to_string(ell)] = value;
  out["tau"] = tau;
  out["singleton_expectation"] = r.singleton_expectation;
  Json weights = Json::array();
  for (const auto& w : r.weights) {
    weights.push_back({{"lo", w.lo}, {"hi", w.hi}, {"value", w.value}});
  }
  out["weights"] = weights;
  return out;
}

int RunTail(const RunConfig& c, std::ostream& out) {
  const FrequencyPrior prior = PriorFromSpec(c.prior);
  const std::size_t domain = c.domain_size == 0 ? prior.size() : c.domain_size;
  const FrequencySampleSet samples = SamplesFor(c, prior, domain);
  std::vector<std::uint64_t> ells;
  std::vector<std::pair<double, double>> intervals;
  if (c.experiment == "tau") ells = c.ells;
  if (c.experiment == "weight") intervals = c.intervals;
  const TailReport report =
      BuildTailReport(samples, c.n, domain, ells, intervals);
  if (c.format == "json") {
    out << TailReportJson(report).dump(2) << '\n';
  } else {
    report.WriteCsv(out);
  }
  return 0;
}

int RunSimulate(const RunConfig& c, std::ostream& out) {
  const FrequencyPrior prior = PriorFromSpec(c.prior);
  const LabelPriorSpec labels = LabelPriorSpec::IidUniform(c.m, c.kappa);
  const Learner learner = ParseLearner(c.learner, labels);
  const DiscreteInstance instance = SampleInstance(prior, labels, c.n, c.seed);
  const MetricReport metrics = BuildMetricReport(learner, instance, labels);
  if (c.format == "json") {
    std::ostringstream inst;
    instance.WriteJson(inst);
    Json doc;
    doc["learner"] = learner.Name();
    doc["instance"] = Json::parse(inst.str());
    Json m;
    m["err"] = metrics.err;
    Json errn = Json::object();
    for (const auto& [ell, v] : metrics.errn) errn[std::to_string(ell)] = v;
    m["errn"] = errn;
    m["mem"] = metrics.mem;
    m["loostab"] = metrics.loostab;
    Json conf = Json::object();
    for (const auto& [i, v] : metrics.conf) conf[std::to_string(i)] = v;
    m["conf"] = conf;
    doc["metrics"] = m;
    out << doc.dump(2) << '\n';
  } else {
    metrics.WriteCsv(out);
  }
  return 0;
}

int RunCoupling(const RunConfig& c, std::ostream& out) {
  const FrequencyPrior prior = PriorFromSpec(c.prior);
  const LabelPriorSpec labels = LabelPriorSpec::IidUniform(c.m, c.kappa);
  MixtureOptions options;
  options.dimension = c.dimension;
  options.num_subpops = prior.size();
  options.n = c.n;
  options.fresh_per_subpop = c.fresh;
  options.offset_radius = c.radius;
  MaxMarginOptions solver;
  solver.tolerance = c.tolerance;

  Json rows = Json::array();
  for (std::uint64_t r = 0; r < c.instances; ++r) {
    const Seed seed = DeriveSeed(c.seed, r);
    const MixtureInstance inst =
        SampleMixtureInstance(prior, labels, options, seed);
    if (r == 0 && !c.geometry.empty()) {
      std::ofstream file(c.geometry);
      if (!file) Invalid("geometry", "cannot open '" + c.geometry + "'");
      inst.WriteGeometryCsv(file);
    }
    const IndependenceCertificate cert = CertifyInstance(inst);
    const LinearModel model =
        TrainApproxMaxMargin(inst.points, inst.labels, c.m, solver);
    double reference = std::numeric_limits<double>::infinity();
    for (Label k = 0; k < c.m; ++k) {
      reference = std::min(
          reference,
          ReferenceMarginConstruction(inst.points, inst.tags, inst.labels, k)
              .margin);
    }
    const LinearPredictor h(model);
    Json row;
    row["instance"] = r;
    row["tau_measured"] = cert.tau_measured;
    row["theta_measured"] = cert.theta_measured;
    row["theta_required"] = CertificateTheta(cert, c.n);
    row["certified"] = IsCertified(cert, c.n);
    row["reference_margin"] = reference;
    row["trained_margin"] =
        *std::min_element(model.margins.begin(), model.margins.end());
    for (std::uint64_t ell : c.ells) {
      row["lambda_" + std::to_string(ell)] = CouplingEstimate(h, inst, ell);
    }
    rows.push_back(row);
  }
  if (c.format == "json") {
    out << rows.dump(2) << '\n';
    return 0;
  }
  std::ostringstream buffer;
  buffer.precision(17);
  bool header = true;
  for (const Json& row : rows) {
    if (header) {
      bool first = true;
      for (const auto& [key, value] : row.items()) {
        buffer << (first ? "" : ",") << key;
        first = false;
      }
      buffer << '\n';
      header = false;
    }
    bool first = true;
    for (const auto& [key, value] : row.items()) {
      buffer << (first ? "" : ",");
      first = false;
      if (value.is_boolean()) {
        buffer << (value.get<bool>() ? "true" : "false");
      } else if (value.is_number_unsigned()) {
        buffer << value.get<std::uint64_t>();
      } else {
        buffer << value.get<double>();
      }
    }
    buffer << '\n';
  }
  out << buffer.str();
  return 0;
}

int RunDisparity(const RunConfig& c, std::ostream& out) {
  std::vector<SubgroupSpec> groups;
  for (const SubgroupConfig& g : c.subgroups) {
    groups.push_back({g.name, PriorFromSpec(g.prior), g.n, g.m, g.weight});
  }
  CostOptions options;
  if (MethodOrDefault(c) == "mc") {
    options.source = CostOptions::Source::kMarginalMonteCarlo;
  }
  options.replicates = c.mc;
  options.seed = c.seed;
  const CostParameters params =
      c.cost == "privacy" ? CostParameters::Privacy(c.epsilon, c.delta, c.kappa)
                          : CostParameters::Memorization(c.gamma, c.kappa);
  const DisparityReport report = BuildDisparityReport(groups, params, options);
  if (c.format == "table") {
    report.WriteTable(out);
  } else if (c.format == "json") {
    Json doc;
    doc["parameters"] = params.Describe();
    doc["method"] = report.method;
    Json rows = Json::array();
    for (const SubgroupResult& r : report.rows) {
      rows.push_back({{"subgroup", r.name},
                      {"weight", r.mixing_weight},
                      {"N", r.domain_size},
                      {"n", r.n},
                      {"m", r.num_classes},
                      {"tau1", r.tau1},
                      {"singletons", r.singletons},
                      {"opt", r.opt},
                      {"cost", r.cost}});
    }
    doc["subgroups"] = rows;
    doc["population_opt"] = report.PopulationOpt();
    doc["population_cost"] = report.PopulationCost();
    out << doc.dump(2) << '\n';
  } else {
    report.WriteCsv(out);
  }
  return 0;
}

int RunReproduce(const RunConfig& c, std::ostream& out) {
  const std::vector<ClaimRow> rows = ReproduceClaims(c.seed);
  if (c.format == "csv") {
    WriteClaimCsv(rows, out);
  } else if (c.format == "json") {
    Json doc = Json::array();
    for (const ClaimRow& r : rows) {
      doc.push_back({{"claim", r.id},
                     {"reference_value", r.reference_value},
                     {"computed", r.computed},
                     {"method", r.method},
                     {"tolerance", r.tolerance},
                     {"pass", r.pass}});
    }
    out << doc.dump(2) << '\n';
  } else {
    WriteClaimTable(rows, out);
  }
  const bool all = std::all_of(rows.begin(), rows.end(),
                               [](const ClaimRow& r) { return r.pass; });
  return all ? 0 : 3;
}

ClaimRow Claim(std::string id, double reference, double computed,
               std::string method, double tolerance) {
  ClaimRow row{std::move(id), reference, computed, std::move(method), tolerance,
               false};
  row.pass = std::abs(computed - reference) <= tolerance;
  return row;
}

}  // namespace

RunConfig ParseRunConfigJson(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "experiment") {
      c.experiment = GetString(value, key);
    } else if (key == "prior") {
      c.prior = GetString(value, key);
    } else if (key == "n") {
      c.n = GetUnsigned<std::uint64_t>(value, key);
    } else if (key == "domain_size") {
      c.domain_size = GetUnsigned<std::size_t>(value, key);
    } else if (key == "m") {
      c.m = GetUnsigned<std::size_t>(value, key);
    } else if (key == "kappa") {
      c.kappa = GetNumber(value, key);
    } else if (key == "gamma") {
      c.gamma = GetNumber(value, key);
    } else if (key == "epsilon") {
      c.epsilon = GetNumber(value, key);
    } else if (key == "delta") {
      c.delta = GetNumber(value, key);
    } else if (key == "ells") {
      c.ells.clear();
      if (value.is_array()) {
        for (const Json& v : value) {
          c.ells.push_back(GetUnsigned<std::uint64_t>(v, key));
        }
      } else {
        c.ells.push_back(GetUnsigned<std::uint64_t>(value, key));
      }
    } else if (key == "intervals") {
      if (!value.is_array()) Invalid(key, "must be a list of [lo, hi] pairs");
      c.intervals.clear();
      for (const Json& v : value) {
        if (!v.is_array() || v.size() != 2) {
          Invalid(key, "must be a list of [lo, hi] pairs");
        }
        c.intervals.emplace_back(GetNumber(v[0], key), GetNumber(v[1], key));
      }
    } else if (key == "method") {
      c.method = GetString(value, key);
    } else if (key == "mc") {
      c.mc = GetUnsigned<std::uint64_t>(value, key);
    } else if (key == "seed") {
      c.seed = GetUnsigned<Seed>(value, key);
    } else if (key == "learner") {
      c.learner = GetString(value, key);
    } else if (key == "dimension") {
      c.dimension = GetUnsigned<std::size_t>(value, key);
    } else if (key == "instances") {
      c.instances = GetUnsigned<std::uint64_t>(value, key);
    } else if (key == "fresh") {
      c.fresh = GetUnsigned<std::size_t>(value, key);
    } else if (key == "radius") {
      c.radius = GetNumber(value, key);
    } else if (key == "tolerance") {
      c.tolerance = GetNumber(value, key);
    } else if (key == "geometry") {
      c.geometry = GetString(value, key);
    } else if (key == "subgroups") {
      if (!value.is_array()) Invalid(key, "must be a list of objects");
      c.subgroups.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        c.subgroups.push_back(ParseSubgroup(value[i], i));
      }
    } else if (key == "cost") {
      c.cost = GetString(value, key);
    } else if (key == "output") {
      c.output = GetString(value, key);
    } else if (key == "format") {
      c.format = GetString(value, key);
    } else {
      Invalid(key, "unknown key");
    }
  }
  return c;
}

std::string RunConfigToJson(const RunConfig& c) {
  Json doc;
  doc["experiment"] = c.experiment;
  doc["prior"] = c.prior;
  doc["n"] = c.n;
  doc["domain_size"] = c.domain_size;
  doc["m"] = c.m;
  doc["kappa"] = c.kappa;
  doc["gamma"] = c.gamma;
  doc["epsilon"] = c.epsilon;
  doc["delta"] = c.delta;
  doc["ells"] = c.ells;
  Json intervals = Json::array();
  for (const auto& [lo, hi] : c.intervals) intervals.push_back({lo, hi});
  doc["intervals"] = intervals;
  doc["method"] = c.method;
  doc["mc"] = c.mc;
  doc["seed"] = c.seed;
  doc["learner"] = c.learner;
  doc["dimension"] = c.dimension;
  doc["instances"] = c.instances;
  doc["fresh"] = c.fresh;
  doc["radius"] = c.radius;
  doc["tolerance"] = c.tolerance;
  doc["geometry"] = c.geometry;
  Json groups = Json::array();
  for (const SubgroupConfig& g : c.subgroups) {
    groups.push_back({{"name", g.name},
                      {"prior", g.prior},
                      {"n", g.n},
                      {"m", g.m},
                      {"weight", g.weight}});
  }
  doc["subgroups"] = groups;
  doc["cost"] = c.cost;
  doc["output"] = c.output;
  doc["format"] = c.format;
  return doc.dump(2);
}

void ValidateRunConfig(const RunConfig& config) {
  RunConfig c = config;
  c.format = FormatOrDefault(config);
  static const std::set<std::string> kExperiments = {
      "tau",      "weight",    "singletons", "simulate",
      "coupling", "disparity", "reproduce"};
  if (!kExperiments.count(c.experiment)) {
    Invalid("experiment",
            "must be one of tau, weight, singletons, simulate, coupling, "
            "disparity, reproduce");
  }
  if (c.experiment == "reproduce") {
    if (c.format != "csv" && c.format != "json" && c.format != "table") {
      Invalid("format", "must be csv, json or table");
    }
    return;
  }
  if (c.format != "csv" && c.format != "json" &&
      !(c.format == "table" && c.experiment == "disparity")) {
    Invalid("format", c.experiment == "disparity"
                          ? "must be csv, json or table"
                          : "must be csv or json");
  }
  const std::string method = MethodOrDefault(c);
  if (method != "mc" && method != "exact" && method != "plug-in") {
    Invalid("method", "must be mc, exact or plug-in");
  }
  if (c.experiment == "disparity" && method == "exact") {
    Invalid("method", "disparity supports mc or plug-in");
  }
  if (method == "mc" && c.mc == 0) Invalid("mc", "must be >= 1");
  if (c.experiment != "disparity" && c.n == 0) Invalid("n", "must be >= 1");
  if (c.m < 2) Invalid("m", "must be >= 2");
  if (!(c.kappa >= 0.0 && c.kappa <= 1.0)) Invalid("kappa", "must lie in [0, 1]");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) Invalid("gamma", "must lie in [0, 1]");
  if (!(c.epsilon >= 0.0) || !std::isfinite(c.epsilon)) {
    Invalid("epsilon", "must be a finite number >= 0");
  }
  if (!(c.delta >= 0.0 && c.delta <= 1.0)) Invalid("delta", "must lie in [0, 1]");
  if (c.experiment == "tau" || c.experiment == "coupling") {
    if (c.ells.empty()) Invalid("ells", "must list at least one multiplicity");
    for (std::uint64_t ell : c.ells) {
      if (ell < 1 || ell > c.n) Invalid("ells", "entries must lie in [1, n]");
    }
  }
  if (c.experiment == "weight") {
    if (c.intervals.empty()) Invalid("intervals", "must list at least one");
    for (const auto& [lo, hi] : c.intervals) {
      if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
        Invalid("intervals", "need 0 <= lo <= hi <= 1");
      }
    }
  }
  if (c.experiment == "coupling") {
    if (c.dimension < 2) Invalid("dimension", "must be >= 2");
    if (c.instances == 0) Invalid("instances", "must be >= 1");
    if (!(c.radius >= 0.0 && c.radius <= 1.0)) {
      Invalid("radius", "must lie in [0, 1]");
    }
    if (!(c.tolerance > 0.0 && c.tolerance < 0.5)) {
      Invalid("tolerance", "must lie in (0, 0.5)");
    }
  }
  if (c.experiment == "disparity") {
    if (c.subgroups.empty()) Invalid("subgroups", "must list at least one");
    if (c.cost != "memorization" && c.cost != "privacy") {
      Invalid("cost", "must be memorization or privacy");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < c.subgroups.size(); ++i) {
      const SubgroupConfig& g = c.subgroups[i];
      const std::string base = "subgroups[" + std::to_string(i) + "]";
      if (g.n == 0) Invalid(base + ".n", "must be >= 1");
      if (g.m < 2) Invalid(base + ".m", "must be >= 2");
      if (!(g.weight >= 0.0 && g.weight <= 1.0)) {
        Invalid(base + ".weight", "must lie in [0, 1]");
      }
      total += g.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      Invalid("subgroups", "weights must sum to 1");
    }
  }
}

int Run(const RunConfig& config, std::ostream& out) {
  ValidateRunConfig(config);
  RunConfig c = config;
  c.method = MethodOrDefault(config);
  c.format = FormatOrDefault(config);
  std::ostringstream report;
  int status = 0;
  if (c.experiment == "tau" || c.experiment == "weight" ||
      c.experiment == "singletons") {
    status = RunTail(c, report);
  } else if (c.experiment == "simulate") {
    status = RunSimulate(c, report);
  } else if (c.experiment == "coupling") {
    status = RunCoupling(c, report);
  } else if (c.experiment == "disparity") {
    status = RunDisparity(c, report);
  } else {
    status = RunReproduce(c, report);
  }
  if (c.output.empty()) {
    out << report.str();
  } else {
    std::ofstream file(c.output, std::ios::binary);
    if (!file) Invalid("output", "cannot open '" + c.output + "'");
    file << report.str();
    if (!file) Invalid("output", "write to '" + c.output + "' failed");
  }
  return status;
}

int ExitCodeFor(const std::exception& error) {
  if (dynamic_cast<const NumericDegeneracy*>(&error) ||
      dynamic_cast<const SeparationFailure*>(&error)) {
    return 2;
  }
  return 1;
}

std::vector<ClaimRow> ZipfTailClaims(Seed seed) {
  const std::uint64_t n = 50000;
  const FrequencyPrior prior = ZipfPrior(50000);
  const FrequencySampleSet samples =
      MarginalSamples(prior, prior.size(), 200, seed);
  const std::string mc = "pihat-mc, 200 replicates, seed " +
                         std::to_string(seed);
  const double nd = static_cast<double>(n);
  double min_entry = prior.entries().front();
  for (double v : prior.entries()) min_entry = std::min(min_entry, v);
  return {
      Claim("zipf_expected_loss_tau1_times_n", 0.47, Tau(samples, 1, n) * nd,
            mc, 0.03),
      Claim("zipf_singleton_fraction", 0.17,
            SingletonExpectation(samples, n, prior.size()) / nd, mc, 0.01),
      Claim("zipf_worst_case_loss_times_n", 0.09, min_entry * nd, "exact",
            0.005),
  };
}

std::vector<ClaimRow> BinaryExampleClaims(Seed seed) {
  const std::uint64_t n = 50000;
  const std::uint64_t instances = 40;
  const FrequencyPrior prior = ZipfPrior(50000);
  const LabelPriorSpec labels = LabelPriorSpec::IidUniform(2);
  const Learner memorizer = Learner::Memorizer(labels);
  const Learner guesser = Learner::FitMultiplicityAtLeast(labels, 2);
  CompensatedSum mem_err, excess;
  for (std::uint64_t r = 0; r < instances; ++r) {
    const DiscreteInstance inst =
        SampleInstance(prior, labels, n, DeriveSeed(seed, r));
    const double base = GeneralizationError(memorizer, inst);
    mem_err.Add(base);
    excess.Add(GeneralizationError(guesser, inst) - base);
  }
  const std::string method = "simulated, " + std::to_string(instances) +
                             " instances, seed " + std::to_string(seed);
  const auto count = static_cast<double>(instances);
  return {
      Claim("binary_memorizer_error", 0.085, mem_err.Total() / count, method,
            0.005),
      Claim("binary_singleton_guessing_excess", 0.04, excess.Total() / count,
            method, 0.005),
  };
}

std::vector<ClaimRow> CostTableClaims() {
  struct Cell {
    const char* id;
    std::size_t domain;
    std::uint64_t n;
    double opt;
    double cost;
  };
  const Cell cells[] = {
      {"N5000_n50000", 5000, 50000, 0.018, 0.015},
      {"N5000_n10000", 5000, 10000, 0.113, 0.035},
      {"N25000_n50000", 25000, 50000, 0.107, 0.031},
  };
  std::vector<ClaimRow> rows;
  for (const Cell& c : cells) {
    const FrequencyPrior prior = ZipfPrior(c.domain);
    const double mem = MemorizationCost(prior, c.n, 10, 0.5);
    const double priv = PrivacyCost(prior, c.n, 10, std::log(6.0), 0.0);
    rows.push_back(Claim(std::string("opt_") + c.id, c.opt,
                         OptError(prior, c.n, 10), "pi-plug-in", 0.002));
    rows.push_back(Claim(std::string("cost_gamma_half_") + c.id, c.cost, mem,
                         "pi-plug-in", 0.002));
    rows.push_back(Claim(std::string("privacy_ln6_equals_cost_") + c.id, 0.0,
                         priv - mem, "pi-plug-in, difference", 1e-12));
  }
  return rows;
}

std::vector<ClaimRow> ReproduceClaims(Seed seed) {
  std::vector<ClaimRow> rows = ZipfTailClaims(seed);
  for (ClaimRow& r : BinaryExampleClaims(seed)) rows.push_back(std::move(r));
  for (ClaimRow& r : CostTableClaims()) rows.push_back(std::move(r));
  return rows;
}

void WriteClaimTable(const std::vector<ClaimRow>& rows, std::ostream& out) {
  std::ostringstream buffer;
  buffer << std::left << std::setw(38) << "claim" << std::right
         << std::setw(10) << "reference" << std::setw(14) << "computed"
         << std::setw(10) << "tol" << "  " << std::left << std::setw(8)
         << "result" << "method\n";
  for (const ClaimRow& r : rows) {
    buffer << std::left << std::setw(38) << r.id << std::right
           << std::setprecision(6) << std::setw(10) << r.reference_value
           << std::setw(14) << r.computed << std::setw(10) << r.tolerance
           << "  " << std::left << std::setw(8) << (r.pass ? "PASS" : "FAIL")
           << r.method << '\n';
  }
  out << buffer.str();
}

void WriteClaimCsv(const std::vector<ClaimRow>& rows, std::ostream& out) {
  std::ostringstream buffer;
  buffer.precision(17);
  buffer << "claim,reference_value,computed,method,tolerance,pass\n";
  for (const ClaimRow& r : rows) {
    buffer << r.id << ',' << r.reference_value << ',' << r.computed << ",\""
           << r.method << "\"," << r.tolerance << ','
           << (r.pass ? "true" : "false") << '\n';
  }
  out << buffer.str();
}

}  // namespace tail_ledger
