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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tail_ledger/discrete_model.h"
#include "tail_ledger/learners.h"
#include "tail_ledger/mixture_coupling.h"
#include "tail_ledger/prior_model.h"
#include "tail_ledger/privacy_disparity.h"
#include "tail_ledger/reports.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace py = pybind11;
namespace tl = tail_ledger;

namespace {

tl::FrequencyPrior ToPrior(const py::object& obj) {
  if (py::isinstance<tl::FrequencyPrior>(obj)) {
    return obj.cast<tl::FrequencyPrior>();
  }
  if (py::isinstance<py::str>(obj)) {
    return tl::PriorFromSpec(obj.cast<std::string>());
  }
  return tl::FrequencyPrior::Create(obj.cast<std::vector<double>>(), "list");
}

tl::CostOptions MakeCostOptions(const std::string& method,
                                std::uint64_t replicates, tl::Seed seed) {
  tl::CostOptions options;
  if (method == "plug-in") {
    options.source = tl::CostOptions::Source::kPlugIn;
  } else if (method == "mc") {
    options.source = tl::CostOptions::Source::kMarginalMonteCarlo;
  } else {
    throw tl::InvalidArgument("method must be 'plug-in' or 'mc', got '" +
                              method + "'");
  }
  options.replicates = replicates;
  options.seed = seed;
  return options;
}

py::dict ClaimToDict(const tl::ClaimRow& row) {
  py::dict d;
  d["id"] = row.id;
  d["reference_value"] = row.reference_value;
  d["computed"] = row.computed;
  d["method"] = row.method;
  d["tolerance"] = row.tolerance;
  d["pass"] = row.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Long-tail memorization bounds and simulators";

  auto error = py::register_exception<tl::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<tl::InvalidArgument>(m, "InvalidArgument", error);
  py::register_exception<tl::ResourceLimit>(m, "ResourceLimit", error);
  py::register_exception<tl::NumericDegeneracy>(m, "NumericDegeneracy", error);
  py::register_exception<tl::GapConditionUnsatisfied>(
      m, "GapConditionUnsatisfied", error);
  py::register_exception<tl::SeparationFailure>(m, "SeparationFailure", error);
  py::register_exception<tl::UnsupportedPrior>(m, "UnsupportedPrior", error);

  // Priors and frequency samples.
  py::class_<tl::FrequencyPrior>(m, "FrequencyPrior")
      .def(py::init([](std::vector<double> entries, std::string name) {
             return tl::FrequencyPrior::Create(std::move(entries),
                                               std::move(name));
           }),
           py::arg("entries"), py::arg("name") = "custom")
      .def_property_readonly("entries", &tl::FrequencyPrior::entries)
      .def_property_readonly("name", &tl::FrequencyPrior::name)
      .def_property_readonly("max_entry", &tl::FrequencyPrior::max_entry)
      .def_property_readonly("variance", &tl::FrequencyPrior::variance)
      .def("__len__", &tl::FrequencyPrior::size)
      .def("__repr__", [](const tl::FrequencyPrior& p) {
        return "<FrequencyPrior " + p.name() + " N=" +
               std::to_string(p.size()) + ">";
      });

  m.def("zipf_prior", &tl::ZipfPrior, py::arg("n"));
  m.def("uniform_prior", &tl::UniformPrior, py::arg("n"));
  m.def("prior_from_spec", &tl::PriorFromSpec, py::arg("spec"),
        "Parses zipf:N, uniform:N or file:PATH.");
  m.def(
      "sample_frequency_vector",
      [](const py::object& prior, std::size_t domain_size, tl::Seed seed) {
        return tl::SampleFrequencyVector(ToPrior(prior), domain_size, seed);
      },
      py::arg("prior"), py::arg("domain_size"), py::arg("seed") = tl::kDefaultSeed);

  py::class_<tl::FrequencySampleSet>(m, "FrequencySampleSet")
      .def_property_readonly("values", &tl::FrequencySampleSet::values)
      .def_property_readonly(
          "weights",
          [](const tl::FrequencySampleSet& s) {
            std::vector<double> w(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) w[i] = s.weight(i);
            return w;
          })
      .def_property_readonly("method", &tl::FrequencySampleSet::MethodName)
      .def("mean", &tl::FrequencySampleSet::Mean)
      .def("__len__", &tl::FrequencySampleSet::size);

  m.def(
      "marginal_samples",
      [](const py::object& prior, std::size_t domain_size,
         std::uint64_t replicates, tl::Seed seed) {
        const tl::FrequencyPrior p = ToPrior(prior);
        py::gil_scoped_release release;
        return tl::MarginalSamples(p, domain_size, replicates, seed);
      },
      py::arg("prior"), py::arg("domain_size"), py::arg("replicates") = 200,
      py::arg("seed") = tl::kDefaultSeed);
  m.def(
      "exact_marginal",
      [](const py::object& prior, std::size_t domain_size) {
        return tl::ExactMarginal(ToPrior(prior), domain_size);
      },
      py::arg("prior"), py::arg("domain_size"));
  m.def(
      "plug_in_samples",
      [](const py::object& prior) { return tl::PlugInSamples(ToPrior(prior)); },
      py::arg("prior"));

  // Tail statistics.
  m.def("tau", &tl::Tau, py::arg("samples"), py::arg("ell"), py::arg("n"));
  m.def(
      "weight",
      [](const tl::FrequencySampleSet& samples, double lo, double hi,
         std::size_t domain_size, bool open) {
        return tl::Weight(samples, lo, hi, domain_size,
                          open ? tl::IntervalBounds::kOpen
                               : tl::IntervalBounds::kClosed);
      },
      py::arg("samples"), py::arg("lo"), py::arg("hi"), py::arg("domain_size"),
      py::arg("open") = false);
  m.def("singleton_expectation", &tl::SingletonExpectation, py::arg("samples"),
        py::arg("n"), py::arg("domain_size"));
  m.def("tau1_lower_bound", &tl::Tau1LowerBound, py::arg("samples"),
        py::arg("n"), py::arg("domain_size"));
  m.def("posterior_mean_frequency", &tl::PosteriorMeanFrequency,
        py::arg("samples"), py::arg("ell"), py::arg("n"));
  m.def(
      "brute_force_posterior",
      [](const py::object& prior, std::size_t domain_size,
         std::vector<tl::Point> sequence, tl::Point query) {
        return tl::BruteForcePosterior(ToPrior(prior), domain_size, sequence,
                                       query);
      },
      py::arg("prior"), py::arg("domain_size"), py::arg("sequence"),
      py::arg("query"));

  // Learners on the discrete model.
  m.def(
      "verify_main_bound",
      [](const py::object& prior, std::size_t n, std::size_t num_classes,
         const std::string& learner, std::uint64_t instances,
         std::uint64_t tau_replicates, tl::Seed seed) {
        const auto label_prior = tl::LabelPriorSpec::IidUniform(num_classes);
        const tl::FrequencyPrior p = ToPrior(prior);
        const tl::Learner l = tl::ParseLearner(learner, label_prior);
        tl::MainBoundResult r;
        {
          py::gil_scoped_release release;
          r = tl::VerifyMainBound(p, label_prior, n, l, instances,
                                  tau_replicates, seed);
        }
        py::dict d;
        d["lhs_excess"] = r.lhs_excess;
        d["rhs_sum"] = r.rhs_sum;
        d["gap"] = r.gap;
        d["gap_standard_error"] = r.gap_standard_error;
        return d;
      },
      py::arg("prior"), py::arg("n"), py::arg("num_classes") = 2,
      py::arg("learner") = "memorizer", py::arg("instances") = 100,
      py::arg("tau_replicates") = 200, py::arg("seed") = tl::kDefaultSeed,
      "Monte Carlo check of excess error against sum_ell tau_ell * errn.");
  m.def(
      "metric_report",
      [](const py::object& prior, std::size_t n, std::size_t num_classes,
         const std::string& learner, tl::Seed seed) {
        const auto label_prior = tl::LabelPriorSpec::IidUniform(num_classes);
        const auto instance =
            tl::SampleInstance(ToPrior(prior), label_prior, n, seed);
        const auto r = tl::BuildMetricReport(
            tl::ParseLearner(learner, label_prior), instance, label_prior);
        py::dict d;
        d["err"] = r.err;
        d["errn"] = r.errn;
        d["mem"] = r.mem;
        d["loostab"] = r.loostab;
        d["conf"] = r.conf;
        return d;
      },
      py::arg("prior"), py::arg("n"), py::arg("num_classes") = 2,
      py::arg("learner") = "memorizer", py::arg("seed") = tl::kDefaultSeed);

  // Memorization and privacy costs.
  m.def(
      "opt_error",
      [](const py::object& prior, std::uint64_t n, std::size_t num_classes,
         const std::string& method, std::uint64_t replicates, tl::Seed seed) {
        return tl::OptError(ToPrior(prior), n, num_classes,
                            MakeCostOptions(method, replicates, seed));
      },
      py::arg("prior"), py::arg("n"), py::arg("num_classes") = 2,
      py::arg("method") = "plug-in", py::arg("replicates") = 200,
      py::arg("seed") = tl::kDefaultSeed);
  m.def(
      "memorization_cost",
      [](const py::object& prior, std::uint64_t n, std::size_t num_classes,
         double gamma, double kappa, const std::string& method,
         std::uint64_t replicates, tl::Seed seed) {
        return tl::MemorizationCost(ToPrior(prior), n, num_classes, gamma,
                                    kappa,
                                    MakeCostOptions(method, replicates, seed));
      },
      py::arg("prior"), py::arg("n"), py::arg("num_classes") = 2,
      py::arg("gamma") = 0.5, py::arg("kappa") = 1.0,
      py::arg("method") = "plug-in", py::arg("replicates") = 200,
      py::arg("seed") = tl::kDefaultSeed);
  m.def(
      "privacy_cost",
      [](const py::object& prior, std::uint64_t n, std::size_t num_classes,
         double epsilon, double delta, double kappa, const std::string& method,
         std::uint64_t replicates, tl::Seed seed) {
        return tl::PrivacyCost(ToPrior(prior), n, num_classes, epsilon, delta,
                               kappa,
                               MakeCostOptions(method, replicates, seed));
      },
      py::arg("prior"), py::arg("n"), py::arg("num_classes") = 2,
      py::arg("epsilon") = 0.0, py::arg("delta") = 0.0,
      py::arg("kappa") = 1.0, py::arg("method") = "plug-in",
      py::arg("replicates") = 200, py::arg("seed") = tl::kDefaultSeed);

  // Mixture geometry.
  m.def(
      "independence_certificate",
      [](const Eigen::MatrixXd& points, const std::vector<tl::Subpop>& tags) {
        const auto c = tl::ComputeIndependenceCertificate(points, tags);
        return std::make_pair(c.tau_measured, c.theta_measured);
      },
      py::arg("points"), py::arg("tags"),
      "Returns (tau_measured, theta_measured) for the rows of points.");
  m.def(
      "train_max_margin",
      [](const Eigen::MatrixXd& points, const std::vector<tl::Label>& labels,
         std::size_t num_classes, double tolerance) {
        tl::MaxMarginOptions options;
        options.tolerance = tolerance;
        const auto model =
            tl::TrainApproxMaxMargin(points, labels, num_classes, options);
        py::dict d;
        d["weights"] = model.weights;
        d["margins"] = model.margins;
        d["margin_upper_bounds"] = model.margin_upper_bounds;
        return d;
      },
      py::arg("points"), py::arg("labels"), py::arg("num_classes"),
      py::arg("tolerance") = 0.05);

  // Config-driven runs and the claim table.
  m.def(
      "run",
      [](const std::string& config_json) {
        const tl::RunConfig config = tl::ParseRunConfigJson(config_json);
        std::ostringstream out;
        int code;
        {
          py::gil_scoped_release release;
          code = tl::Run(config, out);
        }
        return std::make_pair(code, out.str());
      },
      py::arg("config_json"),
      "Runs a JSON config as the CLI would; returns (exit_code, output).");
  m.def(
      "reproduce_claims",
      [](tl::Seed seed) {
        std::vector<tl::ClaimRow> rows;
        {
          py::gil_scoped_release release;
          rows = tl::ReproduceClaims(seed);
        }
        py::list out;
        for (const auto& row : rows) out.append(ClaimToDict(row));
        return out;
      },
      py::arg("seed") = tl::kDefaultSeed);
}
