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

#include "tail_ledger/mixture_coupling.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "tail_ledger/parallel.h"
#include "tail_ledger/status.h"
#include "tail_ledger/tail_analysis.h"

namespace tail_ledger {
namespace {

Eigen::VectorXd UnitVector(std::size_t d, Rng& rng) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  for (;;) {
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = rng.Normal();
    const double norm = v.norm();
    if (norm > 0.0) return v / norm;
  }
}

// center + r * u with u uniform on the sphere and r uniform on [0, radius].
Eigen::RowVectorXd Draw(const Eigen::VectorXd& center, double radius,
                        Rng& rng) {
  const double r = radius * rng.Uniform();
  return (center + r * UnitVector(center.size(), rng)).transpose();
}

Eigen::MatrixXd NormalizedRows(const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out = points;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw InvalidArgument("points must be finite and nonzero");
    }
    out.row(i) /= norm;
  }
  return out;
}

double TotalVariation(const Pmf& a, const Pmf& b) {
  double total = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) total += std::abs(a[k] - b[k]);
  return 0.5 * total;
}

Pmf ModePmf(const LabelPriorSpec& label_prior, Subpop j) {
  const std::vector<std::uint32_t> zeros(label_prior.num_classes, 0);
  return PredictFromCounts(Learner::NoFit(label_prior), j, zeros);
}

}  // namespace

std::uint32_t MixtureInstance::Multiplicity(Subpop j) const {
  return static_cast<std::uint32_t>(std::count(tags.begin(), tags.end(), j));
}

std::ptrdiff_t MixtureInstance::RepresentedIndex(Subpop j) const {
  const auto it = std::lower_bound(represented.begin(), represented.end(), j);
  if (it == represented.end() || *it != j) return -1;
  return it - represented.begin();
}

const Eigen::MatrixXd& MixtureInstance::FreshPoints(Subpop j) const {
  const std::ptrdiff_t k = RepresentedIndex(j);
  if (k < 0 || static_cast<std::size_t>(k) >= fresh.size() ||
      fresh[static_cast<std::size_t>(k)].rows() == 0) {
    throw InvalidArgument("no fresh points for subpopulation " +
                          std::to_string(j));
  }
  return fresh[static_cast<std::size_t>(k)];
}

void MixtureInstance::WriteGeometryCsv(std::ostream& out) const {
  std::ostringstream buffer;
  buffer.precision(17);
  buffer << "subpop,label";
  for (std::size_t c = 0; c < dimension; ++c) buffer << ",coord_" << c;
  buffer << '\n';
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    buffer << tags[static_cast<std::size_t>(i)] << ','
           << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < points.cols(); ++c) {
      buffer << ',' << points(i, c);
    }
    buffer << '\n';
  }
  out << buffer.str();
}

MixtureInstance SampleMixtureInstance(const FrequencyPrior& prior,
                                      const LabelPriorSpec& label_prior,
                                      const MixtureOptions& options,
                                      Seed seed) {
  if (options.dimension < 2) throw InvalidArgument("dimension must be >= 2");
  if (options.n == 0) throw InvalidArgument("n must be positive");
  if (options.num_subpops != prior.size()) {
    throw InvalidArgument("num_subpops must equal the prior size");
  }
  if (!(options.offset_radius >= 0.0 && options.offset_radius <= 1.0)) {
    throw InvalidArgument("offset_radius must lie in [0, 1]");
  }
  // The discrete layer supplies coefficients, labels and subpopulation tags.
  const DiscreteInstance discrete =
      SampleInstance(prior, label_prior, options.n, seed);

  MixtureInstance instance;
  instance.dimension = options.dimension;
  instance.num_subpops = options.num_subpops;
  instance.seed = seed;
  instance.label_prior = label_prior;
  instance.coefficients = discrete.pmf;
  instance.true_labels = discrete.true_labels;
  instance.observed_labels = discrete.observed_labels;
  instance.num_classes = discrete.num_classes;

  const Dataset& s = discrete.dataset;
  std::set<Subpop> seen;
  for (const Example& e : s.examples()) seen.insert(e.point);
  instance.represented.assign(seen.begin(), seen.end());

  const auto d = static_cast<Eigen::Index>(options.dimension);
  const Seed center_seed = DeriveSeed(seed, 4);
  instance.centers.resize(static_cast<Eigen::Index>(seen.size()), d);
  for (std::size_t k = 0; k < instance.represented.size(); ++k) {
    Rng rng(DeriveSeed(center_seed, instance.represented[k]));
    instance.centers.row(static_cast<Eigen::Index>(k)) =
        UnitVector(options.dimension, rng).transpose();
  }

  Rng offset_rng(DeriveSeed(seed, 5));
  instance.points.resize(static_cast<Eigen::Index>(s.size()), d);
  instance.tags.resize(s.size());
  instance.labels.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Example& e = s.example(i);
    instance.tags[i] = e.point;
    instance.labels[i] = e.label;
    const Eigen::VectorXd center =
        instance.centers.row(instance.RepresentedIndex(e.point)).transpose();
    instance.points.row(static_cast<Eigen::Index>(i)) =
        Draw(center, options.offset_radius, offset_rng);
  }

  const Seed fresh_seed = DeriveSeed(seed, 6);
  instance.fresh.resize(instance.represented.size());
  for (std::size_t k = 0; k < instance.represented.size(); ++k) {
    Rng rng(DeriveSeed(fresh_seed, instance.represented[k]));
    const Eigen::VectorXd center =
        instance.centers.row(static_cast<Eigen::Index>(k)).transpose();
    Eigen::MatrixXd& block = instance.fresh[k];
    block.resize(static_cast<Eigen::Index>(options.fresh_per_subpop), d);
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      block.row(r) = Draw(center, options.offset_radius, rng);
    }
  }
  return instance;
}

IndependenceCertificate ComputeIndependenceCertificate(
    const Eigen::MatrixXd& points, const std::vector<Subpop>& tags) {
  if (points.rows() == 0) throw InvalidArgument("need at least one point");
  if (static_cast<std::size_t>(points.rows()) != tags.size()) {
    throw InvalidArgument("one tag per point is required");
  }
  const Eigen::MatrixXd unit = NormalizedRows(points);
  const Eigen::MatrixXd gram = unit * unit.transpose();
  const auto count = static_cast<std::size_t>(points.rows());

  IndependenceCertificate cert;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      if (tags[i] == tags[j]) {
        cert.tau_measured = std::min(
            cert.tau_measured,
            std::clamp(gram(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(j)),
                       -1.0, 1.0));
      }
    }
  }

  std::set<Subpop> groups(tags.begin(), tags.end());
  for (Subpop g : groups) {
    std::vector<Eigen::Index> inside;
    std::vector<Eigen::Index> outside;
    for (std::size_t i = 0; i < count; ++i) {
      (tags[i] == g ? inside : outside).push_back(static_cast<Eigen::Index>(i));
    }
    if (outside.empty()) continue;
    const auto k = static_cast<Eigen::Index>(outside.size());
    Eigen::MatrixXd other_gram(k, k);
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) {
        other_gram(a, b) = gram(outside[a], outside[b]);
      }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(other_gram);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double cutoff = kSpanTolerance * values.maxCoeff();
    for (Eigen::Index i : inside) {
      Eigen::VectorXd b(k);
      for (Eigen::Index a = 0; a < k; ++a) b[a] = gram(i, outside[a]);
      const Eigen::VectorXd coords = eig.eigenvectors().transpose() * b;
      double squared = 0.0;
      for (Eigen::Index a = 0; a < k; ++a) {
        if (values[a] > cutoff) squared += coords[a] * coords[a] / values[a];
      }
      cert.theta_measured =
          std::max(cert.theta_measured, std::sqrt(std::min(squared, 1.0)));
    }
  }
  return cert;
}

IndependenceCertificate CertifyInstance(const MixtureInstance& instance) {
  std::vector<Eigen::Index> extra;
  for (std::size_t k = 0; k < instance.represented.size(); ++k) {
    const Subpop j = instance.represented[k];
    if (instance.Multiplicity(j) == 1 && k < instance.fresh.size() &&
        instance.fresh[k].rows() > 0) {
      extra.push_back(static_cast<Eigen::Index>(k));
    }
  }
  const Eigen::Index n = instance.points.rows();
  Eigen::MatrixXd all(n + static_cast<Eigen::Index>(extra.size()),
                      instance.points.cols());
  all.topRows(n) = instance.points;
  std::vector<Subpop> tags = instance.tags;
  for (std::size_t e = 0; e < extra.size(); ++e) {
    all.row(n + static_cast<Eigen::Index>(e)) =
        instance.fresh[static_cast<std::size_t>(extra[e])].row(0);
    tags.push_back(instance.represented[static_cast<std::size_t>(extra[e])]);
  }
  return ComputeIndependenceCertificate(all, tags);
}

double CertificateTau(const IndependenceCertificate& c) {
  return std::min(c.tau_measured, 0.5);
}

double CertificateTheta(const IndependenceCertificate& c, std::size_t n) {
  const double tau = CertificateTau(c);
  return tau * tau / (8.0 * std::sqrt(static_cast<double>(n)));
}

bool IsCertified(const IndependenceCertificate& c, std::size_t n) {
  return CertificateTau(c) > 0.0 &&
         c.theta_measured <= CertificateTheta(c, n);
}

ReferenceSeparator ReferenceMarginConstruction(const Eigen::MatrixXd& points,
                                               const std::vector<Subpop>& tags,
                                               const std::vector<Label>& labels,
                                               Label k) {
  if (points.rows() == 0) throw InvalidArgument("dataset is empty");
  if (tags.size() != static_cast<std::size_t>(points.rows()) ||
      labels.size() != tags.size()) {
    throw InvalidArgument("tags and labels must match the points");
  }
  const Eigen::MatrixXd unit = NormalizedRows(points);
  std::set<Subpop> used;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(points.cols());
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!used.insert(tags[i]).second) continue;
    const double z = labels[i] == k ? 1.0 : -1.0;
    w += z * unit.row(static_cast<Eigen::Index>(i)).transpose();
  }
  ReferenceSeparator out;
  out.unnormalized_norm = w.norm();
  if (out.unnormalized_norm == 0.0) {
    out.w = w;
    out.margin = 0.0;
    return out;
  }
  out.w = w / out.unnormalized_norm;
  out.margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const double z = labels[i] == k ? 1.0 : -1.0;
    out.margin = std::min(
        out.margin, z * unit.row(static_cast<Eigen::Index>(i)).dot(out.w));
  }
  return out;
}

LinearModel TrainApproxMaxMargin(const Eigen::MatrixXd& points,
                                 const std::vector<Label>& labels,
                                 std::size_t num_classes,
                                 const MaxMarginOptions& options) {
  if (points.rows() == 0) throw InvalidArgument("dataset is empty");
  if (labels.size() != static_cast<std::size_t>(points.rows())) {
    throw InvalidArgument("one label per point is required");
  }
  if (num_classes < 2) throw InvalidArgument("need at least two classes");
  if (!(options.tolerance > 0.0 && options.tolerance < 0.5)) {
    throw InvalidArgument("tolerance must lie in (0, 0.5)");
  }
  const Eigen::Index count = points.rows();
  Eigen::VectorXd norms(count);
  for (Eigen::Index i = 0; i < count; ++i) norms[i] = points.row(i).norm();
  const Eigen::MatrixXd unit = NormalizedRows(points);
  const Eigen::MatrixXd gram = unit * unit.transpose();

  LinearModel model;
  model.num_classes = num_classes;
  model.weights.resize(static_cast<Eigen::Index>(num_classes), points.cols());
  model.span_coefficients.resize(static_cast<Eigen::Index>(num_classes),
                                 count);
  for (std::size_t k = 0; k < num_classes; ++k) {
    Eigen::VectorXd z(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      z[i] = labels[static_cast<std::size_t>(i)] == k ? 1.0 : -1.0;
    }
    const Eigen::MatrixXd signed_gram = z.asDiagonal() * gram * z.asDiagonal();
    Eigen::VectorXd alpha =
        Eigen::VectorXd::Constant(count, 1.0 / static_cast<double>(count));
    Eigen::VectorXd g = signed_gram * alpha;
    double norm_sq = alpha.dot(g);
    std::size_t iter = 0;
    for (; iter < options.max_iterations; ++iter) {
      if (norm_sq <= 1e-12) break;
      Eigen::Index s = 0;
      g.minCoeff(&s);
      if (g[s] >= (1.0 - options.tolerance) * norm_sq) break;
      Eigen::Index v = -1;
      for (Eigen::Index i = 0; i < count; ++i) {
        if (alpha[i] > 0.0 && (v < 0 || g[i] > g[v])) v = i;
      }
      const double curvature =
          signed_gram(s, s) + signed_gram(v, v) - 2.0 * signed_gram(s, v);
      if (curvature <= 0.0) break;
      const double step = std::min((g[v] - g[s]) / curvature, alpha[v]);
      if (step <= 0.0) break;
      alpha[s] += step;
      alpha[v] -= step;
      if (alpha[v] < 1e-300) alpha[v] = 0.0;
      g += step * (signed_gram.col(s) - signed_gram.col(v));
      norm_sq = alpha.dot(g);
    }
    const std::string name = "class " + std::to_string(k);
    if (norm_sq <= 1e-12) {
      throw SeparationFailure(name +
                              " is not separable by a homogeneous hyperplane");
    }
    const double upper = std::sqrt(norm_sq);
    Eigen::VectorXd c(count);
    for (Eigen::Index i = 0; i < count; ++i) {
      c[i] = alpha[i] * z[i] / (norms[i] * upper);
    }
    Eigen::VectorXd w = points.transpose() * c;
    const double margin = (z.asDiagonal() * (unit * w)).minCoeff();
    if (margin <= 0.0 || margin < 0.5 * upper) {
      throw SeparationFailure(name + " did not reach half the certified "
                                     "margin (achieved " +
                              std::to_string(margin) + ")");
    }
    model.weights.row(static_cast<Eigen::Index>(k)) = w.transpose();
    model.span_coefficients.row(static_cast<Eigen::Index>(k)) = c.transpose();
    model.margins.push_back(margin);
    model.margin_upper_bounds.push_back(upper);
    model.iterations.push_back(iter);
  }
  return model;
}

Pmf LinearPredictor::Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  // The positive-score restriction never changes the argmax, so a plain
  // argmax with uniform ties implements the rule.
  const Eigen::VectorXd scores = model_.weights * x;
  const double best = scores.maxCoeff();
  Pmf pmf(model_.num_classes, 0.0);
  std::size_t ties = 0;
  for (Eigen::Index k = 0; k < scores.size(); ++k) ties += scores[k] == best;
  for (Eigen::Index k = 0; k < scores.size(); ++k) {
    if (scores[k] == best) pmf[static_cast<std::size_t>(k)] = 1.0 / ties;
  }
  return pmf;
}

NearestNeighborPredictor::NearestNeighborPredictor(
    const MixtureInstance& instance, Mode mode)
    : instance_(&instance), mode_(mode) {
  if (instance.points.rows() == 0) throw InvalidArgument("dataset is empty");
}

Pmf NearestNeighborPredictor::Predict(
    const Eigen::Ref<const Eigen::VectorXd>& x) const {
  const MixtureInstance& inst = *instance_;
  Eigen::Index nearest = 0;
  const double best =
      (inst.points.rowwise() - x.transpose()).rowwise().squaredNorm().minCoeff(
          &nearest);
  const std::size_t m = inst.num_classes;
  const Subpop j = inst.tags[static_cast<std::size_t>(nearest)];
  const Label y = inst.labels[static_cast<std::size_t>(nearest)];
  Pmf pmf(m, 0.0);
  if (mode_ == Mode::kMemorize || inst.Multiplicity(j) != 1) {
    pmf[y] = 1.0;
    return pmf;
  }
  switch (mode_) {
    case Mode::kRefuseSingletons:
      return ModePmf(inst.label_prior, j);
    case Mode::kAntiFitSingletons:
      pmf[(y + 1) % m] = 1.0;
      return pmf;
    case Mode::kAntiFitSingletonsHalved:
      if (best == 0.0) {
        pmf[(y + 1) % m] = 1.0;
      } else {
        pmf[(y + 1) % m] += 0.5;
        pmf[y] += 0.5;
      }
      return pmf;
    case Mode::kMemorize:
      break;
  }
  pmf[y] = 1.0;
  return pmf;
}

namespace {

Pmf MeanFreshPrediction(const VectorPredictor& predictor,
                        const MixtureInstance& instance, Subpop j) {
  const Eigen::MatrixXd& fresh = instance.FreshPoints(j);
  Pmf mean(instance.num_classes, 0.0);
  for (Eigen::Index r = 0; r < fresh.rows(); ++r) {
    const Pmf p = predictor.Predict(fresh.row(r).transpose());
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p[k];
  }
  for (double& v : mean) v /= static_cast<double>(fresh.rows());
  return mean;
}

}  // namespace

double CouplingEstimate(const VectorPredictor& predictor,
                        const MixtureInstance& instance, std::uint64_t ell) {
  double worst = 0.0;
  for (Subpop j : instance.represented) {
    if (instance.Multiplicity(j) != ell) continue;
    const Pmf fresh_mean = MeanFreshPrediction(predictor, instance, j);
    for (std::size_t i = 0; i < instance.tags.size(); ++i) {
      if (instance.tags[i] != j) continue;
      const Pmf at_point = predictor.Predict(
          instance.points.row(static_cast<Eigen::Index>(i)).transpose());
      worst = std::max(worst, TotalVariation(at_point, fresh_mean));
    }
  }
  return 1.0 - worst;
}

std::map<std::uint64_t, double> MixtureErrnProfile(
    const VectorPredictor& predictor, const MixtureInstance& instance) {
  std::map<std::uint64_t, CompensatedSum> sums;
  for (std::size_t i = 0; i < instance.tags.size(); ++i) {
    const std::uint64_t ell = instance.Multiplicity(instance.tags[i]);
    const Pmf p = predictor.Predict(
        instance.points.row(static_cast<Eigen::Index>(i)).transpose());
    sums[ell].Add(1.0 - p[instance.labels[i]]);
  }
  std::map<std::uint64_t, double> out;
  for (const auto& [ell, sum] : sums) {
    out[ell] = sum.Total() / static_cast<double>(ell);
  }
  return out;
}

bool IsClustered(const MixtureInstance& instance) {
  std::vector<const Eigen::MatrixXd*> blocks;
  std::vector<Eigen::Index> rows;
  std::vector<Subpop> tags;
  Eigen::Index total = instance.points.rows();
  for (const Eigen::MatrixXd& f : instance.fresh) total += f.rows();
  Eigen::MatrixXd all(total, instance.points.cols());
  all.topRows(instance.points.rows()) = instance.points;
  tags = instance.tags;
  Eigen::Index at = instance.points.rows();
  for (std::size_t k = 0; k < instance.fresh.size(); ++k) {
    const Eigen::MatrixXd& f = instance.fresh[k];
    all.middleRows(at, f.rows()) = f;
    at += f.rows();
    tags.insert(tags.end(), static_cast<std::size_t>(f.rows()),
                instance.represented[k]);
  }
  double max_intra = 0.0;
  double min_inter = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < total; ++a) {
    for (Eigen::Index b = a + 1; b < total; ++b) {
      const double dist = (all.row(a) - all.row(b)).squaredNorm();
      if (tags[static_cast<std::size_t>(a)] ==
          tags[static_cast<std::size_t>(b)]) {
        max_intra = std::max(max_intra, dist);
      } else {
        min_inter = std::min(min_inter, dist);
      }
    }
  }
  return max_intra < min_inter;
}

PopulationsBoundResult VerifyPopulationsBound(
    const FrequencyPrior& prior, const LabelPriorSpec& label_prior,
    const MixtureOptions& options, const PredictorFactory& factory,
    std::uint64_t instances, std::uint64_t tau_replicates, Seed seed) {
  label_prior.Validate();
  if (label_prior.kind != LabelPriorSpec::Kind::kIidUniform) {
    throw UnsupportedPrior(
        "the populations bound check needs the iid-uniform label prior");
  }
  if (instances < 2) throw InvalidArgument("need at least two instances");
  if (options.fresh_per_subpop == 0) {
    throw InvalidArgument("fresh points are required");
  }

  struct PerInstance {
    double lhs = 0.0;
    std::map<std::uint64_t, double> weighted_errn;  // lambda_ell * errn_ell
    double lambda1 = 1.0;
  };
  std::vector<PerInstance> results(instances);
  const Seed instance_seed = DeriveSeed(seed, 0);
  ParallelFor(instances, [&](std::size_t r) {
    const MixtureInstance inst = SampleMixtureInstance(
        prior, label_prior, options, DeriveSeed(instance_seed, r));
    const std::unique_ptr<VectorPredictor> h = factory(inst);
    PerInstance& out = results[r];
    CompensatedSum lhs;
    for (std::size_t k = 0; k < inst.represented.size(); ++k) {
      const Subpop j = inst.represented[k];
      const Pmf mean = MeanFreshPrediction(*h, inst, j);
      lhs.Add(inst.coefficients[j] * (1.0 - mean[inst.observed_labels[j]]));
    }
    out.lhs = lhs.Total();
    for (const auto& [ell, errn] : MixtureErrnProfile(*h, inst)) {
      const double lambda = CouplingEstimate(*h, inst, ell);
      if (ell == 1) out.lambda1 = lambda;
      out.weighted_errn[ell] = lambda * errn;
    }
  });

  std::set<std::uint64_t> ells;
  for (const PerInstance& r : results) {
    for (const auto& entry : r.weighted_errn) ells.insert(entry.first);
  }
  const FrequencySampleSet samples = MarginalSamples(
      prior, prior.size(), tau_replicates, DeriveSeed(seed, 1));
  std::map<std::uint64_t, double> tau;
  for (std::uint64_t ell : ells) tau[ell] = Tau(samples, ell, options.n);

  CompensatedSum lhs_sum, rhs_sum, gap_sum, gap_sq, lambda_sum;
  for (const PerInstance& r : results) {
    double rhs = 0.0;
    for (const auto& [ell, value] : r.weighted_errn) rhs += tau[ell] * value;
    lhs_sum.Add(r.lhs);
    rhs_sum.Add(rhs);
    gap_sum.Add(r.lhs - rhs);
    gap_sq.Add((r.lhs - rhs) * (r.lhs - rhs));
    lambda_sum.Add(r.lambda1);
  }
  const auto count = static_cast<double>(instances);
  PopulationsBoundResult out;
  out.lhs_excess = lhs_sum.Total() / count;
  out.rhs_sum = rhs_sum.Total() / count;
  out.gap = gap_sum.Total() / count;
  const double variance =
      std::max(0.0, (gap_sq.Total() - count * out.gap * out.gap) / (count - 1));
  out.gap_standard_error = std::sqrt(variance / count);
  out.mean_lambda1 = lambda_sum.Total() / count;
  return out;
}

}  // namespace tail_ledger
