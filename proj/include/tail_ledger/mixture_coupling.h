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

// The continuous mixture model: subpopulations are balls of radius at most 1
// around random unit centers in R^d, mixed with coefficients drawn from a
// frequency prior. Also (tau, theta)-independence certificates, the explicit
// margin construction, an approximate max-margin multiclass linear learner
// and subpopulation-coupling measurements.

#ifndef TAIL_LEDGER_MIXTURE_COUPLING_H_
#define TAIL_LEDGER_MIXTURE_COUPLING_H_

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "tail_ledger/discrete_model.h"
#include "tail_ledger/learners.h"
#include "tail_ledger/prior_model.h"
#include "tail_ledger/random.h"

namespace tail_ledger {

using Subpop = std::uint32_t;

struct MixtureOptions {
  std::size_t dimension = 2;
  std::size_t num_subpops = 1;
  std::size_t n = 1;
  std::size_t fresh_per_subpop = 0;
  // Offsets have uniform direction and radius uniform on [0, offset_radius].
  // 1 gives the spherical model; small values give clustered geometry.
  double offset_radius = 1.0;
};

struct MixtureInstance {
  std::size_t dimension = 0;
  std::size_t num_subpops = 0;
  Seed seed = 0;
  LabelPriorSpec label_prior;
  std::vector<double> coefficients;
  std::vector<Label> true_labels;      // per subpopulation
  std::vector<Label> observed_labels;  // per subpopulation
  std::size_t num_classes = 0;
  // Represented subpopulations in increasing order and their centers (rows).
  std::vector<Subpop> represented;
  Eigen::MatrixXd centers;
  // Dataset: one row per example.
  Eigen::MatrixXd points;
  std::vector<Subpop> tags;
  std::vector<Label> labels;
  // fresh[k] holds extra draws from represented[k], one per row.
  std::vector<Eigen::MatrixXd> fresh;

  // Number of examples tagged with subpopulation j.
  std::uint32_t Multiplicity(Subpop j) const;
  // Index into `represented`, or -1.
  std::ptrdiff_t RepresentedIndex(Subpop j) const;
  const Eigen::MatrixXd& FreshPoints(Subpop j) const;

  // CSV "subpop,label,coord_0..coord_{d-1}" with one row per example.
  void WriteGeometryCsv(std::ostream& out) const;
};

MixtureInstance SampleMixtureInstance(const FrequencyPrior& prior,
                                      const LabelPriorSpec& label_prior,
                                      const MixtureOptions& options,
                                      Seed seed);

struct IndependenceCertificate {
  // Minimum normalized inner product within a subpopulation; 1 when no
  // subpopulation has two points.
  double tau_measured = 1.0;
  // Maximum norm of the projection of a normalized point onto the span of the
  // points from other subpopulations.
  double theta_measured = 0.0;

  bool Satisfied(double tau, double theta) const {
    return tau_measured >= tau && theta_measured <= theta;
  }
};

inline constexpr double kSpanTolerance = 1e-9;

// Rows of `points` are the vectors; tags give their subpopulations.
// Projections are computed from the Gram matrix of the other-subpopulation
// points; eigen-directions below kSpanTolerance times the largest eigenvalue
// are treated as outside the span.
IndependenceCertificate ComputeIndependenceCertificate(
    const Eigen::MatrixXd& points, const std::vector<Subpop>& tags);

// V together with the first fresh point of every singleton subpopulation.
IndependenceCertificate CertifyInstance(const MixtureInstance& instance);

// tau = min(tau_measured, 1/2), theta = tau^2 / (8 sqrt(n)).
double CertificateTau(const IndependenceCertificate& c);
double CertificateTheta(const IndependenceCertificate& c, std::size_t n);
bool IsCertified(const IndependenceCertificate& c, std::size_t n);

struct ReferenceSeparator {
  Eigen::VectorXd w;  // unit norm
  double margin = 0.0;
  double unnormalized_norm = 0.0;
};

// w = sum_j z_j xbar_j over the first example of each subpopulation, with
// z_j = +1 for class k and -1 otherwise; margin is the minimum over all
// examples of z * <xbar_i, wbar>.
ReferenceSeparator ReferenceMarginConstruction(const Eigen::MatrixXd& points,
                                               const std::vector<Subpop>& tags,
                                               const std::vector<Label>& labels,
                                               Label k);

struct LinearModel {
  std::size_t num_classes = 0;
  // Row k is w_k, unit norm.
  Eigen::MatrixXd weights;
  // Row k holds c with w_k = sum_i c_i x_i over the training points.
  Eigen::MatrixXd span_coefficients;
  // Achieved margin min_i z_i <w_k, x_i> / |x_i| of each one-vs-rest split.
  std::vector<double> margins;
  // Certified upper bounds on the best achievable margin of each split.
  std::vector<double> margin_upper_bounds;
  std::vector<std::size_t> iterations;
};

struct MaxMarginOptions {
  double tolerance = 0.05;
  std::size_t max_iterations = 200000;
};

// Hard-margin one-vs-rest separators through the origin, by pairwise
// Frank-Wolfe on the dual (minimum-norm point of the signed normalized
// examples' convex hull). Stops once the achieved margin is within
// `tolerance` of the certified optimum. Throws SeparationFailure when a
// split is not separable.
LinearModel TrainApproxMaxMargin(const Eigen::MatrixXd& points,
                                 const std::vector<Label>& labels,
                                 std::size_t num_classes,
                                 const MaxMarginOptions& options = {});

class VectorPredictor {
 public:
  virtual ~VectorPredictor() = default;
  virtual Pmf Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const = 0;
};

class ConstantPredictor : public VectorPredictor {
 public:
  explicit ConstantPredictor(Pmf pmf) : pmf_(std::move(pmf)) {}
  Pmf Predict(const Eigen::Ref<const Eigen::VectorXd>&) const override {
    return pmf_;
  }

 private:
  Pmf pmf_;
};

// argmax_k <x, w_k> among classes with a positive score, uniform over ties;
// argmax over all classes when no score is positive.
class LinearPredictor : public VectorPredictor {
 public:
  explicit LinearPredictor(LinearModel model) : model_(std::move(model)) {}
  Pmf Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const override;
  const LinearModel& model() const { return model_; }

 private:
  LinearModel model_;
};

// 1-nearest-neighbor over the training points, with variants that treat
// singleton subpopulations differently.
class NearestNeighborPredictor : public VectorPredictor {
 public:
  enum class Mode {
    kMemorize,
    // Label-prior mode (uniform over ties) wherever the nearest training
    // point belongs to a singleton subpopulation.
    kRefuseSingletons,
    // Predicts (y + 1) mod m for singleton subpopulations.
    kAntiFitSingletons,
    // As kAntiFitSingletons on training points; away from them the anti-fit
    // label and the observed label each get probability 1/2.
    kAntiFitSingletonsHalved,
  };

  NearestNeighborPredictor(const MixtureInstance& instance, Mode mode);
  Pmf Predict(const Eigen::Ref<const Eigen::VectorXd>& x) const override;

 private:
  const MixtureInstance* instance_;
  Mode mode_;
};

// 1 - max over training points x of subpopulations with multiplicity ell of
// TV(pmf(x), average of pmf over the fresh draws of that subpopulation).
// Returns 1 when no subpopulation has multiplicity ell. Throws
// InvalidArgument when fresh draws are missing.
double CouplingEstimate(const VectorPredictor& predictor,
                        const MixtureInstance& instance, std::uint64_t ell);

// Subpopulation-level errn: (1/ell) sum over examples whose subpopulation
// occurs ell times of Pr[h(x_i) != y_i].
std::map<std::uint64_t, double> MixtureErrnProfile(
    const VectorPredictor& predictor, const MixtureInstance& instance);

// True when every intra-subpopulation distance (training and fresh points)
// is below every inter-subpopulation distance.
bool IsClustered(const MixtureInstance& instance);

using PredictorFactory =
    std::function<std::unique_ptr<VectorPredictor>(const MixtureInstance&)>;

struct PopulationsBoundResult {
  double lhs_excess = 0.0;
  double rhs_sum = 0.0;
  double gap = 0.0;
  double gap_standard_error = 0.0;
  double mean_lambda1 = 0.0;
};

// For each sampled instance: excess error over the subpopulation memorizer,
// estimated with the fresh draws (unrepresented subpopulations contribute no
// excess because their labels are independent of every prediction), and
// sum_ell lambda_ell tau_ell errn_ell with lambda measured on that instance.
PopulationsBoundResult VerifyPopulationsBound(
    const FrequencyPrior& prior, const LabelPriorSpec& label_prior,
    const MixtureOptions& options, const PredictorFactory& factory,
    std::uint64_t instances, std::uint64_t tau_replicates, Seed seed);

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_MIXTURE_COUPLING_H_
