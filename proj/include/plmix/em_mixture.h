// Copyright 2026 The plmix Authors
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

#ifndef PLMIX_EM_MIXTURE_H_
#define PLMIX_EM_MIXTURE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "plmix/ls_estimator.h"
#include "plmix/rankings.h"
#include "plmix/spectral_cluster.h"
#include "plmix/weighted_lsr.h"

namespace plmix {

enum class InitKind { kSpectral, kRandom, kProvided };

struct EmConfig {
  InitKind init = InitKind::kSpectral;
  Link link = Link::kLogit;
  double em_tol = 1e-8;  // relative log-likelihood improvement
  int max_em_iter = 200;
  double lsr_tol = 1e-8;
  std::uint64_t seed = 0;
  // Keep beta at its initial value instead of re-estimating it.
  bool fix_beta = false;
  // Spectral clustering gap threshold; defaults to default_threshold(n, m).
  std::optional<double> threshold;
  // Starting point when init == kProvided.
  std::optional<MixtureParams> initial;
};

struct FitReport {
  MixtureParams mix;
  MixtureParams init_mix;
  std::vector<double> loglik_trace;
  int n_iter = 0;
  bool converged = false;
  InitKind init_kind = InitKind::kSpectral;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds
  // Threshold and selected rank of the spectral initializer, when used.
  std::optional<double> threshold;
  std::optional<int> r_hat;
  // Iterations at which a degenerate component was reseeded.
  std::vector<int> reseed_iterations;
};

struct SpectralInitResult {
  MixtureParams mix;
  ClusterAssignment clusters;  // per embedded row
  std::vector<int> ranking_labels;
  double threshold = 0.0;
};

struct MStepResult {
  Eigen::MatrixXd thetas;
  std::vector<int> degenerate;  // components that were reseeded
};

struct SelectKResult {
  int best_k = 0;
  std::vector<int> candidates;
  std::vector<double> bic;
  std::vector<FitReport> reports;
};

// Posterior class probabilities, normalized per row in log space.
Eigen::MatrixXd e_step(const RankingDataset& data, const MixtureParams& mix);

// One weighted LSR solve per component with weights Q(:, k), warm-started at
// the previous component. A component whose (multiplicity-weighted) posterior
// mass falls below 1e-8 * m is reseeded near the heaviest component instead.
MStepResult m_step(const RankingDataset& data, const ChoiceBreaking& B,
                   const Eigen::MatrixXd& Q, const MixtureParams& prev,
                   const LsrOptions& options, Rng& rng);

// beta_k = multiplicity-weighted column mean of Q.
Eigen::VectorXd update_mixing(const Eigen::MatrixXd& Q,
                              std::span<const double> multiplicities = {});

SpectralInitResult spectral_init_with_clusters(
    const RankingDataset& data, int K, Link link, Rng& rng,
    std::optional<double> threshold = std::nullopt);

MixtureParams spectral_init(const RankingDataset& data, int K, Link link,
                            Rng& rng,
                            std::optional<double> threshold = std::nullopt);

// Columns i.i.d. N(0, I_n), centered; beta uniform.
MixtureParams random_init(int n, int K, Rng& rng);

FitReport fit_em(const RankingDataset& data, int K, const EmConfig& config);

// Free parameters of a K-component mixture over n items.
int mixture_dof(int n, int K);

// d ln(m_val) - 2 * validation log-likelihood.
double bic(const FitReport& fit, const RankingDataset& validation);

// Fits every candidate K on `train` and keeps the lowest validation BIC
// (ties go to the smaller K).
SelectKResult select_k(const RankingDataset& train,
                       const RankingDataset& validation,
                       std::span<const int> k_candidates,
                       const EmConfig& config);

}  // namespace plmix

#endif  // PLMIX_EM_MIXTURE_H_
