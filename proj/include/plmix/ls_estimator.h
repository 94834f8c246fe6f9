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

#ifndef PLMIX_LS_ESTIMATOR_H_
#define PLMIX_LS_ESTIMATOR_H_

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "plmix/rankings.h"

namespace plmix {

// Empirical pairwise win probabilities; probs(i, j) + probs(j, i) = 1 off the
// diagonal, and the diagonal holds 0.5.
struct PairwisePreferenceMatrix {
  Eigen::MatrixXd probs;
  double count = 0.0;  // total multiplicity the estimate was built from
};

enum class Link { kLogit, kProbit };

// Estimates P(i above j) from the member rankings, weighting each by its
// multiplicity. Members must be full rankings.
PairwisePreferenceMatrix estimate_pairwise(const RankingDataset& data,
                                           std::span<const std::size_t> members);

// Clamp used when the caller does not supply one: half a pseudo-count at the
// estimate's resolution, floored at 1e-6.
double default_clamp(double count);

// Maps clipped probabilities to skew-symmetric pairwise utility differences:
// logit ln(p / (1 - p)), or probit sqrt(2) * inverse-normal-cdf(p).
Eigen::MatrixXd link_transform(const PairwisePreferenceMatrix& P, Link link,
                               double clamp);

// Inverse of link_transform for a single difference.
double inverse_link(double phi, Link link);

// Mean-zero minimizer of sum_{i != j} (phi_ij - (theta_i - theta_j))^2, which
// is theta_i = (1/n) sum_{j != i} phi_ij.
Eigen::VectorXd least_squares_fit(const Eigen::MatrixXd& phi);

// estimate_pairwise -> link_transform -> least_squares_fit.
Eigen::VectorXd fit_component(const RankingDataset& data,
                              std::span<const std::size_t> members, Link link,
                              std::optional<double> clamp = std::nullopt);

}  // namespace plmix

#endif  // PLMIX_LS_ESTIMATOR_H_
