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

#ifndef PLMIX_SPECTRAL_CLUSTER_H_
#define PLMIX_SPECTRAL_CLUSTER_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "plmix/rankings.h"

namespace plmix {

struct ClusterAssignment {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // K x r_hat
  int r_hat = 0;
};

// Leading singular values (nonincreasing) and right singular vectors.
struct SvdFactors {
  Eigen::VectorXd singular_values;
  Eigen::MatrixXd right_vectors;
};

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double objective = 0.0;
  // Objective after every Lloyd iteration of the winning restart.
  std::vector<double> objective_trace;
};

struct KMeansOptions {
  int restarts = 10;
  int max_iter = 100;
};

// Top `rank` singular triplets of X. Uses a thin SVD when X has at most 4096
// columns and a Gram-matrix eigendecomposition otherwise. Singular values
// below 1e-10 * S_1 are reported as 0; the vector is zero-padded to `rank`.
SvdFactors truncated_svd(const Eigen::MatrixXd& X, int rank);

// Largest a in [1, K] with S_a - S_{a+1} >= T, or K when no gap qualifies.
int select_rank(std::span<const double> singular_values, int K, double T);

// Lloyd's algorithm with greedy k-means++ seeding, best of `restarts`.
KMeansResult kmeans(const Eigen::MatrixXd& points, int K, Rng& rng,
                    const KMeansOptions& options = {});

ClusterAssignment spectral_cluster(const Eigen::MatrixXd& X, int K, double T,
                                   Rng& rng);

// sqrt(n) * sqrt(m + n) * sqrt(ln n).
double default_threshold(double n, double m);

// Fraction of disagreements under the best bijective relabeling of z.
double misclustering_rate(std::span<const int> z, std::span<const int> z_star,
                          int K);

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
// Returns assignment[row] = column.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace plmix

#endif  // PLMIX_SPECTRAL_CLUSTER_H_
