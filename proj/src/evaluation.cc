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

#include "plmix/evaluation.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plmix/spectral_cluster.h"

namespace plmix {

double dist_metric(const MixtureParams& theta_hat,
                   const MixtureParams& theta_star) {
  if (theta_hat.thetas.rows() != theta_star.thetas.rows() ||
      theta_hat.thetas.cols() != theta_star.thetas.cols()) {
    throw Error("dist: parameter shapes differ");
  }
  const int K = theta_star.K();
  MixtureParams a = theta_hat;
  MixtureParams b = theta_star;
  a.normalize();
  b.normalize();
  Eigen::MatrixXd cost(K, K);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      cost(i, j) = (a.thetas.col(i) - b.thetas.col(j)).squaredNorm();
    }
  }
  const auto match = solve_assignment(cost);
  double total = 0.0;
  for (int i = 0; i < K; ++i) total += cost(i, match[i]);
  return std::sqrt(total);
}

std::vector<int> hard_labels(const Eigen::MatrixXd& Q) {
  std::vector<int> z(Q.rows());
  for (Eigen::Index l = 0; l < Q.rows(); ++l) {
    Eigen::Index k = 0;
    Q.row(l).maxCoeff(&k);
    z[l] = static_cast<int>(k);
  }
  return z;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t h = values.size() / 2;
  return values.size() % 2 ? values[h] : 0.5 * (values[h - 1] + values[h]);
}

}  // namespace plmix
