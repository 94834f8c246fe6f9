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

#ifndef PLMIX_EVALUATION_H_
#define PLMIX_EVALUATION_H_

#include <vector>

#include <Eigen/Dense>

#include "plmix/rankings.h"

namespace plmix {

// Relabeling-minimal Frobenius distance between column-centered utility
// matrices: min over bijections sigma of ||N(theta_hat_sigma) - N(theta_star)||_F.
double dist_metric(const MixtureParams& theta_hat, const MixtureParams& theta_star);

// Most probable component per row of a posterior matrix.
std::vector<int> hard_labels(const Eigen::MatrixXd& Q);

double median(std::vector<double> values);

}  // namespace plmix

#endif  // PLMIX_EVALUATION_H_
