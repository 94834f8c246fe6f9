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

#include "plmix/ls_estimator.h"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

namespace plmix {

PairwisePreferenceMatrix estimate_pairwise(
    const RankingDataset& data, std::span<const std::size_t> members) {
  if (members.empty()) throw Error("cannot estimate preferences from an empty member set");
  const int n = data.n();
  Eigen::MatrixXd wins = Eigen::MatrixXd::Zero(n, n);
  double total = 0.0;
  for (std::size_t l : members) {
    const Ranking& r = data.ranking(l);
    if (static_cast<int>(r.size()) != n) {
      throw Error("pairwise estimation requires full rankings");
    }
    const double w = data.multiplicity(l);
    total += w;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) wins(r[a], r[b]) += w;
    }
  }
  PairwisePreferenceMatrix P{Eigen::MatrixXd::Constant(n, n, 0.5), total};
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      P.probs(i, j) = wins(i, j) / total;
      P.probs(j, i) = 1.0 - P.probs(i, j);
    }
  }
  return P;
}

double default_clamp(double count) {
  return std::max(1.0 / (2.0 * std::max(count, 1.0)), 1e-6);
}

Eigen::MatrixXd link_transform(const PairwisePreferenceMatrix& P, Link link,
                               double clamp) {
  if (!(clamp > 0.0 && clamp < 0.5)) throw Error("clamp must lie in (0, 0.5)");
  const Eigen::Index n = P.probs.rows();
  const boost::math::normal_distribution<double> std_normal;
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double p = std::clamp(P.probs(i, j), clamp, 1.0 - clamp);
      const double v = link == Link::kLogit
                           ? std::log(p / (1.0 - p))
                           : std::sqrt(2.0) * boost::math::quantile(std_normal, p);
      phi(i, j) = v;
      phi(j, i) = -v;
    }
  }
  return phi;
}

double inverse_link(double phi, Link link) {
  if (link == Link::kLogit) return 1.0 / (1.0 + std::exp(-phi));
  return 0.5 * std::erfc(-phi / 2.0);  // Phi(phi / sqrt 2)
}

Eigen::VectorXd least_squares_fit(const Eigen::MatrixXd& phi) {
  if (phi.rows() != phi.cols()) throw Error("phi must be square");
  if (!phi.allFinite()) throw Error("phi contains non-finite entries");
  const Eigen::Index n = phi.rows();
  Eigen::VectorXd theta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    theta(i) = (phi.row(i).sum() - phi(i, i)) / static_cast<double>(n);
  }
  return centered(theta);
}

Eigen::VectorXd fit_component(const RankingDataset& data,
                              std::span<const std::size_t> members, Link link,
                              std::optional<double> clamp) {
  const PairwisePreferenceMatrix P = estimate_pairwise(data, members);
  const Eigen::MatrixXd phi =
      link_transform(P, link, clamp.value_or(default_clamp(P.count)));
  return least_squares_fit(phi);
}

}  // namespace plmix
