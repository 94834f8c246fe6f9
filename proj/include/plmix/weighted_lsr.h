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

#ifndef PLMIX_WEIGHTED_LSR_H_
#define PLMIX_WEIGHTED_LSR_H_

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "plmix/rankings.h"

namespace plmix {

// Raised when the weighted comparison graph is not strongly connected, so the
// stationary distribution (and the weighted MLE) is not unique.
class DisconnectedError : public Error {
 public:
  using Error::Error;
};

// Raised when an iterative solve exhausts its iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Row-stochastic chain over the n items. M(i, j) is proportional to the
// weight of the enumerations in which j was chosen while i was available.
struct WeightedMarkovChain {
  Eigen::MatrixXd M;
  double d = 1.0;
};

struct StationaryOptions {
  double tol = 1e-12;
  int max_iter = 0;  // 0 selects 100 * n
  // Solve the balance equations directly when power iteration runs out of
  // iterations on a slowly mixing chain.
  bool direct_fallback = true;
};

struct LsrOptions {
  double tol = 1e-8;  // on max |theta_t - theta_{t-1}|
  int max_iter = 100;
  StationaryOptions stationary;
};

struct LsrResult {
  Eigen::VectorXd theta;  // mean-zero
  int iterations = 0;
  // max |p^T M(p) - p^T| at the returned estimate, p = softmax(theta).
  double fixed_point_residual = 0.0;
};

// Repeats q_l (s_l - 1) times per ranking, matching choice_breaking order.
std::vector<double> expand_weights(std::span<const double> q,
                                   std::span<const std::size_t> lengths);

// Off-diagonal transition masses: mass(i, j) = sum of w / sum_{k in A} e^theta_k
// over enumerations (j, A, l) with i in A. The result is scaled by a common
// positive factor, which leaves the chain unchanged.
Eigen::MatrixXd transition_masses(const ChoiceBreaking& B,
                                  std::span<const double> w,
                                  const Eigen::VectorXd& theta);

// Normalizes the masses with the smallest d that keeps the diagonal
// nonnegative: d = max off-diagonal row sum * (1 + 1e-12).
WeightedMarkovChain build_chain(const ChoiceBreaking& B,
                                std::span<const double> w,
                                const Eigen::VectorXd& theta, int n);

// Power iteration p <- M^T p. Starts from `start` when given, else uniform.
// Averages consecutive iterates when the chain oscillates with period two.
Eigen::VectorXd stationary_distribution(const WeightedMarkovChain& chain,
                                        const StationaryOptions& options = {},
                                        const Eigen::VectorXd* start = nullptr);

// Strong connectivity of the item graph with an edge i -> j whenever some
// enumeration won by j with i available carries weight >= 1e-12 * max(w).
bool strongly_connected(const ChoiceBreaking& B, std::span<const double> w);

// Per-enumeration weights q_l * multiplicity_l.
std::vector<double> enumeration_weights(const RankingDataset& data,
                                        std::span<const double> q);

double fixed_point_residual(const ChoiceBreaking& B, std::span<const double> w,
                            const Eigen::VectorXd& theta);

// Weighted MLE of the PL utilities by iterating the spectral fixed point.
// Ranking l carries weight q_l * multiplicity_l. An empty theta0 starts at 0.
LsrResult weighted_lsr(const RankingDataset& data, std::span<const double> q,
                       const Eigen::VectorXd& theta0 = {},
                       const LsrOptions& options = {});

// Same, reusing a choice breaking of `data` computed by the caller.
LsrResult weighted_lsr(const RankingDataset& data, const ChoiceBreaking& B,
                       std::span<const double> q,
                       const Eigen::VectorXd& theta0 = {},
                       const LsrOptions& options = {});

// sum_l q_l * multiplicity_l * log PL(pi_l | theta).
double weighted_log_likelihood(const RankingDataset& data,
                               std::span<const double> q,
                               const Eigen::VectorXd& theta);

}  // namespace plmix

#endif  // PLMIX_WEIGHTED_LSR_H_
