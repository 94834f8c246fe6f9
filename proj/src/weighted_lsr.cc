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

#include "plmix/weighted_lsr.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace plmix {

namespace {

double sup_norm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

Eigen::VectorXd normalized_probability(Eigen::VectorXd p) {
  p = p.cwiseMax(0.0);
  return p / p.sum();
}

Eigen::VectorXd softmax(const Eigen::VectorXd& theta) {
  Eigen::VectorXd p = (theta.array() - theta.maxCoeff()).exp();
  return p / p.sum();
}

void check_weights(std::span<const double> q, std::size_t m) {
  if (q.size() != m) {
    throw Error("weight vector has " + std::to_string(q.size()) +
                " entries for " + std::to_string(m) + " rankings");
  }
  double total = 0.0;
  for (double v : q) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error("weights must be nonnegative and finite");
    total += v;
  }
  if (!(total > 0.0)) throw Error("weights must have a positive sum");
}

}  // namespace

std::vector<double> expand_weights(std::span<const double> q,
                                   std::span<const std::size_t> lengths) {
  if (q.size() != lengths.size()) throw Error("weights and ranking lengths differ in size");
  std::vector<double> w;
  for (std::size_t l = 0; l < q.size(); ++l) {
    if (lengths[l] < 1) throw Error("ranking length must be positive");
    w.insert(w.end(), lengths[l] - 1, q[l]);
  }
  return w;
}

Eigen::MatrixXd transition_masses(const ChoiceBreaking& B,
                                  std::span<const double> w,
                                  const Eigen::VectorXd& theta) {
  if (w.size() != B.size()) throw Error("weight vector does not match the choice breaking");
  const Eigen::VectorXd strength = (theta.array() - theta.maxCoeff()).exp();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(B.n, B.n);
  for (std::size_t e = 0; e < B.size(); ++e) {
    if (w[e] == 0.0) continue;
    const auto set = B.choice_set(e);
    double denom = 0.0;
    for (int k : set) denom += strength(k);
    const double g = w[e] / denom;
    const int winner = B.enumerations[e].winner;
    for (int i : set) {
      if (i != winner) mass(i, winner) += g;
    }
  }
  return mass;
}

WeightedMarkovChain build_chain(const ChoiceBreaking& B,
                                std::span<const double> w,
                                const Eigen::VectorXd& theta, int n) {
  if (B.n != n || theta.size() != n) throw Error("chain dimension mismatch");
  WeightedMarkovChain chain;
  chain.M = transition_masses(B, w, theta);
  const Eigen::VectorXd out = chain.M.rowwise().sum();
  const double max_out = out.size() ? out.maxCoeff() : 0.0;
  chain.d = max_out > 0.0 ? max_out * (1.0 + 1e-12) : 1.0;
  chain.M /= chain.d;
  for (int i = 0; i < n; ++i) chain.M(i, i) = 1.0 - out(i) / chain.d;
  return chain;
}

Eigen::VectorXd stationary_distribution(const WeightedMarkovChain& chain,
                                        const StationaryOptions& options,
                                        const Eigen::VectorXd* start) {
  const Eigen::Index n = chain.M.rows();
  const int max_iter = options.max_iter > 0 ? options.max_iter
                                            : 100 * static_cast<int>(n);
  Eigen::VectorXd p = start ? normalized_probability(*start)
                            : Eigen::VectorXd::Constant(n, 1.0 / n);
  Eigen::VectorXd prev = p;
  const Eigen::MatrixXd Mt = chain.M.transpose();
  double residual = 0.0;
  for (int t = 0; t < max_iter; ++t) {
    Eigen::VectorXd next = normalized_probability(Mt * p);
    residual = sup_norm(next - p);
    if (residual <= options.tol) return p;
    if (t > 0 && sup_norm(next - prev) <= options.tol) {
      // Period-two oscillation: the midpoint is stationary.
      Eigen::VectorXd mid = normalized_probability(0.5 * (p + next));
      if (sup_norm(normalized_probability(Mt * mid) - mid) <= options.tol) return mid;
    }
    prev = std::move(p);
    p = std::move(next);
  }
  if (options.direct_fallback) {
    // Replace one balance equation by the normalization constraint.
    Eigen::MatrixXd A = Mt - Eigen::MatrixXd::Identity(n, n);
    A.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    Eigen::VectorXd direct = A.fullPivLu().solve(rhs);
    if (direct.allFinite() && direct.minCoeff() > -1e-9) {
      direct = normalized_probability(direct.cwiseMax(0.0));
      const double r = sup_norm(Mt * direct - direct);
      if (r <= options.tol) return direct;
      residual = std::min(residual, r);
    }
  }
  char msg[96];
  std::snprintf(msg, sizeof msg, "stationary distribution did not converge (residual %.3g)",
                residual);
  throw ConvergenceError(msg, residual);
}

bool strongly_connected(const ChoiceBreaking& B, std::span<const double> w) {
  const int n = B.n;
  if (w.size() != B.size()) throw Error("weight vector does not match the choice breaking");
  const double w_max = w.empty() ? 0.0 : *std::max_element(w.begin(), w.end());
  const double cutoff = 1e-12 * w_max;
  std::vector<std::vector<char>> edge(n, std::vector<char>(n, 0));
  for (std::size_t e = 0; e < B.size(); ++e) {
    if (!(w[e] > 0.0) || w[e] < cutoff) continue;
    const int winner = B.enumerations[e].winner;
    for (int i : B.choice_set(e)) {
      if (i != winner) edge[i][winner] = 1;
    }
  }
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < n; ++v) {
        const bool adj = forward ? edge[u][v] : edge[v][u];
        if (adj && !seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      }
    }
    return count == n;
  };
  return reaches_all(true) && reaches_all(false);
}

std::vector<double> enumeration_weights(const RankingDataset& data,
                                        std::span<const double> q) {
  check_weights(q, data.size());
  std::vector<double> per_ranking(data.size());
  std::vector<std::size_t> lengths(data.size());
  for (std::size_t l = 0; l < data.size(); ++l) {
    per_ranking[l] = q[l] * data.multiplicity(l);
    lengths[l] = data.ranking(l).size();
  }
  return expand_weights(per_ranking, lengths);
}

double fixed_point_residual(const ChoiceBreaking& B, std::span<const double> w,
                            const Eigen::VectorXd& theta) {
  const WeightedMarkovChain chain = build_chain(B, w, theta, B.n);
  const Eigen::VectorXd p = softmax(theta);
  return sup_norm(chain.M.transpose() * p - p);
}

LsrResult weighted_lsr(const RankingDataset& data, std::span<const double> q,
                       const Eigen::VectorXd& theta0,
                       const LsrOptions& options) {
  return weighted_lsr(data, choice_breaking(data), q, theta0, options);
}

LsrResult weighted_lsr(const RankingDataset& data, const ChoiceBreaking& B,
                       std::span<const double> q,
                       const Eigen::VectorXd& theta0,
                       const LsrOptions& options) {
  const int n = data.n();
  const std::vector<double> w = enumeration_weights(data, q);
  if (w.size() != B.size()) throw Error("choice breaking does not match the dataset");
  if (!strongly_connected(B, w)) {
    throw DisconnectedError("comparison graph disconnected under weights");
  }
  LsrResult res;
  res.theta = theta0.size() == 0 ? Eigen::VectorXd::Zero(n) : centered(theta0);
  if (res.theta.size() != n) throw Error("initial estimate has the wrong length");

  for (int t = 1; t <= options.max_iter; ++t) {
    const WeightedMarkovChain chain = build_chain(B, w, res.theta, n);
    const Eigen::VectorXd warm = softmax(res.theta);
    const Eigen::VectorXd p = stationary_distribution(chain, options.stationary, &warm);
    const Eigen::VectorXd log_p = p.array().log();
    const Eigen::VectorXd next = log_p.array() - log_p.mean();
    if (!next.allFinite()) throw Error("stationary distribution has zero entries");
    const double step = sup_norm(next - res.theta);
    res.theta = next;
    res.iterations = t;
    if (step <= options.tol) {
      res.fixed_point_residual = fixed_point_residual(B, w, res.theta);
      return res;
    }
  }
  throw ConvergenceError("weighted LSR did not converge in " +
                             std::to_string(options.max_iter) + " iterations",
                         fixed_point_residual(B, w, res.theta));
}

double weighted_log_likelihood(const RankingDataset& data,
                               std::span<const double> q,
                               const Eigen::VectorXd& theta) {
  if (q.size() != data.size()) throw Error("weights do not match the dataset");
  double total = 0.0;
  for (std::size_t l = 0; l < data.size(); ++l) {
    if (q[l] == 0.0) continue;
    total += q[l] * data.multiplicity(l) * pl_log_likelihood(data.ranking(l), theta);
  }
  return total;
}

}  // namespace plmix
