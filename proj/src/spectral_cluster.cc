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

#include "plmix/spectral_cluster.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace plmix {

namespace {

constexpr Eigen::Index kDirectSvdMaxColumns = 4096;

// Zeroes numerically-null singular values and pads to `rank` entries.
Eigen::VectorXd tidy_spectrum(const Eigen::VectorXd& s, int rank) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(rank);
  const Eigen::Index avail = std::min<Eigen::Index>(rank, s.size());
  out.head(avail) = s.head(avail);
  const double cutoff = s.size() > 0 ? 1e-10 * s(0) : 0.0;
  for (Eigen::Index i = 0; i < rank; ++i) {
    if (out(i) < cutoff) out(i) = 0.0;
  }
  return out;
}

double squared_distance(const Eigen::MatrixXd& points, Eigen::Index row,
                        const Eigen::MatrixXd& centers, Eigen::Index k) {
  return (points.row(row) - centers.row(k)).squaredNorm();
}

Eigen::MatrixXd seed_centers(const Eigen::MatrixXd& points, int K, Rng& rng) {
  const Eigen::Index p = points.rows();
  Eigen::MatrixXd centers(K, points.cols());
  std::uniform_int_distribution<Eigen::Index> pick(0, p - 1);
  centers.row(0) = points.row(pick(rng));
  Eigen::VectorXd d2(p);
  for (Eigen::Index i = 0; i < p; ++i) d2(i) = squared_distance(points, i, centers, 0);

  // Greedy k-means++: draw several D^2-weighted candidates, keep the one
  // that lowers the potential most.
  const int trials = 2 + static_cast<int>(std::log(static_cast<double>(K)));
  for (int k = 1; k < K; ++k) {
    Eigen::Index best_candidate = 0;
    double best_potential = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_d2;
    const double total = d2.sum();
    for (int t = 0; t < trials; ++t) {
      Eigen::Index c;
      if (total > 0.0) {
        std::discrete_distribution<Eigen::Index> draw(d2.data(), d2.data() + p);
        c = draw(rng);
      } else {
        c = pick(rng);
      }
      Eigen::VectorXd cand(p);
      for (Eigen::Index i = 0; i < p; ++i) {
        cand(i) = std::min(d2(i), (points.row(i) - points.row(c)).squaredNorm());
      }
      const double potential = cand.sum();
      if (potential < best_potential) {
        best_potential = potential;
        best_candidate = c;
        best_d2 = std::move(cand);
      }
    }
    centers.row(k) = points.row(best_candidate);
    d2 = std::move(best_d2);
  }
  return centers;
}

KMeansResult lloyd(const Eigen::MatrixXd& points, int K, Rng& rng,
                   int max_iter) {
  const Eigen::Index p = points.rows();
  KMeansResult res;
  res.centers = seed_centers(points, K, rng);
  res.labels.assign(p, -1);
  Eigen::VectorXd cost(p);

  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < p; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, res.centers, 0);
      for (int k = 1; k < K; ++k) {
        const double d = squared_distance(points, i, res.centers, k);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (res.labels[i] != best) changed = true;
      res.labels[i] = best;
      cost(i) = best_d;
    }

    // Repair empty clusters by stealing the point farthest from its center.
    std::vector<Eigen::Index> sizes(K, 0);
    for (int z : res.labels) ++sizes[z];
    for (int k = 0; k < K; ++k) {
      if (sizes[k] > 0) continue;
      Eigen::Index far = 0;
      for (Eigen::Index i = 1; i < p; ++i) {
        if (sizes[res.labels[i]] > 1 &&
            (sizes[res.labels[far]] <= 1 || cost(i) > cost(far))) {
          far = i;
        }
      }
      --sizes[res.labels[far]];
      res.labels[far] = k;
      ++sizes[k];
      res.centers.row(k) = points.row(far);
      cost(far) = 0.0;
      changed = true;
    }
    res.objective_trace.push_back(cost.sum());
    if (!changed && iter > 0) break;

    res.centers.setZero();
    for (Eigen::Index i = 0; i < p; ++i) res.centers.row(res.labels[i]) += points.row(i);
    for (int k = 0; k < K; ++k) res.centers.row(k) /= static_cast<double>(sizes[k]);
  }

  res.objective = 0.0;
  for (Eigen::Index i = 0; i < p; ++i) {
    res.objective += squared_distance(points, i, res.centers, res.labels[i]);
  }
  res.objective_trace.push_back(res.objective);
  return res;
}

}  // namespace

SvdFactors truncated_svd(const Eigen::MatrixXd& X, int rank) {
  SvdFactors f;
  if (X.cols() <= kDirectSvdMaxColumns) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
    f.singular_values = tidy_spectrum(svd.singularValues(), rank);
    const Eigen::Index keep = std::min<Eigen::Index>(rank, svd.matrixV().cols());
    f.right_vectors = svd.matrixV().leftCols(keep);
    return f;
  }
  // Wide case: eigendecompose the smaller Gram matrix.
  const bool row_gram = X.rows() <= X.cols();
  const Eigen::MatrixXd gram =
      row_gram ? Eigen::MatrixXd(X * X.transpose()) : Eigen::MatrixXd(X.transpose() * X);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::Index dim = gram.rows();
  Eigen::VectorXd s(dim);
  Eigen::MatrixXd vecs(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    s(i) = std::sqrt(std::max(0.0, eig.eigenvalues()(dim - 1 - i)));
    vecs.col(i) = eig.eigenvectors().col(dim - 1 - i);
  }
  f.singular_values = tidy_spectrum(s, rank);
  const Eigen::Index keep = std::min<Eigen::Index>(rank, dim);
  if (!row_gram) {
    f.right_vectors = vecs.leftCols(keep);
    return f;
  }
  f.right_vectors.resize(X.cols(), keep);
  for (Eigen::Index i = 0; i < keep; ++i) {
    if (f.singular_values(i) > 0.0) {
      f.right_vectors.col(i) = X.transpose() * vecs.col(i) / s(i);
    } else {
      f.right_vectors.col(i).setZero();
    }
  }
  return f;
}

int select_rank(std::span<const double> singular_values, int K, double T) {
  auto sv = [&](int a) {  // 1-based, zero beyond the provided values
    return a <= static_cast<int>(singular_values.size()) ? singular_values[a - 1]
                                                         : 0.0;
  };
  for (int a = K; a >= 1; --a) {
    if (sv(a) - sv(a + 1) >= T) return a;
  }
  return K;
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int K, Rng& rng,
                    const KMeansOptions& options) {
  if (K < 1) throw Error("k-means needs at least one cluster");
  if (points.rows() < K) throw Error("k-means needs at least K points");
  std::vector<Rng::result_type> seeds(std::max(1, options.restarts));
  for (auto& s : seeds) s = rng();

  KMeansResult best;
  bool have = false;
  for (auto seed : seeds) {
    Rng stream(seed);
    KMeansResult r = lloyd(points, K, stream, options.max_iter);
    if (!have || r.objective < best.objective) {
      best = std::move(r);
      have = true;
    }
  }
  return best;
}

ClusterAssignment spectral_cluster(const Eigen::MatrixXd& X, int K, double T,
                                   Rng& rng) {
  if (X.rows() < K) throw Error("spectral clustering needs at least K rows");
  const SvdFactors f = truncated_svd(X, K + 1);
  int r_hat = select_rank(
      std::span<const double>(f.singular_values.data(), f.singular_values.size()),
      K, T);
  r_hat = std::min<int>(r_hat, static_cast<int>(f.right_vectors.cols()));
  const Eigen::MatrixXd projected = X * f.right_vectors.leftCols(r_hat);
  KMeansResult km = kmeans(projected, K, rng);
  return {std::move(km.labels), std::move(km.centers), r_hat};
}

double default_threshold(double n, double m) {
  if (!(n >= 2.0)) throw Error("threshold requires n >= 2");
  return std::sqrt(n) * std::sqrt(m + n) * std::sqrt(std::log(n));
}

double misclustering_rate(std::span<const int> z, std::span<const int> z_star,
                          int K) {
  if (z.size() != z_star.size()) throw Error("label vectors differ in length");
  if (z.empty()) throw Error("label vectors are empty");
  Eigen::MatrixXd agree = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (z[l] < 0 || z[l] >= K || z_star[l] < 0 || z_star[l] >= K) {
      throw Error("label outside [0, K)");
    }
    agree(z[l], z_star[l]) += 1.0;
  }
  const auto match = solve_assignment(-agree);
  double hits = 0.0;
  for (int k = 0; k < K; ++k) hits += agree(k, match[k]);
  return 1.0 - hits / static_cast<double>(z.size());
}

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials over 1-based rows/columns; column 0 is a virtual root.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    row_of[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = row_of[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) assignment[row_of[j] - 1] = j - 1;
  return assignment;
}

}  // namespace plmix
