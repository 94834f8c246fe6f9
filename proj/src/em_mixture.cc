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

#include "plmix/em_mixture.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace plmix {

Eigen::MatrixXd e_step(const RankingDataset& data, const MixtureParams& mix) {
  const int K = mix.K();
  Eigen::MatrixXd Q(static_cast<Eigen::Index>(data.size()), K);
  std::vector<double> ll(K);
  for (std::size_t l = 0; l < data.size(); ++l) {
    double top = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
      ll[k] = pl_log_likelihood(data.ranking(l), mix.thetas.col(k));
      if (mix.beta(k) > 0.0) top = std::max(top, ll[k]);
    }
    // Shift by the largest log-likelihood so equal components reproduce beta.
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
      const double v = mix.beta(k) > 0.0 ? mix.beta(k) * std::exp(ll[k] - top) : 0.0;
      Q(static_cast<Eigen::Index>(l), k) = v;
      total += v;
    }
    Q.row(static_cast<Eigen::Index>(l)) /= total;
  }
  return Q;
}

MStepResult m_step(const RankingDataset& data, const ChoiceBreaking& B,
                   const Eigen::MatrixXd& Q, const MixtureParams& prev,
                   const LsrOptions& options, Rng& rng) {
  const int K = static_cast<int>(Q.cols());
  const Eigen::Map<const Eigen::VectorXd> mult(data.multiplicities().data(),
                                               static_cast<Eigen::Index>(data.size()));
  const Eigen::VectorXd mass = Q.transpose() * mult;
  const double floor = 1e-8 * data.total_weight();

  MStepResult out{prev.thetas, {}};
  for (int k = 0; k < K; ++k) {
    if (mass(k) < floor) {
      out.degenerate.push_back(k);
      continue;
    }
    const Eigen::VectorXd q = Q.col(k);
    try {
      out.thetas.col(k) =
          weighted_lsr(data, B, std::span<const double>(q.data(), q.size()),
                       prev.thetas.col(k), options)
              .theta;
    } catch (const DisconnectedError& e) {
      throw DisconnectedError("component " + std::to_string(k) + ": " + e.what());
    }
  }
  if (!out.degenerate.empty()) {
    Eigen::Index heaviest = 0;
    mass.maxCoeff(&heaviest);
    std::normal_distribution<double> jitter(0.0, 0.1);
    for (int k : out.degenerate) {
      Eigen::VectorXd theta = out.thetas.col(heaviest);
      for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) += jitter(rng);
      out.thetas.col(k) = centered(theta);
      std::clog << "plmix: warning: component " << k
                << " lost its posterior mass; reseeded near component "
                << heaviest << "\n";
    }
  }
  return out;
}

Eigen::VectorXd update_mixing(const Eigen::MatrixXd& Q,
                              std::span<const double> multiplicities) {
  if (multiplicities.empty()) {
    return Q.colwise().mean().transpose();
  }
  if (multiplicities.size() != static_cast<std::size_t>(Q.rows())) {
    throw Error("multiplicities do not match posterior rows");
  }
  const Eigen::Map<const Eigen::VectorXd> mult(multiplicities.data(), Q.rows());
  Eigen::VectorXd beta = Q.transpose() * mult;
  return beta / mult.sum();
}

SpectralInitResult spectral_init_with_clusters(const RankingDataset& data,
                                               int K, Link link, Rng& rng,
                                               std::optional<double> threshold) {
  if (K < 1) throw Error("number of components must be at least 1");
  const PairwiseEmbedding emb = embed_pairwise(data);
  const auto rows = static_cast<Eigen::Index>(emb.source.size());
  if (rows < K) throw Error("spectral initialization needs at least K rankings");
  const bool expanded = data.integral_multiplicities();

  SpectralInitResult res;
  res.threshold = threshold.value_or(default_threshold(data.n(), static_cast<double>(rows)));
  res.clusters = spectral_cluster(emb.X, K, res.threshold, rng);

  res.ranking_labels.assign(data.size(), -1);
  std::vector<RankingDataset> members(K, RankingDataset(data.n()));
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t l = emb.source[r];
    const int k = res.clusters.labels[r];
    if (res.ranking_labels[l] < 0) res.ranking_labels[l] = k;
    members[k].add(data.ranking(l), expanded ? 1.0 : data.multiplicity(l));
  }

  res.mix.thetas.resize(data.n(), K);
  res.mix.beta.resize(K);
  const double total = data.total_weight();
  for (int k = 0; k < K; ++k) {
    std::vector<std::size_t> all(members[k].size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    res.mix.thetas.col(k) = fit_component(members[k], all, link);
    res.mix.beta(k) = members[k].total_weight() / total;
  }
  return res;
}

MixtureParams spectral_init(const RankingDataset& data, int K, Link link,
                            Rng& rng, std::optional<double> threshold) {
  return spectral_init_with_clusters(data, K, link, rng, threshold).mix;
}

MixtureParams random_init(int n, int K, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MixtureParams mix{Eigen::MatrixXd(n, K), Eigen::VectorXd::Constant(K, 1.0 / K)};
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < n; ++i) mix.thetas(i, k) = normal(rng);
  }
  mix.normalize();
  return mix;
}

FitReport fit_em(const RankingDataset& data, int K, const EmConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  if (K < 1) throw Error("number of components must be at least 1");
  if (data.total_weight() < K) throw Error("need at least K rankings to fit K components");
  Rng rng(config.seed);

  FitReport report;
  report.init_kind = config.init;
  report.seed = config.seed;
  switch (config.init) {
    case InitKind::kSpectral: {
      SpectralInitResult init =
          spectral_init_with_clusters(data, K, config.link, rng, config.threshold);
      report.init_mix = std::move(init.mix);
      report.threshold = init.threshold;
      report.r_hat = init.clusters.r_hat;
      break;
    }
    case InitKind::kRandom:
      report.init_mix = random_init(data.n(), K, rng);
      break;
    case InitKind::kProvided:
      if (!config.initial) throw Error("provided initialization requested without parameters");
      report.init_mix = *config.initial;
      if (report.init_mix.K() != K || report.init_mix.n() != data.n()) {
        throw Error("provided initialization has the wrong shape");
      }
      report.init_mix.normalize();
      break;
  }
  report.init_mix.validate();

  LsrOptions lsr;
  lsr.tol = config.lsr_tol;
  const ChoiceBreaking B = choice_breaking(data);
  MixtureParams mix = report.init_mix;
  report.loglik_trace.push_back(mixture_log_likelihood(data, mix));

  for (int it = 1; it <= config.max_em_iter; ++it) {
    const Eigen::MatrixXd Q = e_step(data, mix);
    MStepResult ms = m_step(data, B, Q, mix, lsr, rng);
    mix.thetas = std::move(ms.thetas);
    if (!config.fix_beta) mix.beta = update_mixing(Q, data.multiplicities());
    if (!ms.degenerate.empty()) {
      // Give each reseeded component half of the heaviest component's prior.
      Eigen::Index heaviest = 0;
      mix.beta.maxCoeff(&heaviest);
      for (int k : ms.degenerate) {
        if (k == heaviest) continue;
        const double share = 0.5 * mix.beta(heaviest);
        mix.beta(k) += share;
        mix.beta(heaviest) -= share;
      }
      report.reseed_iterations.push_back(it);
    }
    const double prev = report.loglik_trace.back();
    const double ll = mixture_log_likelihood(data, mix);
    report.loglik_trace.push_back(ll);
    if (ms.degenerate.empty() && (ll - prev) < config.em_tol * std::abs(prev)) {
      report.converged = true;
      break;
    }
  }
  report.mix = std::move(mix);
  report.n_iter = static_cast<int>(report.loglik_trace.size()) - 1;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

int mixture_dof(int n, int K) { return K * (n - 1) + (K - 1); }

double bic(const FitReport& fit, const RankingDataset& validation) {
  if (validation.empty()) throw Error("validation set is empty");
  const double m_val = validation.total_weight();
  return mixture_dof(fit.mix.n(), fit.mix.K()) * std::log(m_val) -
         2.0 * mixture_log_likelihood(validation, fit.mix);
}

SelectKResult select_k(const RankingDataset& train,
                       const RankingDataset& validation,
                       std::span<const int> k_candidates,
                       const EmConfig& config) {
  if (k_candidates.empty()) throw Error("no candidate K values");
  SelectKResult res;
  res.candidates.assign(k_candidates.begin(), k_candidates.end());
  double best = std::numeric_limits<double>::infinity();
  for (int K : res.candidates) {
    FitReport fit = fit_em(train, K, config);
    const double score = bic(fit, validation);
    res.bic.push_back(score);
    if (score < best || (score == best && K < res.best_k)) {
      best = score;
      res.best_k = K;
    }
    res.reports.push_back(std::move(fit));
  }
  return res;
}

}  // namespace plmix
