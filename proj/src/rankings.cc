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

#include "plmix/rankings.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace plmix {

void Ranking::validate(int n) const {
  if (items.size() < 2) throw Error("ranking must list at least two items");
  if (static_cast<int>(items.size()) > n) {
    throw Error("ranking lists more items than the universe holds");
  }
  std::vector<char> seen(n, 0);
  for (int id : items) {
    if (id < 0 || id >= n) {
      throw Error("item id " + std::to_string(id) + " out of range");
    }
    if (seen[id]) throw Error("duplicate item " + std::to_string(id));
    seen[id] = 1;
  }
}

std::vector<int> Ranking::positions(int n) const {
  std::vector<int> pos(n, -1);
  for (std::size_t i = 0; i < items.size(); ++i) pos[items[i]] = static_cast<int>(i);
  return pos;
}

RankingDataset::RankingDataset(int n) : n_(n) {
  if (n < 2) throw Error("item universe must contain at least two items");
}

RankingDataset::RankingDataset(int n, std::vector<Ranking> rankings)
    : RankingDataset(n, std::move(rankings), {}) {}

RankingDataset::RankingDataset(int n, std::vector<Ranking> rankings,
                               std::vector<double> multiplicities)
    : RankingDataset(n) {
  if (multiplicities.empty()) multiplicities.assign(rankings.size(), 1.0);
  if (multiplicities.size() != rankings.size()) {
    throw Error("multiplicity count does not match ranking count");
  }
  for (std::size_t l = 0; l < rankings.size(); ++l) {
    add(std::move(rankings[l]), multiplicities[l]);
  }
}

void RankingDataset::add(Ranking ranking, double multiplicity) {
  ranking.validate(n_);
  if (!(multiplicity > 0.0) || !std::isfinite(multiplicity)) {
    throw Error("multiplicity must be positive and finite");
  }
  rankings_.push_back(std::move(ranking));
  mult_.push_back(multiplicity);
}

double RankingDataset::total_weight() const {
  return std::accumulate(mult_.begin(), mult_.end(), 0.0);
}

bool RankingDataset::all_full() const {
  return std::all_of(rankings_.begin(), rankings_.end(), [&](const Ranking& r) {
    return static_cast<int>(r.size()) == n_;
  });
}

bool RankingDataset::integral_multiplicities() const {
  return std::all_of(mult_.begin(), mult_.end(),
                     [](double w) { return w == std::round(w); });
}

RankingDataset RankingDataset::subset(
    std::span<const std::size_t> indices) const {
  RankingDataset out(n_);
  for (std::size_t l : indices) out.add(rankings_.at(l), mult_.at(l));
  return out;
}

void MixtureParams::validate() const {
  if (thetas.cols() != beta.size() || beta.size() == 0) {
    throw Error("mixture shape mismatch between thetas and beta");
  }
  if (thetas.rows() < 2) throw Error("mixture needs at least two items");
  if ((beta.array() < 0.0).any() || std::abs(beta.sum() - 1.0) > 1e-9) {
    throw Error("mixing weights must lie on the probability simplex");
  }
  if (!thetas.allFinite()) throw Error("non-finite utilities");
}

void MixtureParams::normalize() {
  for (int k = 0; k < K(); ++k) {
    thetas.col(k).array() -= thetas.col(k).mean();
  }
}

std::size_t pair_index(int a, int b, int n) {
  // Pairs with first element a start after sum_{c<a} (n - 1 - c) columns.
  const auto ua = static_cast<std::size_t>(a);
  const auto un = static_cast<std::size_t>(n);
  return ua * (2 * un - ua - 1) / 2 + static_cast<std::size_t>(b - a - 1);
}

PairwiseEmbedding embed_pairwise(const RankingDataset& data) {
  if (!data.all_full()) throw Error("embedding requires full rankings");
  const int n = data.n();
  const bool expand = data.integral_multiplicities();
  PairwiseEmbedding out;
  for (std::size_t l = 0; l < data.size(); ++l) {
    const std::size_t reps =
        expand ? static_cast<std::size_t>(data.multiplicity(l)) : 1;
    out.source.insert(out.source.end(), reps, l);
  }
  const std::size_t cols = static_cast<std::size_t>(n) * (n - 1) / 2;
  out.X.setZero(static_cast<Eigen::Index>(out.source.size()),
                static_cast<Eigen::Index>(cols));
  std::size_t row = 0;
  for (std::size_t l = 0; l < data.size(); ++l) {
    const auto pos = data.ranking(l).positions(n);
    const Eigen::Index first = static_cast<Eigen::Index>(row);
    std::size_t c = 0;
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b, ++c) {
        if (pos[a] < pos[b]) out.X(first, static_cast<Eigen::Index>(c)) = 1.0;
      }
    }
    ++row;
    for (; row < out.source.size() && out.source[row] == l; ++row) {
      out.X.row(static_cast<Eigen::Index>(row)) = out.X.row(first);
    }
  }
  return out;
}

double log_sum_exp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double hi = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - hi);
  return hi + std::log(acc);
}

Eigen::VectorXd centered(const Eigen::VectorXd& theta) {
  return theta.array() - theta.mean();
}

double pl_log_likelihood(const Ranking& ranking, const Eigen::VectorXd& theta) {
  const std::size_t s = ranking.size();
  if (s < 2) return 0.0;
  // Walk suffixes from the back, keeping a running max-shifted sum.
  double hi = theta(ranking[s - 1]);
  double acc = 1.0;  // sum of exp(theta_j - hi) over the current suffix
  double ll = 0.0;
  for (std::size_t i = s - 1; i-- > 0;) {
    const double t = theta(ranking[i]);
    if (t > hi) {
      acc = acc * std::exp(hi - t) + 1.0;
      hi = t;
    } else {
      acc += std::exp(t - hi);
    }
    ll += t - (hi + std::log(acc));
  }
  return ll;
}

double mixture_log_likelihood(const RankingDataset& data,
                              const MixtureParams& mix) {
  const int K = mix.K();
  std::vector<double> terms(K);
  double total = 0.0;
  for (std::size_t l = 0; l < data.size(); ++l) {
    for (int k = 0; k < K; ++k) {
      terms[k] = std::log(mix.beta(k)) +
                 pl_log_likelihood(data.ranking(l), mix.thetas.col(k));
    }
    total += data.multiplicity(l) * log_sum_exp(terms);
  }
  return total;
}

namespace {

Ranking argsort_descending(const Eigen::VectorXd& utility) {
  Ranking r;
  r.items.resize(utility.size());
  std::iota(r.items.begin(), r.items.end(), 0);
  std::sort(r.items.begin(), r.items.end(),
            [&](int a, int b) { return utility(a) > utility(b); });
  return r;
}

double standard_gumbel(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = std::clamp(unif(rng), 1e-300, std::nextafter(1.0, 0.0));
  return -std::log(-std::log(u));
}

}  // namespace

Ranking sample_pl(const Eigen::VectorXd& theta, Rng& rng) {
  return sample_rum(theta, Noise::kGumbel, rng);
}

Ranking sample_rum(const Eigen::VectorXd& theta, Noise noise, Rng& rng) {
  Eigen::VectorXd utility = theta;
  if (noise == Noise::kGumbel) {
    for (Eigen::Index i = 0; i < utility.size(); ++i) {
      utility(i) += standard_gumbel(rng);
    }
  } else {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (Eigen::Index i = 0; i < utility.size(); ++i) {
      utility(i) += normal(rng);
    }
  }
  return argsort_descending(utility);
}

LabeledSample sample_mixture(const MixtureParams& mix, std::size_t m,
                             Rng& rng) {
  if (m < 1) throw Error("sample size must be at least 1");
  mix.validate();
  std::discrete_distribution<int> component(mix.beta.data(),
                                            mix.beta.data() + mix.beta.size());
  LabeledSample out{RankingDataset(mix.n()), {}};
  out.labels.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    const int k = component(rng);
    out.labels.push_back(k);
    out.data.add(sample_pl(mix.thetas.col(k), rng));
  }
  return out;
}

ChoiceBreaking choice_breaking(const RankingDataset& data) {
  ChoiceBreaking cb;
  cb.n = data.n();
  for (std::size_t l = 0; l < data.size(); ++l) {
    const auto& items = data.ranking(l).items;
    const std::size_t start = cb.items.size();
    const std::size_t end = start + items.size();
    cb.items.insert(cb.items.end(), items.begin(), items.end());
    for (std::size_t i = 0; i + 1 < items.size(); ++i) {
      cb.enumerations.push_back({items[i], l, start + i, end});
    }
  }
  return cb;
}

std::vector<WeightedRanking> break_ties(const RawRankingWithTies& raw,
                                        Rng& rng, std::size_t max_expand) {
  if (max_expand < 1) throw Error("max_expand must be at least 1");
  // Count linear extensions, saturating once past max_expand.
  std::size_t count = 1;
  bool overflow = false;
  for (const auto& g : raw.groups) {
    if (g.empty()) throw Error("empty tie group");
    for (std::size_t f = 2; f <= g.size() && !overflow; ++f) {
      count *= f;
      if (count > max_expand) overflow = true;
    }
  }

  auto flatten = [](const std::vector<std::vector<int>>& groups) {
    Ranking r;
    for (const auto& g : groups) r.items.insert(r.items.end(), g.begin(), g.end());
    return r;
  };

  std::vector<WeightedRanking> out;
  if (!overflow) {
    // Odometer over per-group permutations, each group starting sorted.
    auto groups = raw.groups;
    for (auto& g : groups) std::sort(g.begin(), g.end());
    const double w = 1.0 / static_cast<double>(count);
    while (true) {
      out.push_back({flatten(groups), w});
      std::size_t g = groups.size();
      bool advanced = false;
      while (g-- > 0) {
        if (std::next_permutation(groups[g].begin(), groups[g].end())) {
          advanced = true;
          break;
        }
      }
      if (!advanced) break;
    }
    return out;
  }
  const double w = 1.0 / static_cast<double>(max_expand);
  for (std::size_t s = 0; s < max_expand; ++s) {
    auto groups = raw.groups;
    for (auto& g : groups) std::shuffle(g.begin(), g.end(), rng);
    out.push_back({flatten(groups), w});
  }
  return out;
}

MixtureParams generate_top_L(int n, int L, int K, Rng& rng) {
  if (L < 1 || L > n) throw Error("top-L size must satisfy 1 <= L <= n");
  if (K < 1) throw Error("number of components must be at least 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  MixtureParams mix{Eigen::MatrixXd::Zero(n, K),
                    Eigen::VectorXd::Constant(K, 1.0 / K)};
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < L; ++i) mix.thetas(i, k) = normal(rng);
  }
  mix.normalize();
  return mix;
}

}  // namespace plmix
