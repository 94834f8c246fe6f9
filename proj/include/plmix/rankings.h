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

#ifndef PLMIX_RANKINGS_H_
#define PLMIX_RANKINGS_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace plmix {

// All recoverable failures in the library surface as plmix::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every random operation takes the generator explicitly; a 64-bit seed fully
// determines the output.
using Rng = std::mt19937_64;

// An ordered list of distinct 0-based item ids, most preferred first. When it
// lists fewer than n items the remainder is unranked (not tied last).
struct Ranking {
  std::vector<int> items;

  std::size_t size() const { return items.size(); }
  int operator[](std::size_t i) const { return items[i]; }
  bool operator==(const Ranking&) const = default;

  // Throws unless 2 <= size <= n and ids are distinct and in [0, n).
  void validate(int n) const;
  // position[i] = rank of item i (0 is top), or -1 when i is unlisted.
  std::vector<int> positions(int n) const;
};

// Rankings over a universe of n items. Multiplicities are real-valued so tie
// expansion can fold fractional weights into them; they default to 1.
class RankingDataset {
 public:
  RankingDataset() = default;
  explicit RankingDataset(int n);
  RankingDataset(int n, std::vector<Ranking> rankings);
  RankingDataset(int n, std::vector<Ranking> rankings,
                 std::vector<double> multiplicities);

  void add(Ranking ranking, double multiplicity = 1.0);

  int n() const { return n_; }
  std::size_t size() const { return rankings_.size(); }
  bool empty() const { return rankings_.empty(); }
  const std::vector<Ranking>& rankings() const { return rankings_; }
  const Ranking& ranking(std::size_t l) const { return rankings_[l]; }
  const std::vector<double>& multiplicities() const { return mult_; }
  double multiplicity(std::size_t l) const { return mult_[l]; }
  // m = sum of multiplicities.
  double total_weight() const;
  bool all_full() const;
  bool integral_multiplicities() const;

  RankingDataset subset(std::span<const std::size_t> indices) const;

 private:
  int n_ = 0;
  std::vector<Ranking> rankings_;
  std::vector<double> mult_;
};

// Mixture of K Plackett-Luce components: column k of `thetas` holds the
// (mean-zero) utilities of component k; `beta` lies on the simplex.
struct MixtureParams {
  Eigen::MatrixXd thetas;
  Eigen::VectorXd beta;

  int n() const { return static_cast<int>(thetas.rows()); }
  int K() const { return static_cast<int>(thetas.cols()); }
  // Throws on shape mismatch, negative or non-normalized beta.
  void validate() const;
  // Mean-centers every column in place.
  void normalize();
};

// One choice enumeration (winner, choice set, source ranking). The choice set
// is a suffix of the source ranking and is stored as a view into `items`.
struct ChoiceEnumeration {
  int winner;
  std::size_t source;
  std::size_t set_begin;
  std::size_t set_end;
};

struct ChoiceBreaking {
  int n = 0;
  // Concatenated items of every ranking, in dataset order.
  std::vector<int> items;
  std::vector<ChoiceEnumeration> enumerations;

  std::size_t size() const { return enumerations.size(); }
  std::span<const int> choice_set(std::size_t e) const {
    const auto& en = enumerations[e];
    return {items.data() + en.set_begin, en.set_end - en.set_begin};
  }
};

// Ordered groups of tied items, e.g. {0} > {1, 2} > {3}.
struct RawRankingWithTies {
  std::vector<std::vector<int>> groups;
};

struct WeightedRanking {
  Ranking ranking;
  double weight;
};

enum class Noise { kGumbel, kNormalHalfVar };

// Binary pairwise embedding with one row per observation.
struct PairwiseEmbedding {
  Eigen::MatrixXd X;
  // Row r of X was produced by ranking source[r] of the dataset.
  std::vector<std::size_t> source;
};

struct LabeledSample {
  RankingDataset data;
  std::vector<int> labels;
};

// Column of pair (a, b), a < b, in the order (0,1), (0,2), ..., (n-2,n-1).
std::size_t pair_index(int a, int b, int n);

// Row-wise pairwise embedding: entry (l, (a,b)) is 1 iff a is ranked above b.
// Integer multiplicities expand to repeated rows; non-integer multiplicities
// yield one row per ranking. Throws on partial rankings.
PairwiseEmbedding embed_pairwise(const RankingDataset& data);

double log_sum_exp(std::span<const double> values);
Eigen::VectorXd centered(const Eigen::VectorXd& theta);

// Log-probability of the ranking under PL(theta); partial rankings contribute
// s - 1 choice factors over their listed items only.
double pl_log_likelihood(const Ranking& ranking, const Eigen::VectorXd& theta);

// sum_l mult_l * log sum_k beta_k PL(pi_l | theta_k).
double mixture_log_likelihood(const RankingDataset& data,
                              const MixtureParams& mix);

Ranking sample_pl(const Eigen::VectorXd& theta, Rng& rng);
Ranking sample_rum(const Eigen::VectorXd& theta, Noise noise, Rng& rng);
LabeledSample sample_mixture(const MixtureParams& mix, std::size_t m,
                             Rng& rng);

ChoiceBreaking choice_breaking(const RankingDataset& data);

// Expands tie groups into linear extensions. All extensions are enumerated
// with weight 1/count when count <= max_expand; otherwise max_expand uniform
// draws each carry 1/max_expand.
std::vector<WeightedRanking> break_ties(const RawRankingWithTies& raw,
                                        Rng& rng, std::size_t max_expand);

// Top-L model: the first L utilities of every component are standard normal,
// the rest zero; columns are then centered and beta is uniform.
MixtureParams generate_top_L(int n, int L, int K, Rng& rng);

}  // namespace plmix

#endif  // PLMIX_RANKINGS_H_
