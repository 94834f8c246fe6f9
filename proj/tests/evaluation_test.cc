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

#include <cmath>

#include <gtest/gtest.h>

#include "plmix/synthetic.h"

namespace plmix {
namespace {

MixtureParams random_mix(int n, int K, Rng& rng) {
  std::normal_distribution<double> normal;
  MixtureParams mix{Eigen::MatrixXd(n, K), Eigen::VectorXd::Constant(K, 1.0 / K)};
  for (Eigen::Index i = 0; i < mix.thetas.size(); ++i) mix.thetas.data()[i] = normal(rng);
  return mix;
}

TEST(DistMetricTest, ZeroOnCopiesAndRelabelings) {
  Rng rng(1);
  const MixtureParams a = random_mix(5, 3, rng);
  EXPECT_EQ(dist_metric(a, a), 0.0);
  MixtureParams b = a;
  b.thetas.col(0) = a.thetas.col(2);
  b.thetas.col(2) = a.thetas.col(0);
  EXPECT_NEAR(dist_metric(b, a), 0.0, 1e-12);
  MixtureParams shifted = a;
  shifted.thetas.array() += 4.0;
  EXPECT_NEAR(dist_metric(shifted, a), 0.0, 1e-12);
}

TEST(DistMetricTest, SingleCoordinateBump) {
  const int n = 4;
  Rng rng(2);
  const MixtureParams a = random_mix(n, 2, rng);
  MixtureParams b = a;
  b.thetas(1, 0) += 0.3;
  // Centering spreads the bump over all coordinates.
  EXPECT_NEAR(dist_metric(b, a), 0.3 * std::sqrt(1.0 - 1.0 / n), 1e-12);
  // A mean-preserving bump moves by exactly its norm.
  MixtureParams c = a;
  c.thetas(1, 0) += 0.3 / std::sqrt(2.0);
  c.thetas(2, 0) -= 0.3 / std::sqrt(2.0);
  EXPECT_NEAR(dist_metric(c, a), 0.3, 1e-12);
}

TEST(DistMetricTest, ShapeMismatch) {
  Rng rng(3);
  EXPECT_THROW(dist_metric(random_mix(4, 2, rng), random_mix(5, 2, rng)), Error);
  EXPECT_THROW(dist_metric(random_mix(4, 2, rng), random_mix(4, 3, rng)), Error);
}

TEST(DistMetricTest, Pseudometric) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    const MixtureParams a = random_mix(6, 3, rng);
    const MixtureParams b = random_mix(6, 3, rng);
    const MixtureParams c = random_mix(6, 3, rng);
    EXPECT_NEAR(dist_metric(a, b), dist_metric(b, a), 1e-12);
    EXPECT_LE(dist_metric(a, c), dist_metric(a, b) + dist_metric(b, c) + 1e-9);
  }
}

TEST(HardLabelsTest, ArgmaxPerRow) {
  Eigen::MatrixXd Q(3, 3);
  Q << 0.2, 0.7, 0.1, 0.5, 0.25, 0.25, 0.1, 0.1, 0.8;
  EXPECT_EQ(hard_labels(Q), (std::vector<int>{1, 0, 2}));
}

TEST(MedianTest, OddAndEven) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_TRUE(std::isnan(median({})));
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n = 6;
  c.K = 2;
  c.L = 6;
  c.m = 200;
  c.seed = 7;
  c.repetitions = 3;
  c.record_runtime = false;
  return c;
}

TEST(RunSyntheticTest, RowsAreDeterministic) {
  const ExperimentConfig c = small_config();
  const EvalReport a = run_synthetic(c);
  const EvalReport b = run_synthetic(c);
  ASSERT_EQ(a.rows.size(), 3u);
  std::string csv_a = csv_header() + "\n", csv_b = csv_header() + "\n";
  for (const auto& r : a.rows) csv_a += to_csv_row(r) + "\n";
  for (const auto& r : b.rows) csv_b += to_csv_row(r) + "\n";
  EXPECT_EQ(csv_a, csv_b);
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const EvalRow& r = a.rows[i];
    EXPECT_EQ(r.seed, c.seed + i);
    EXPECT_TRUE(r.error.empty()) << r.error;
    EXPECT_GE(r.dist_init, 0.0);
    EXPECT_GE(r.dist_final, 0.0);
    EXPECT_GE(r.miscluster, 0.0);
    EXPECT_LE(r.miscluster, 1.0);
    EXPECT_TRUE(std::isfinite(r.loglik_val));
    EXPECT_EQ(r.runtime_s, 0.0);
  }
  EXPECT_TRUE(std::isfinite(a.median_dist_final()));
}

TEST(RunSyntheticTest, CsvHeader) {
  EXPECT_EQ(csv_header(), "seed,n,K,L,m,init,dist_init,dist_final,miscluster,loglik_val,runtime_s");
}

TEST(RunSyntheticTest, InvalidConfig) {
  ExperimentConfig c = small_config();
  c.L = 7;
  EXPECT_THROW(c.validate(), Error);
  c = small_config();
  c.K = 0;
  EXPECT_THROW(run_synthetic(c), Error);
}

TEST(SweepFromJsonTest, CartesianProduct) {
  const nlohmann::json j = {{"n", {5, 8}}, {"K", 2}, {"m", {100, 200, 400}}, {"seed", 3},
                            {"init", {"spectral", "random"}}};
  const auto configs = sweep_from_json(j);
  ASSERT_EQ(configs.size(), 12u);
  for (const auto& c : configs) {
    EXPECT_EQ(c.L, c.n);
    EXPECT_EQ(c.seed, 3u);
  }
}

}  // namespace
}  // namespace plmix
