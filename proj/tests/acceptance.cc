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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <span>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "oracles.h"
#include "plmix/em_mixture.h"
#include "plmix/evaluation.h"
#include "plmix/ls_estimator.h"
#include "plmix/rankings.h"
#include "plmix/soc_format.h"
#include "plmix/spectral_cluster.h"
#include "plmix/synthetic.h"
#include "plmix/weighted_lsr.h"

namespace plmix {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

MixtureParams gaussian_truth(int n, int K, Rng& rng) {
  std::normal_distribution<double> normal;
  MixtureParams mix{Eigen::MatrixXd(n, K), Eigen::VectorXd::Constant(K, 1.0 / K)};
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < n; ++i) mix.thetas(i, k) = normal(rng);
  mix.normalize();
  return mix;
}

// Residuals of the weighted LSR fixed point collected across criteria.
std::vector<double> g_lsr_residuals;

Outcome check_a1() {
  const auto start = Clock::now();
  Rng rng(2024);
  std::uniform_int_distribution<int> pick_n(3, 5), pick_m(5, 20);
  std::uniform_real_distribution<double> unit(0.0, 1.0), theta_dist(-1.0, 1.0);
  double worst = 0.0;
  int resampled = 0;
  for (int inst = 0; inst < 50; ++inst) {
    while (true) {
      const int n = pick_n(rng);
      const int m = pick_m(rng);
      Eigen::VectorXd theta(n);
      for (int i = 0; i < n; ++i) theta(i) = theta_dist(rng);
      RankingDataset d(n);
      oracle::WeightedOrders o{n, {}, {}};
      std::vector<double> q(m);
      for (int l = 0; l < m; ++l) {
        d.add(sample_pl(theta, rng));
        q[l] = 1.0 - unit(rng);  // (0, 1]
        o.orders.push_back(d.ranking(l).items);
        o.weights.push_back(q[l]);
      }
      if (!oracle::comparison_graph_connected(o)) {
        ++resampled;
        continue;
      }
      bool converged = false;
      const Eigen::VectorXd expected = oracle::gradient_ascent_mle(o, 1e-10, &converged);
      if (!converged) return {false, fmt("oracle did not converge on instance %d", inst)};
      const LsrResult r = weighted_lsr(d, q);
      g_lsr_residuals.push_back(r.fixed_point_residual);
      worst = std::max(worst, (r.theta - expected).cwiseAbs().maxCoeff());
      break;
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-4 && elapsed < 60.0,
          fmt("max |lsr - oracle| = %.3g over 50 instances (%d disconnected draws resampled), %.1f s",
              worst, resampled, elapsed)};
}

// A5 setup: n=20, K=2, L=n, m=2000, N(0, I) components, uniform mixing.
struct A5Run {
  MixtureParams truth;
  LabeledSample sample;
};

A5Run a5_instance(std::uint64_t seed) {
  Rng rng(seed);
  A5Run run;
  run.truth = generate_top_L(20, 20, 2, rng);
  run.sample = sample_mixture(run.truth, 2000, rng);
  return run;
}

Outcome check_a5(double* elapsed_out) {
  const auto start = Clock::now();
  double total = 0.0;
  std::string rates;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const A5Run run = a5_instance(seed);
    Rng rng(seed);
    const PairwiseEmbedding emb = embed_pairwise(run.sample.data);
    const double T = default_threshold(20, static_cast<double>(emb.X.rows()));
    const ClusterAssignment c = spectral_cluster(emb.X, 2, T, rng);
    const double rate = misclustering_rate(c.labels, run.sample.labels, 2);
    total += rate;
    rates += fmt("%s%.3f", seed == 1 ? "" : ",", rate);

    // Weighted LSR convergences for the fixed-point check: one M-step at the EM output.
    EmConfig config;
    config.seed = seed;
    const FitReport fit = fit_em(run.sample.data, 2, config);
    const Eigen::MatrixXd Q = e_step(run.sample.data, fit.mix);
    const ChoiceBreaking B = choice_breaking(run.sample.data);
    for (int k = 0; k < 2; ++k) {
      const std::vector<double> q(Q.col(k).data(), Q.col(k).data() + Q.rows());
      g_lsr_residuals.push_back(
          weighted_lsr(run.sample.data, B, q, fit.mix.thetas.col(k)).fixed_point_residual);
    }
  }
  *elapsed_out = seconds_since(start);
  const double mean = total / 10.0;
  return {mean <= 0.05 && *elapsed_out < 120.0,
          fmt("mean misclustering %.4f (per seed %s), %.1f s including EM fits", mean,
              rates.c_str(), *elapsed_out)};
}

Outcome check_a2() {
  const double worst = *std::max_element(g_lsr_residuals.begin(), g_lsr_residuals.end());
  return {worst <= 1e-8,
          fmt("max fixed-point residual %.3g over %zu weighted LSR solves", worst,
              g_lsr_residuals.size())};
}

Outcome check_a3() {
  double worst = std::numeric_limits<double>::infinity();
  int total_steps = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(500 + seed);
    const MixtureParams truth = gaussian_truth(10, 2, rng);
    const LabeledSample s = sample_mixture(truth, 500, rng);
    EmConfig config;
    config.seed = seed;
    config.init = seed % 2 == 0 ? InitKind::kSpectral : InitKind::kRandom;
    const FitReport fit = fit_em(s.data, 2, config);
    for (std::size_t t = 1; t < fit.loglik_trace.size(); ++t) {
      worst = std::min(worst, fit.loglik_trace[t] - fit.loglik_trace[t - 1]);
      ++total_steps;
    }
  }
  return {worst >= -1e-6,
          fmt("min consecutive log-likelihood change %.3g over %d EM steps in 20 fits", worst,
              total_steps)};
}

Outcome check_a4() {
  Rng rng(44);
  std::uniform_int_distribution<int> pick_n(2, 12);
  std::normal_distribution<double> normal(0.0, 1.5);
  double worst_exact = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = pick_n(rng);
    Eigen::VectorXd theta(n);
    for (int i = 0; i < n; ++i) theta(i) = normal(rng);
    theta = centered(theta);
    Eigen::MatrixXd phi(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) phi(i, j) = theta(i) - theta(j);
    worst_exact = std::max(worst_exact, (least_squares_fit(phi) - theta).cwiseAbs().maxCoeff());
  }

  // Dynamic range 1: utilities spread evenly over [-0.5, 0.5].
  const Eigen::VectorXd truth = Eigen::VectorXd::LinSpaced(8, 0.5, -0.5);
  RankingDataset d(8);
  for (int l = 0; l < 20000; ++l) d.add(sample_pl(truth, rng));
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), 0);
  const double err = (fit_component(d, all, Link::kLogit) - truth).norm();
  return {worst_exact < 1e-10 && err <= 0.05,
          fmt("exact-input recovery error %.3g (20 instances, n<=12); n=8 m=20000 fit error %.4f",
              worst_exact, err)};
}

Outcome check_a6() {
  ExperimentConfig base;
  base.n = 15;
  base.K = 2;
  base.L = 15;
  base.seed = 600;
  base.repetitions = 10;
  base.record_runtime = false;
  base.m = 2000;
  const EvalReport small = run_synthetic(base);
  base.m = 8000;
  const EvalReport large = run_synthetic(base);
  for (const auto* rep : {&small, &large}) {
    for (const auto& row : rep->rows) {
      if (!row.error.empty()) return {false, "seed " + std::to_string(row.seed) + " failed: " + row.error};
    }
  }
  auto med_init = [](const EvalReport& r) {
    std::vector<double> v;
    for (const auto& row : r.rows) v.push_back(row.dist_init);
    return median(v);
  };
  const double ratio = small.median_dist_final() / large.median_dist_final();
  const double init_ratio = med_init(small) / med_init(large);
  return {ratio >= 1.4 && ratio <= 2.8,
          fmt("median dist %.4f (m=2000) vs %.4f (m=8000), ratio %.3f; spectral-init-only ratio "
              "%.3f (%.4f vs %.4f)",
              small.median_dist_final(), large.median_dist_final(), ratio, init_ratio,
              med_init(small), med_init(large))};
}

Outcome check_a7() {
  int spectral_wins = 0, em_improves = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const A5Run run = a5_instance(seed);
    Rng rng_s(1000 + seed), rng_r(1000 + seed);
    const double d_spec =
        dist_metric(spectral_init(run.sample.data, 2, Link::kLogit, rng_s), run.truth);
    const double d_rand = dist_metric(random_init(20, 2, rng_r), run.truth);
    if (d_spec < d_rand) ++spectral_wins;

    EmConfig config;
    config.seed = 1000 + seed;
    const FitReport fit = fit_em(run.sample.data, 2, config);
    if (dist_metric(fit.mix, run.truth) <= dist_metric(fit.init_mix, run.truth)) ++em_improves;
  }
  return {spectral_wins >= 8 && em_improves >= 9,
          fmt("spectral beats random init in %d/10 seeds; EM final <= init in %d/10 seeds",
              spectral_wins, em_improves)};
}

Outcome check_a8() {
  int hits = 0;
  std::string picks;
  const std::vector<int> candidates{1, 2, 4};
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(800 + seed);
    const MixtureParams truth = gaussian_truth(10, 2, rng);
    const LabeledSample s = sample_mixture(truth, 4000, rng);
    std::vector<std::size_t> order(s.data.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::span<const std::size_t> all(order);
    const RankingDataset train = s.data.subset(all.first(3200));
    const RankingDataset val = s.data.subset(all.subspan(3200));
    EmConfig config;
    config.seed = seed;
    const int k = select_k(train, val, candidates, config).best_k;
    if (k == 2) ++hits;
    picks += fmt("%s%d", seed == 1 ? "" : ",", k);
  }
  return {hits >= 8, fmt("selected K=2 in %d/10 seeds (picks %s)", hits, picks.c_str())};
}

Outcome check_a9() {
  const Eigen::Vector3d theta(0.7, 0.0, -0.7);
  Rng rng(9);
  const int draws = 100000;
  std::map<std::vector<int>, int> counts;
  for (int t = 0; t < draws; ++t) ++counts[sample_pl(theta, rng).items];
  double chi2 = 0.0;
  for (const auto& order : oracle::all_permutations(3)) {
    const double expected = draws * oracle::pl_probability(order, theta);
    const double diff = counts[order] - expected;
    chi2 += diff * diff / expected;
  }
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(5), chi2));
  return {p > 0.001, fmt("chi-square %.3f on 5 dof, p = %.4f", chi2, p)};
}

Outcome check_a10() {
  Rng rng(10);
  const MixtureParams truth = generate_top_L(8, 8, 3, rng);
  RankingDataset d = sample_mixture(truth, 1000, rng).data;
  const std::string text = write_soc(d);
  const SocFile back = parse_soc(text);
  const bool identity = back.data.rankings() == d.rankings() &&
                        back.data.multiplicities() == d.multiplicities() &&
                        write_soc(back.data) == text;

  // Every tie pattern of groups with at most three items over five alternatives.
  bool ties_ok = true;
  int lines = 0;
  const std::vector<std::string> patterns{"{1,2},3,{4,5}", "1,{2,3,4},5", "{1,2,3},{4,5}",
                                          "{5,3},{1,4,2}", "2,{1,5},{3,4}"};
  for (const auto& pattern : patterns) {
    ++lines;
    const SocFile f = parse_soc("# NUMBER ALTERNATIVES: 5\n3: " + pattern + "\n");
    // Expected set: all orders consistent with the groups, each with weight 3/count.
    std::vector<std::vector<int>> groups;
    bool in_group = false;
    for (char ch : pattern) {
      if (ch == '{') {
        groups.emplace_back();
        in_group = true;
      } else if (ch == '}') {
        in_group = false;
      } else if (ch != ',') {
        if (!in_group) groups.emplace_back();
        groups.back().push_back(ch - '1');
      }
    }
    std::map<std::vector<int>, double> expected;
    std::function<void(std::size_t, std::vector<int>)> extend = [&](std::size_t g,
                                                                    std::vector<int> prefix) {
      if (g == groups.size()) {
        expected[prefix] = 0.0;
        return;
      }
      std::vector<int> grp = groups[g];
      std::sort(grp.begin(), grp.end());
      do {
        std::vector<int> next = prefix;
        next.insert(next.end(), grp.begin(), grp.end());
        extend(g + 1, next);
      } while (std::next_permutation(grp.begin(), grp.end()));
    };
    extend(0, {});
    for (auto& [order, w] : expected) w = 3.0 / static_cast<double>(expected.size());
    std::map<std::vector<int>, double> got;
    for (std::size_t l = 0; l < f.data.size(); ++l) got[f.data.ranking(l).items] += f.data.multiplicity(l);
    if (got.size() != expected.size() || f.data.size() != expected.size()) ties_ok = false;
    for (const auto& [order, w] : expected) {
      auto it = got.find(order);
      if (it == got.end() || std::abs(it->second - w) > 1e-12) ties_ok = false;
    }
  }
  return {identity && ties_ok,
          fmt("round trip of %zu rankings %s; %d tie patterns %s", d.size(),
              identity ? "identical" : "differs", lines, ties_ok ? "expand exactly" : "mismatch")};
}

}  // namespace
}  // namespace plmix

int main() {
  using namespace plmix;
  bool all = true;
  auto report = [&](const char* id, const char* name, auto&& fn) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s: %s [%.1f s]\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
    all = all && o.pass;
  };
  double a5_elapsed = 0.0;
  report("A1", "weighted MLE equivalence", [] { return check_a1(); });
  report("A5", "clustering recovery", [&] { return check_a5(&a5_elapsed); });
  report("A2", "fixed-point stationarity", [] { return check_a2(); });
  report("A3", "EM monotonicity", [] { return check_a3(); });
  report("A4", "least-squares exactness", [] { return check_a4(); });
  report("A6", "error scaling", [] { return check_a6(); });
  report("A7", "initialization comparison", [] { return check_a7(); });
  report("A8", "model selection", [] { return check_a8(); });
  report("A9", "sampler correctness", [] { return check_a9(); });
  report("A10", "format round trip", [] { return check_a10(); });
  return all ? 0 : 1;
}
