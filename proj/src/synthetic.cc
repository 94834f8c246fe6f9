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

#include "plmix/synthetic.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <iostream>
#include <limits>

#include "plmix/evaluation.h"
#include "plmix/json_io.h"

namespace plmix {

void ExperimentConfig::validate() const {
  if (n < 2) throw Error("n must be at least 2");
  if (K < 1) throw Error("K must be at least 1");
  if (L < 1 || L > n) throw Error("L must satisfy 1 <= L <= n");
  if (m < 1) throw Error("m must be at least 1");
  if (repetitions < 1) throw Error("repetitions must be at least 1");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw Error("val_fraction must lie in (0, 1)");
  if (init == InitKind::kProvided) throw Error("synthetic runs need spectral or random init");
}

double EvalReport::median_dist_final() const {
  std::vector<double> d;
  for (const auto& r : rows) {
    if (r.error.empty()) d.push_back(r.dist_final);
  }
  return median(std::move(d));
}

double EvalReport::mean_miscluster() const {
  double total = 0.0;
  int count = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    total += r.miscluster;
    ++count;
  }
  return count ? total / count : std::numeric_limits<double>::quiet_NaN();
}

namespace {

EvalRow run_one(const ExperimentConfig& config, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  EvalRow row;
  row.seed = seed;
  row.n = config.n;
  row.K = config.K;
  row.L = config.L;
  row.m = config.m;
  row.init = config.init;
  try {
    Rng rng(seed);
    const MixtureParams truth = generate_top_L(config.n, config.L, config.K, rng);
    const LabeledSample train = sample_mixture(truth, config.m, rng);
    const auto m_val = static_cast<std::size_t>(
        std::max(1.0, std::round(config.val_fraction * static_cast<double>(config.m))));
    const LabeledSample val = sample_mixture(truth, m_val, rng);

    EmConfig em;
    em.init = config.init;
    em.link = config.link;
    em.em_tol = config.em_tol;
    em.max_em_iter = config.run_em ? config.max_em_iter : 0;
    em.lsr_tol = config.lsr_tol;
    // Drawn from the data stream so initializers never replay the truth's draws.
    em.seed = rng();
    em.threshold = config.threshold;
    const FitReport fit = fit_em(train.data, config.K, em);

    row.dist_init = dist_metric(fit.init_mix, truth);
    row.dist_final = dist_metric(fit.mix, truth);
    row.miscluster = misclustering_rate(hard_labels(e_step(train.data, fit.mix)),
                                        train.labels, config.K);
    row.loglik_val = mixture_log_likelihood(val.data, fit.mix) / val.data.total_weight();
  } catch (const std::exception& e) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.dist_init = row.dist_final = row.miscluster = row.loglik_val = nan;
    row.error = e.what();
  }
  if (config.record_runtime) {
    row.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  }
  return row;
}

std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

EvalReport run_synthetic(const ExperimentConfig& config) {
  config.validate();
  std::vector<std::future<EvalRow>> jobs;
  for (int r = 0; r < config.repetitions; ++r) {
    jobs.push_back(std::async(std::launch::async, run_one, config,
                              config.seed + static_cast<std::uint64_t>(r)));
  }
  EvalReport report;
  for (auto& job : jobs) {
    report.rows.push_back(job.get());
    const auto& row = report.rows.back();
    if (!row.error.empty()) {
      std::cerr << "plmix: seed " << row.seed << " failed: " << row.error << "\n";
    }
  }
  return report;
}

std::string csv_header() {
  return "seed,n,K,L,m,init,dist_init,dist_final,miscluster,loglik_val,runtime_s";
}

std::string to_csv_row(const EvalRow& row) {
  return std::to_string(row.seed) + ',' + std::to_string(row.n) + ',' +
         std::to_string(row.K) + ',' + std::to_string(row.L) + ',' +
         std::to_string(row.m) + ',' + to_string(row.init) + ',' +
         fmt_real(row.dist_init) + ',' + fmt_real(row.dist_final) + ',' +
         fmt_real(row.miscluster) + ',' + fmt_real(row.loglik_val) + ',' +
         fmt_real(row.runtime_s);
}

std::vector<ExperimentConfig> sweep_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("sweep config must be a JSON object");
  try {
    auto values = [&](const char* key) {
      std::vector<nlohmann::json> out;
      if (!j.contains(key) || j.at(key).is_null()) {
        out.emplace_back(nullptr);
      } else if (j.at(key).is_array()) {
        for (const auto& v : j.at(key)) out.push_back(v);
      } else {
        out.push_back(j.at(key));
      }
      return out;
    };
    ExperimentConfig base;
    base.seed = j.value("seed", base.seed);
    base.link = parse_link(j.value("link", std::string("logit")));
    base.em_tol = j.value("em_tol", base.em_tol);
    base.max_em_iter = j.value("max_em_iter", base.max_em_iter);
    base.lsr_tol = j.value("lsr_tol", base.lsr_tol);
    base.repetitions = j.value("repetitions", base.repetitions);
    base.run_em = j.value("run_em", base.run_em);
    base.val_fraction = j.value("val_fraction", base.val_fraction);
    base.record_runtime = j.value("record_runtime", base.record_runtime);
    if (j.contains("threshold") && j.at("threshold").is_number()) {
      base.threshold = j.at("threshold").get<double>();
    }

    std::vector<ExperimentConfig> out;
    for (const auto& n : values("n")) {
      for (const auto& K : values("K")) {
        for (const auto& L : values("L")) {
          for (const auto& m : values("m")) {
            for (const auto& init : values("init")) {
              ExperimentConfig c = base;
              if (!n.is_null()) c.n = n.get<int>();
              if (!K.is_null()) c.K = K.get<int>();
              c.L = L.is_null() ? c.n : L.get<int>();
              if (!m.is_null()) c.m = m.get<std::size_t>();
              if (!init.is_null()) c.init = parse_init_kind(init.get<std::string>());
              c.validate();
              out.push_back(c);
            }
          }
        }
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed sweep config: ") + e.what());
  }
}

}  // namespace plmix
