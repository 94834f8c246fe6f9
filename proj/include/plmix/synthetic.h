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

#ifndef PLMIX_SYNTHETIC_H_
#define PLMIX_SYNTHETIC_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "plmix/em_mixture.h"

namespace plmix {

// One synthetic experiment: top-L mixture truth, m training rankings, and a
// held-out set of val_fraction * m rankings. Repetition r uses seed + r.
struct ExperimentConfig {
  int n = 10;
  int K = 2;
  int L = 10;
  std::size_t m = 1000;
  std::uint64_t seed = 0;
  InitKind init = InitKind::kSpectral;
  Link link = Link::kLogit;
  double em_tol = 1e-8;
  int max_em_iter = 200;
  double lsr_tol = 1e-8;
  int repetitions = 1;
  bool run_em = true;
  double val_fraction = 0.2;
  // When false the runtime column is written as 0 so output is bit-stable.
  bool record_runtime = true;
  std::optional<double> threshold;

  void validate() const;
};

struct EvalRow {
  std::uint64_t seed = 0;
  int n = 0;
  int K = 0;
  int L = 0;
  std::size_t m = 0;
  InitKind init = InitKind::kSpectral;
  double dist_init = 0.0;
  double dist_final = 0.0;
  double miscluster = 0.0;
  double loglik_val = 0.0;  // mean per held-out ranking
  double runtime_s = 0.0;
  std::string error;  // empty on success
};

struct EvalReport {
  std::vector<EvalRow> rows;

  double median_dist_final() const;
  double mean_miscluster() const;
};

// Runs every repetition (concurrently, one rng stream each); a failing
// repetition yields a row with NaN metrics and a message instead of aborting.
EvalReport run_synthetic(const ExperimentConfig& config);

std::string csv_header();
std::string to_csv_row(const EvalRow& row);

// Sweep file: an object of ExperimentConfig fields where n, K, L, m and init
// may also be arrays; the cartesian product is expanded in key order.
std::vector<ExperimentConfig> sweep_from_json(const nlohmann::json& j);

}  // namespace plmix

#endif  // PLMIX_SYNTHETIC_H_
