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

#include "plmix/cli.h"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <optional>

#include "CLI11.hpp"
#include "plmix/em_mixture.h"
#include "plmix/evaluation.h"
#include "plmix/json_io.h"
#include "plmix/soc_format.h"
#include "plmix/synthetic.h"

namespace plmix {

namespace {

struct EmFlags {
  int k = 2;
  std::string init = "spectral";
  std::string link = "logit";
  std::uint64_t seed = 0;
  int max_em_iter = 200;
  double em_tol = 1e-8;
  double lsr_tol = 1e-8;
  std::string threshold = "auto";
  bool fix_beta = false;
};

void add_em_flags(CLI::App* cmd, EmFlags& f) {
  cmd->add_option("--init", f.init, "Initializer")
      ->check(CLI::IsMember({"spectral", "random"}));
  cmd->add_option("--link", f.link, "Pairwise link for the spectral fit")
      ->check(CLI::IsMember({"logit", "probit"}));
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_option("--max-em-iter", f.max_em_iter, "EM iteration cap")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--em-tol", f.em_tol, "Relative log-likelihood tolerance");
  cmd->add_option("--lsr-tol", f.lsr_tol, "Weighted LSR tolerance");
  cmd->add_option("--threshold", f.threshold, "Spectral gap threshold (real or 'auto')");
  cmd->add_flag("--fix-beta", f.fix_beta, "Keep mixing weights at their initial value");
}

EmConfig to_em_config(const EmFlags& f) {
  EmConfig c;
  c.init = parse_init_kind(f.init);
  c.link = parse_link(f.link);
  c.seed = f.seed;
  c.max_em_iter = f.max_em_iter;
  c.em_tol = f.em_tol;
  c.lsr_tol = f.lsr_tol;
  c.fix_beta = f.fix_beta;
  if (f.threshold != "auto") {
    try {
      std::size_t used = 0;
      c.threshold = std::stod(f.threshold, &used);
      if (used != f.threshold.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw CLI::ValidationError("--threshold", "expected a real number or 'auto'");
    }
  }
  return c;
}

// Number of observations the spectral clustering sees.
double embedded_rows(const RankingDataset& data) {
  return data.integral_multiplicities() ? data.total_weight()
                                        : static_cast<double>(data.size());
}

nlohmann::json config_echo(const EmFlags& f, const EmConfig& c,
                           const RankingDataset& data) {
  nlohmann::json j;
  j["k"] = f.k;
  j["init"] = f.init;
  j["link"] = f.link;
  j["seed"] = f.seed;
  j["max_em_iter"] = f.max_em_iter;
  j["em_tol"] = f.em_tol;
  j["lsr_tol"] = f.lsr_tol;
  j["fix_beta"] = f.fix_beta;
  j["threshold"] = c.threshold.value_or(default_threshold(data.n(), embedded_rows(data)));
  j["threshold_mode"] = c.threshold ? "manual" : "auto";
  return j;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_text_file(path, text);
  }
}

nlohmann::json names_json(const std::map<int, std::string>& names) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, name] : names) j[std::to_string(id)] = name;
  return j;
}

}  // namespace

std::vector<int> parse_k_candidates(const std::string& text) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || v < 1) {
      throw Error("invalid K candidate '" + s + "'");
    }
    return v;
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int lo = to_int(text.substr(0, dots));
    const int hi = to_int(text.substr(dots + 2));
    if (lo > hi) throw Error("empty K range '" + text + "'");
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::size_t p = 0;
  while (p <= text.size()) {
    const std::size_t comma = std::min(text.find(',', p), text.size());
    out.push_back(to_int(text.substr(p, comma - p)));
    p = comma + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<RankingDataset, RankingDataset> split_validation(
    const RankingDataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("validation fraction must lie in (0, 1)");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto held = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(order.size())));
  if (held == 0 || held >= order.size()) throw Error("dataset too small to split");
  const std::span<const std::size_t> all(order);
  return {data.subset(all.first(order.size() - held)), data.subset(all.last(held))};
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Mixtures of Plackett-Luce models: spectral initialization + EM"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a K-component mixture to a ranking file");
  std::string fit_input, fit_output;
  EmFlags fit_flags;
  fit->add_option("input", fit_input, "Election file (.soc/.soi)")->required();
  fit->add_option("--k", fit_flags.k, "Number of components")->required()->check(CLI::PositiveNumber);
  fit->add_option("--output,-o", fit_output, "Output JSON (default stdout)");
  add_em_flags(fit, fit_flags);

  // sample
  auto* sample = app.add_subcommand("sample", "Draw rankings from a random top-L mixture");
  int s_n = 10, s_k = 2, s_l = 0;
  std::size_t s_m = 1000;
  std::uint64_t s_seed = 0;
  std::string s_output, s_truth;
  sample->add_option("--n", s_n, "Number of items")->check(CLI::Range(2, 1 << 20));
  sample->add_option("--k", s_k, "Number of components")->check(CLI::PositiveNumber);
  sample->add_option("--l", s_l, "Informative items per component (default n)");
  sample->add_option("--m", s_m, "Number of rankings")->check(CLI::PositiveNumber);
  sample->add_option("--seed", s_seed, "Random seed");
  sample->add_option("--output,-o", s_output, "Output election file")->required();
  sample->add_option("--truth", s_truth, "Ground-truth JSON (default <output>.truth.json)");

  // eval
  auto* eval = app.add_subcommand("eval", "Compare a fitted mixture with the ground truth");
  std::string e_fitted, e_truth, e_data, e_output;
  eval->add_option("fitted", e_fitted, "Fitted JSON")->required();
  eval->add_option("truth", e_truth, "Truth JSON")->required();
  eval->add_option("--data", e_data, "Rankings the truth labels refer to");
  eval->add_option("--output,-o", e_output, "Output JSON (default stdout)");

  // select-k
  auto* sel = app.add_subcommand("select-k", "Choose K by validation BIC");
  std::string k_input, k_output, k_candidates = "2..10";
  double val_split = 0.2;
  EmFlags k_flags;
  sel->add_option("input", k_input, "Election file")->required();
  sel->add_option("--k-candidates", k_candidates, "Range 'a..b' or list 'a,b,c'");
  sel->add_option("--val-split", val_split, "Held-out fraction")->check(CLI::Range(0.0, 1.0));
  sel->add_option("--output,-o", k_output, "Output JSON (default stdout)");
  add_em_flags(sel, k_flags);

  // synth-sweep
  auto* sweep = app.add_subcommand("synth-sweep", "Run synthetic experiments from a JSON config");
  std::string w_config, w_output;
  sweep->add_option("config", w_config, "Sweep config JSON")->required();
  sweep->add_option("--output,-o", w_output, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (fit->parsed()) {
      const EmConfig cfg = to_em_config(fit_flags);
      Rng tie_rng(fit_flags.seed);
      const SocFile soc = read_soc_file(fit_input, tie_rng);
      const FitReport report = fit_em(soc.data, fit_flags.k, cfg);
      nlohmann::json out = fit_report_to_json(report);
      out["config"] = config_echo(fit_flags, cfg, soc.data);
      out["config"]["input"] = fit_input;
      if (!soc.names.empty()) out["item_names"] = names_json(soc.names);
      emit(fit_output, dump_json(out));
    } else if (sample->parsed()) {
      const int L = s_l == 0 ? s_n : s_l;
      Rng rng(s_seed);
      const MixtureParams truth = generate_top_L(s_n, L, s_k, rng);
      const LabeledSample drawn = sample_mixture(truth, s_m, rng);
      write_text_file(s_output, write_soc(drawn.data));
      nlohmann::json t = mixture_to_json(truth);
      t["labels"] = drawn.labels;
      t["L"] = L;
      t["m"] = s_m;
      t["seed"] = s_seed;
      write_text_file(s_truth.empty() ? s_output + ".truth.json" : s_truth, dump_json(t));
    } else if (eval->parsed()) {
      const nlohmann::json fitted_json = read_json_file(e_fitted);
      const nlohmann::json truth_json = read_json_file(e_truth);
      const MixtureParams fitted = mixture_from_json(fitted_json);
      const MixtureParams truth = mixture_from_json(truth_json);
      nlohmann::json out;
      out["dist"] = dist_metric(fitted, truth);
      if (!e_data.empty()) {
        Rng rng(0);
        const SocFile soc = read_soc_file(e_data, rng);
        out["loglik"] = mixture_log_likelihood(soc.data, fitted) / soc.data.total_weight();
        if (truth_json.contains("labels")) {
          const auto labels = truth_json.at("labels").get<std::vector<int>>();
          if (labels.size() != soc.data.size()) {
            throw Error("truth labels do not match the data file (tied or merged lines?)");
          }
          out["misclustering"] = misclustering_rate(
              hard_labels(e_step(soc.data, fitted)), labels, truth.K());
        }
      }
      emit(e_output, dump_json(out));
    } else if (sel->parsed()) {
      const EmConfig cfg = to_em_config(k_flags);
      const auto candidates = parse_k_candidates(k_candidates);
      Rng tie_rng(k_flags.seed);
      const SocFile soc = read_soc_file(k_input, tie_rng);
      const auto [train, validation] = split_validation(soc.data, val_split, k_flags.seed);
      const SelectKResult res = select_k(train, validation, candidates, cfg);
      nlohmann::json out;
      out["best_k"] = res.best_k;
      out["candidates"] = res.candidates;
      out["bic"] = res.bic;
      out["fits"] = nlohmann::json::array();
      for (const auto& r : res.reports) out["fits"].push_back(fit_report_to_json(r));
      out["config"] = config_echo(k_flags, cfg, train);
      out["config"]["val_split"] = val_split;
      out["config"]["k_candidates"] = k_candidates;
      emit(k_output, dump_json(out));
    } else if (sweep->parsed()) {
      const auto configs = sweep_from_json(read_json_file(w_config));
      std::string csv = csv_header() + "\n";
      for (const auto& c : configs) {
        for (const auto& row : run_synthetic(c).rows) csv += to_csv_row(row) + "\n";
      }
      emit(w_output, csv);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "plmix: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "plmix: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace plmix
