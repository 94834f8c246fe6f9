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

#include "plmix/json_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plmix {

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::kSpectral: return "spectral";
    case InitKind::kRandom: return "random";
    case InitKind::kProvided: return "provided";
  }
  return "unknown";
}

std::string to_string(Link link) {
  return link == Link::kLogit ? "logit" : "probit";
}

InitKind parse_init_kind(std::string_view name) {
  if (name == "spectral") return InitKind::kSpectral;
  if (name == "random") return InitKind::kRandom;
  if (name == "provided") return InitKind::kProvided;
  throw Error("unknown init kind '" + std::string(name) + "'");
}

Link parse_link(std::string_view name) {
  if (name == "logit") return Link::kLogit;
  if (name == "probit") return Link::kProbit;
  throw Error("unknown link '" + std::string(name) + "'");
}

nlohmann::json mixture_to_json(const MixtureParams& mix) {
  nlohmann::json j;
  j["n"] = mix.n();
  j["K"] = mix.K();
  auto thetas = nlohmann::json::array();
  for (int i = 0; i < mix.n(); ++i) {
    for (int k = 0; k < mix.K(); ++k) thetas.push_back(mix.thetas(i, k));
  }
  j["thetas"] = std::move(thetas);
  j["beta"] = std::vector<double>(mix.beta.data(), mix.beta.data() + mix.beta.size());
  return j;
}

MixtureParams mixture_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int K = j.at("K").get<int>();
    const auto& thetas = j.at("thetas");
    const auto& beta = j.at("beta");
    if (n < 2 || K < 1 || thetas.size() != static_cast<std::size_t>(n) * K ||
        beta.size() != static_cast<std::size_t>(K)) {
      throw Error("mixture json has inconsistent dimensions");
    }
    MixtureParams mix{Eigen::MatrixXd(n, K), Eigen::VectorXd(K)};
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < K; ++k) mix.thetas(i, k) = thetas.at(i * K + k).get<double>();
    }
    for (int k = 0; k < K; ++k) mix.beta(k) = beta.at(k).get<double>();
    return mix;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed mixture json: ") + e.what());
  }
}

nlohmann::json fit_report_to_json(const FitReport& report) {
  nlohmann::json j = mixture_to_json(report.mix);
  j["loglik_trace"] = report.loglik_trace;
  j["n_iter"] = report.n_iter;
  j["converged"] = report.converged;
  j["init_kind"] = to_string(report.init_kind);
  j["seed"] = report.seed;
  j["wall_time"] = report.wall_time;
  j["init"] = mixture_to_json(report.init_mix);
  if (report.r_hat) j["r_hat"] = *report.r_hat;
  if (!report.reseed_iterations.empty()) j["reseed_iterations"] = report.reseed_iterations;
  return j;
}

namespace {

void write_json(std::ostream& os, const nlohmann::json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(indent * (depth + 1), ' ') : "";
  const std::string close_pad = indent > 0 ? std::string(indent * depth, ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << nlohmann::json(it.key()).dump() << sep;
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',' << nl;
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        os << "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      std::string s(buf);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      os << s;
      return;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  os << '\n';
  return os.str();
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace plmix
