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

#ifndef PLMIX_JSON_IO_H_
#define PLMIX_JSON_IO_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "plmix/em_mixture.h"
#include "plmix/rankings.h"

namespace plmix {

std::string to_string(InitKind kind);
std::string to_string(Link link);
InitKind parse_init_kind(std::string_view name);
Link parse_link(std::string_view name);

// {"n", "K", "thetas": row-major n x K, "beta"}.
nlohmann::json mixture_to_json(const MixtureParams& mix);
MixtureParams mixture_from_json(const nlohmann::json& j);

nlohmann::json fit_report_to_json(const FitReport& report);

// Serializes with every floating-point number printed to 17 significant
// digits; non-finite numbers become null.
std::string dump_json(const nlohmann::json& j, int indent = 2);

nlohmann::json read_json_file(const std::string& path);

}  // namespace plmix

#endif  // PLMIX_JSON_IO_H_
