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

#ifndef PLMIX_CLI_H_
#define PLMIX_CLI_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "plmix/rankings.h"

namespace plmix {

// Entry point of the `plmix` tool. Returns 0 on success, 2 on usage errors
// and 1 on runtime errors (reported on stderr).
int cli_main(int argc, const char* const* argv);

// Parses "2..10" or "1,2,4" into a list of K values.
std::vector<int> parse_k_candidates(const std::string& text);

// Deterministic shuffle of ranking entries by seed; the last
// ceil(fraction * size) entries form the validation set.
std::pair<RankingDataset, RankingDataset> split_validation(
    const RankingDataset& data, double fraction, std::uint64_t seed);

}  // namespace plmix

#endif  // PLMIX_CLI_H_
