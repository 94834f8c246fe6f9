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

#ifndef PLMIX_SOC_FORMAT_H_
#define PLMIX_SOC_FORMAT_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "plmix/rankings.h"

namespace plmix {

// Largest number of linear extensions enumerated exactly per tied line.
inline constexpr std::size_t kSocMaxExpand = 24;

// Parsed PrefLib-style election file. Item ids are 0-based internally and
// 1-based in the file.
struct SocFile {
  RankingDataset data;
  // Alternative names keyed by 0-based id, from "# ALTERNATIVE NAME i: ...".
  std::map<int, std::string> names;
};

// Reads "# NUMBER ALTERNATIVES: n" and data lines "count: a,b,{c,d},e".
// Tied groups are broken via break_ties and the line's count is split
// across the resulting orders. Errors carry the offending line number.
SocFile parse_soc(std::string_view text, Rng& rng);
SocFile parse_soc(std::string_view text);

std::string write_soc(const RankingDataset& data,
                      const std::map<int, std::string>& names = {});

SocFile read_soc_file(const std::string& path, Rng& rng);
void write_text_file(const std::string& path, std::string_view contents);

// Formats a real with up to 17 significant digits, integers without a point.
std::string format_number(double value);

}  // namespace plmix

#endif  // PLMIX_SOC_FORMAT_H_
