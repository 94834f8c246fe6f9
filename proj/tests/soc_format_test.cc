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

#include "plmix/soc_format.h"

#include <algorithm>
#include <string>

#include <gtest/gtest.h>

namespace plmix {
namespace {

std::string expect_error(const std::string& text) {
  try {
    parse_soc(text);
  } catch (const Error& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return "";
}

TEST(ParseSocTest, SingleLine) {
  const SocFile f = parse_soc("# NUMBER ALTERNATIVES: 3\n2: 1,2,3\n");
  ASSERT_EQ(f.data.size(), 1u);
  EXPECT_EQ(f.data.n(), 3);
  EXPECT_EQ(f.data.ranking(0).items, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(f.data.multiplicity(0), 2.0);
}

TEST(ParseSocTest, TieGroupSplitsWeight) {
  const SocFile f = parse_soc("# NUMBER ALTERNATIVES: 3\n1: 1,{2,3}\n");
  ASSERT_EQ(f.data.size(), 2u);
  EXPECT_EQ(f.data.ranking(0).items, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(f.data.ranking(1).items, (std::vector<int>{0, 2, 1}));
  EXPECT_EQ(f.data.multiplicity(0), 0.5);
  EXPECT_EQ(f.data.multiplicity(1), 0.5);
}

TEST(ParseSocTest, MetadataNamesAndPartialOrders) {
  const SocFile f = parse_soc(
      "# FILE NAME: toy.soi\n"
      "# NUMBER ALTERNATIVES: 4\n"
      "# ALTERNATIVE NAME 1: Alpha\n"
      "# ALTERNATIVE NAME 4: Delta\n"
      "\n"
      "3: 4, 2\n"
      "1.5: 1,2,3,4\n");
  EXPECT_EQ(f.names.at(0), "Alpha");
  EXPECT_EQ(f.names.at(3), "Delta");
  ASSERT_EQ(f.data.size(), 2u);
  EXPECT_EQ(f.data.ranking(0).items, (std::vector<int>{3, 1}));
  EXPECT_EQ(f.data.multiplicity(1), 1.5);
  EXPECT_FALSE(f.data.all_full());
}

TEST(ParseSocTest, ErrorsCarryLineNumbers) {
  EXPECT_EQ(expect_error("# NUMBER ALTERNATIVES: 3\n1: 1,2,3\n1: 1,1,2\n"),
            "line 3: duplicate item 1");
  EXPECT_EQ(expect_error("# NUMBER ALTERNATIVES: 3\n1: 1,4,2\n"), "line 2: item id 4 out of range");
  EXPECT_EQ(expect_error("# NUMBER ALTERNATIVES: 3\n1: 0,1\n"), "line 2: item id 0 out of range");
  EXPECT_EQ(expect_error("# NUMBER ALTERNATIVES: 3\n\n1: 1,2,\n"), "line 3: trailing comma");
  EXPECT_EQ(expect_error("1: 1,2\n"), "line 1: data line before '# NUMBER ALTERNATIVES' header");
  EXPECT_EQ(expect_error("# just a comment\n"), "missing '# NUMBER ALTERNATIVES' header");
  EXPECT_NE(expect_error("# NUMBER ALTERNATIVES: 3\nx: 1,2\n").find("line 2"), std::string::npos);
  EXPECT_NE(expect_error("# NUMBER ALTERNATIVES: 3\n1 1,2\n").find("line 2"), std::string::npos);
  EXPECT_NE(expect_error("# NUMBER ALTERNATIVES: 3\n1: {1,2\n").find("line 2"), std::string::npos);
  EXPECT_NE(expect_error("# NUMBER ALTERNATIVES: 3\n-1: 1,2\n").find("line 2"), std::string::npos);
}

TEST(ParseSocTest, LargeTieGroupIsSampled) {
  // 5! = 120 extensions exceeds the expansion cap, so a fixed number are drawn.
  Rng rng(1);
  const SocFile f = parse_soc("# NUMBER ALTERNATIVES: 5\n2: {1,2,3,4,5}\n", rng);
  EXPECT_EQ(f.data.size(), kSocMaxExpand);
  EXPECT_NEAR(f.data.total_weight(), 2.0, 1e-12);
}

TEST(WriteSocTest, RoundTripWithoutTies) {
  Rng rng(2);
  RankingDataset d(6);
  for (int l = 0; l < 50; ++l) {
    Ranking r = sample_pl(Eigen::VectorXd::LinSpaced(6, 1, -1), rng);
    d.add(r, 1.0 + l % 4);
  }
  std::map<int, std::string> names{{0, "a"}, {5, "f"}};
  const std::string text = write_soc(d, names);
  const SocFile back = parse_soc(text);
  EXPECT_EQ(back.data.n(), 6);
  EXPECT_EQ(back.data.rankings(), d.rankings());
  EXPECT_EQ(back.data.multiplicities(), d.multiplicities());
  EXPECT_EQ(back.names, names);
  EXPECT_EQ(write_soc(back.data, back.names), text);
}

TEST(WriteSocTest, Header) {
  RankingDataset d(3, {{{2, 0}}, {{0, 1, 2}}}, {2.0, 0.25});
  const std::string text = write_soc(d);
  EXPECT_EQ(text,
            "# DATA TYPE: soi\n"
            "# NUMBER ALTERNATIVES: 3\n"
            "# NUMBER VOTERS: 2.25\n"
            "# NUMBER UNIQUE ORDERS: 2\n"
            "2: 3,1\n"
            "0.25: 1,2,3\n");
}

TEST(FormatNumberTest, Examples) {
  EXPECT_EQ(format_number(3.0), "3");
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

}  // namespace
}  // namespace plmix
