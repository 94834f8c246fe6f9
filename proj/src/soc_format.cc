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
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace plmix {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

int parse_int(std::string_view s, std::size_t line) {
  s = trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail(line, "expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

double parse_count(std::string_view s, std::size_t line) {
  s = trim(s);
  const std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size() || !(v > 0.0) || !std::isfinite(v)) {
    fail(line, "invalid count '" + tmp + "'");
  }
  return v;
}

// "a,{b,c},d" -> groups {a} {b,c} {d}, converted to 0-based ids.
RawRankingWithTies parse_order(std::string_view body, int n, std::size_t line) {
  RawRankingWithTies raw;
  std::vector<char> seen(n, 0);
  auto take = [&](std::string_view token, std::vector<int>& group) {
    const int id = parse_int(token, line);
    if (id < 1 || id > n) fail(line, "item id " + std::to_string(id) + " out of range");
    if (seen[id - 1]) fail(line, "duplicate item " + std::to_string(id));
    seen[id - 1] = 1;
    group.push_back(id - 1);
  };
  std::size_t i = 0;
  while (i < body.size()) {
    const std::size_t brace = body.find_first_not_of(" \t", i);
    if (brace == std::string_view::npos) break;
    std::vector<int> group;
    std::size_t next;
    if (body[brace] == '{') {
      const std::size_t close = body.find('}', brace);
      if (close == std::string_view::npos) fail(line, "unterminated tie group");
      std::string_view inner = body.substr(brace + 1, close - brace - 1);
      std::size_t p = 0;
      while (p <= inner.size()) {
        const std::size_t comma = std::min(inner.find(',', p), inner.size());
        take(inner.substr(p, comma - p), group);
        p = comma + 1;
      }
      next = body.find_first_not_of(" \t", close + 1);
      if (next != std::string_view::npos && body[next] != ',') fail(line, "expected ',' after tie group");
    } else {
      next = std::min(body.find(',', brace), body.size());
      take(body.substr(brace, next - brace), group);
    }
    raw.groups.push_back(std::move(group));
    if (next == std::string_view::npos || next >= body.size()) break;
    i = next + 1;
    if (trim(body.substr(i)).empty()) fail(line, "trailing comma");
  }
  return raw;
}

}  // namespace

std::string format_number(double value) {
  if (value == std::round(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

SocFile parse_soc(std::string_view text) {
  Rng rng(0);
  return parse_soc(text, rng);
}

SocFile parse_soc(std::string_view text, Rng& rng) {
  SocFile out;
  int n = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string_view meta = trim(line.substr(1));
      const std::size_t colon = meta.find(':');
      if (colon == std::string_view::npos) continue;
      const std::string_view key = trim(meta.substr(0, colon));
      const std::string_view value = trim(meta.substr(colon + 1));
      if (key == "NUMBER ALTERNATIVES") {
        if (!out.data.empty()) fail(line_no, "alternative count after data lines");
        n = parse_int(value, line_no);
        if (n < 2) fail(line_no, "need at least two alternatives");
        out.data = RankingDataset(n);
      } else if (key.starts_with("ALTERNATIVE NAME ")) {
        const int id = parse_int(key.substr(17), line_no);
        out.names[id - 1] = std::string(value);
      }
      continue;
    }
    if (n == 0) fail(line_no, "data line before '# NUMBER ALTERNATIVES' header");
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) fail(line_no, "expected 'count: order'");
    const double count = parse_count(line.substr(0, colon), line_no);
    const RawRankingWithTies raw = parse_order(line.substr(colon + 1), n, line_no);
    try {
      for (auto& [ranking, w] : break_ties(raw, rng, kSocMaxExpand)) {
        out.data.add(std::move(ranking), count * w);
      }
    } catch (const Error& e) {
      fail(line_no, e.what());
    }
  }
  if (n == 0) throw Error("missing '# NUMBER ALTERNATIVES' header");
  return out;
}

std::string write_soc(const RankingDataset& data,
                      const std::map<int, std::string>& names) {
  std::ostringstream os;
  os << "# DATA TYPE: " << (data.all_full() ? "soc" : "soi") << "\n";
  os << "# NUMBER ALTERNATIVES: " << data.n() << "\n";
  os << "# NUMBER VOTERS: " << format_number(data.total_weight()) << "\n";
  os << "# NUMBER UNIQUE ORDERS: " << data.size() << "\n";
  for (const auto& [id, name] : names) {
    os << "# ALTERNATIVE NAME " << id + 1 << ": " << name << "\n";
  }
  for (std::size_t l = 0; l < data.size(); ++l) {
    os << format_number(data.multiplicity(l)) << ": ";
    const auto& items = data.ranking(l).items;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) os << ',';
      os << items[i] + 1;
    }
    os << "\n";
  }
  return os.str();
}

SocFile read_soc_file(const std::string& path, Rng& rng) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_soc(ss.str(), rng);
}

void write_text_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << contents;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace plmix
