// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "partyline/csv.hpp"
#include "partyline/distance_matrix.hpp"
#include "partyline/error.hpp"

namespace partyline {

inline constexpr const char* kLengthCategory = "__length__";

/// Per-party manifesto category salience: counts divided by the number of
/// annotated quasi-sentences.
struct CMPVector {
  std::string party;
  std::map<std::string, double> salience;
  std::uint64_t length = 0;
};

/// Accepts codes of the MARPOR codebook family: `000`, a domain digit 1–7
/// followed by two digits, with an optional sub-code (`201.1`, `103_2`), and
/// the `per` prefix used in dataset column names (`per501`).
inline bool is_codebook_category(const std::string& code) {
  static const std::regex pattern(R"(^(per)?(000|[1-7][0-9]{2}([._][0-9]{1,2})?)$)");
  return std::regex_match(code, pattern);
}

struct CMPTable {
  std::vector<CMPVector> vectors;     // parties in order of first appearance
  std::vector<std::string> warnings;  // unknown category codes (rows kept)
};

/// Parses `party,category,count` rows plus one `party,__length__,L` row per
/// party.
inline CMPTable build_cmp_vectors(std::istream& in) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!csv::read_row(in, fields, line)) throw ParseError("CMP counts file is empty");
  if (fields != std::vector<std::string>{"party", "category", "count"})
    throw ParseError(line, "CMP header must be 'party,category,count'");

  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, std::uint64_t>> counts;
  std::map<std::string, std::uint64_t> lengths;
  std::set<std::string> unknown;
  CMPTable table;

  while (csv::read_row(in, fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != 3) throw ParseError(line, "expected 3 fields");
    const auto& [party, category, raw] = std::tie(fields[0], fields[1], fields[2]);
    if (party.empty()) throw ParseError(line, "empty party name");
    std::uint64_t value = 0;
    const auto [end, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
    if (raw.empty() || ec != std::errc{} || end != raw.data() + raw.size())
      throw ParseError(line, "count '" + raw + "' is not a non-negative integer");

    if (!counts.count(party) && !lengths.count(party)) order.push_back(party);
    if (category == kLengthCategory) {
      if (!lengths.emplace(party, value).second) throw ParseError(line, "second length row for party '" + party + "'");
      continue;
    }
    if (!counts[party].emplace(category, value).second)
      throw ParseError(line, "duplicate category '" + category + "' for party '" + party + "'");
    if (!is_codebook_category(category) && unknown.insert(category).second)
      table.warnings.push_back("line " + std::to_string(line) + ": unknown category code '" + category + "' (kept)");
  }

  for (const auto& party : order) {
    const auto len = lengths.find(party);
    if (len == lengths.end()) throw ValidationError("party '" + party + "' has no " + kLengthCategory + " row");
    if (len->second == 0) throw ValidationError("party '" + party + "' has manifesto length 0");
    CMPVector v{party, {}, len->second};
    for (const auto& [cat, n] : counts[party]) v.salience[cat] = static_cast<double>(n) / static_cast<double>(len->second);
    table.vectors.push_back(std::move(v));
  }
  return table;
}

/// Euclidean distances between salience vectors over the union of their
/// categories (absent categories count as 0).
inline DistanceMatrix cmp_distance_matrix(const std::vector<CMPVector>& vectors) {
  if (vectors.size() < 2) throw ValidationError("ground truth needs at least two parties");
  std::vector<std::string> labels;
  std::set<std::string> seen, categories;
  for (const auto& v : vectors) {
    if (!seen.insert(v.party).second) throw ValidationError("duplicate party '" + v.party + "' in ground truth");
    labels.push_back(v.party);
    for (const auto& [c, s] : v.salience) categories.insert(c);
  }
  auto value = [](const CMPVector& v, const std::string& c) {
    const auto it = v.salience.find(c);
    return it == v.salience.end() ? 0.0 : it->second;
  };
  DistanceMatrix out(labels);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      double sq = 0.0;
      for (const auto& c : categories) {
        const double d = value(vectors[i], c) - value(vectors[j], c);
        sq += d * d;
      }
      out.set(i, j, std::sqrt(sq));
    }
  return out;
}

}  // namespace partyline
