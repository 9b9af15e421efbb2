// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "partyline/corpus.hpp"

namespace partyline {

/// Inverted index hashtag → tweet ids for the candidates of one election
/// year, with per-party usage counts.
struct HashtagIndex {
  int year = 0;
  std::map<std::string, std::vector<TweetId>> postings;  // ids ascending
  std::map<std::string, std::map<std::string, std::size_t>> party_coverage;

  std::size_t posting_size(const std::string& hashtag) const {
    const auto it = postings.find(hashtag);
    return it == postings.end() ? 0 : it->second.size();
  }
};

/// Indexes every tweet whose author has a candidacy for `year`; other tweets
/// are left out. `tweets` is a range of TweetRecord or of pointers to them.
template <typename Range>
HashtagIndex build_index(const Range& tweets, int year) {
  HashtagIndex index;
  index.year = year;
  for (const auto& item : tweets) {
    const TweetRecord& t = as_record(item);
    const auto* c = t.candidacy(year);
    if (!c) continue;
    for (const auto& h : t.hashtags) {
      index.postings[h].push_back(t.id);
      ++index.party_coverage[h][c->party];
    }
  }
  for (auto& [h, ids] : index.postings) std::sort(ids.begin(), ids.end());
  return index;
}

/// Hashtags used at least once by every party in `parties`.
inline std::set<std::string> eval_hashtags(const HashtagIndex& index, const std::set<std::string>& parties) {
  std::set<std::string> out;
  if (parties.empty()) return out;
  for (const auto& [h, coverage] : index.party_coverage) {
    const bool all = std::all_of(parties.begin(), parties.end(), [&](const std::string& p) {
      const auto it = coverage.find(p);
      return it != coverage.end() && it->second > 0;
    });
    if (all) out.insert(h);
  }
  return out;
}

struct TrainingHashtagRule {
  std::size_t min_parties = 3;
  std::size_t min_uses = 50;
};

/// Hashtags spanning at least `min_parties` parties and used at least
/// `min_uses` times in total.
inline std::set<std::string> training_hashtags(const HashtagIndex& index, TrainingHashtagRule rule = {}) {
  std::set<std::string> out;
  for (const auto& [h, coverage] : index.party_coverage) {
    std::size_t parties = 0;
    std::size_t uses = 0;
    for (const auto& [party, n] : coverage) {
      if (n > 0) ++parties;
      uses += n;
    }
    if (parties >= rule.min_parties && uses >= rule.min_uses) out.insert(h);
  }
  return out;
}

inline nlohmann::json index_to_json(const HashtagIndex& index) {
  nlohmann::json tags = nlohmann::json::object();
  for (const auto& [h, ids] : index.postings) {
    tags[h] = {{"count", ids.size()}, {"parties", index.party_coverage.at(h)}, {"ids", ids}};
  }
  return {{"year", index.year}, {"hashtags", std::move(tags)}};
}

}  // namespace partyline
