// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "partyline/corpus.hpp"
#include "partyline/csv.hpp"
#include "partyline/error.hpp"
#include "partyline/hashtag_index.hpp"
#include "partyline/parallel.hpp"
#include "partyline/rng.hpp"

/**
 * @file pairgen.hpp
 *
 * @brief Contrastive training pairs mined from hashtag co-occurrence.
 *
 * Positive pairs share a hashtag; negative pairs pair a tweet carrying a
 * hashtag with a tweet whose hashtag set is disjoint from it. Each distinct
 * pair is owned by exactly one hashtag (the smallest shared eligible hashtag
 * for positives, the smallest eligible hashtag of either tweet for
 * negatives), so per-hashtag sampling tasks never produce the same pair and
 * can run independently. Budgets are allocated in proportion to each
 * hashtag's positive cross-product size C(n, 2); a hashtag that runs out of
 * owned pairs hands its shortfall to the others until either the target is
 * met or every hashtag is exhausted.
 */

namespace partyline {

enum class PairLabel { Negative = 0, Positive = 1 };

struct TrainingPair {
  TweetId id_a = 0;  // id_a < id_b
  TweetId id_b = 0;
  PairLabel label = PairLabel::Positive;
  std::string hashtag;  // owning hashtag

  bool operator==(const TrainingPair&) const = default;
};

struct PairConfig {
  std::uint64_t max_examples = 2'500'000;
  std::uint64_t seed = 0;
  int start_year = 1000;  // tweets with timestamps in [start_year, end_year]
  int end_year = 9999;

  void validate() const {
    if (max_examples == 0) throw ConfigError("max_examples must be positive");
    if (max_examples % 2 != 0) throw ConfigError("max_examples must be even so both labels get the same share");
    if (start_year > end_year) throw ConfigError("pair window start year is after its end year");
  }
};

namespace detail {

struct PairKey {
  TweetId a, b;
  bool operator==(const PairKey&) const = default;
};

struct PairKeyHash {
  std::size_t operator()(const PairKey& k) const noexcept {
    return static_cast<std::size_t>(rng::mix64(k.a * 0x9e3779b97f4a7c15ULL ^ k.b));
  }
};

inline bool sorted_disjoint(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) return false;
    if (x[i] < y[j]) ++i; else ++j;
  }
  return true;
}

inline std::uint32_t smallest_shared(const std::vector<std::uint32_t>& x, const std::vector<std::uint32_t>& y) {
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i] == y[j]) return x[i];
    if (x[i] < y[j]) ++i; else ++j;
  }
  return std::numeric_limits<std::uint32_t>::max();
}

// Largest-remainder split of `total` across weights; zero weights get zero.
inline std::vector<std::uint64_t> apportion(std::uint64_t total, const std::vector<long double>& weights) {
  std::vector<std::uint64_t> out(weights.size(), 0);
  long double sum = 0;
  for (auto w : weights) sum += w;
  if (sum <= 0 || total == 0) return out;
  std::vector<std::pair<long double, std::size_t>> remainders;
  std::uint64_t given = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const long double exact = static_cast<long double>(total) * weights[i] / sum;
    out[i] = static_cast<std::uint64_t>(exact);
    given += out[i];
    if (weights[i] > 0) remainders.emplace_back(exact - static_cast<long double>(out[i]), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](auto& x, auto& y) { return x.first > y.first; });
  for (std::size_t k = 0; given < total && !remainders.empty(); k = (k + 1) % remainders.size()) {
    ++out[remainders[k].second];
    ++given;
  }
  return out;
}

class PairSampler {
 public:
  // Candidate spaces up to this size are enumerated and shuffled instead of
  // rejection-sampled.
  static constexpr std::uint64_t kEnumerateLimit = 1'000'000;
  // Beyond this the fallback enumeration is skipped and whatever rejection
  // sampling found is treated as the hashtag's full supply.
  static constexpr std::uint64_t kEnumerateHardLimit = 64'000'000;

  PairSampler(const std::vector<TweetRecord>& tweets, const HashtagIndex& index, const std::set<std::string>& hashtags,
              const PairConfig& cfg)
      : seed_(cfg.seed) {
    std::unordered_map<TweetId, const TweetRecord*> windowed;
    for (const auto& t : tweets) {
      const int y = utc_year(t.timestamp);
      if (y >= cfg.start_year && y <= cfg.end_year) windowed.emplace(t.id, &t);
    }

    std::set<TweetId> universe;
    for (const auto& h : hashtags) {
      const auto it = index.postings.find(h);
      if (it == index.postings.end()) continue;
      std::vector<TweetId> members;
      for (auto id : it->second)
        if (windowed.count(id)) members.push_back(id);
      if (members.empty()) continue;
      hashtags_.push_back(h);
      universe.insert(members.begin(), members.end());
      postings_.push_back(std::move(members));
    }
    if (hashtags_.empty()) throw ValidationError("no eligible hashtag has tweets inside the pair window");
    if (universe.size() < 2) throw ValidationError("pair generation needs at least two distinct tweets");

    // Dictionary over every hashtag used in the universe; eligible hashtags
    // sort first, in hashtag order, so their dictionary ids match hashtags_.
    std::map<std::string, std::uint32_t> dict;
    for (std::uint32_t i = 0; i < hashtags_.size(); ++i) dict.emplace(hashtags_[i], i);
    for (auto id : universe)
      for (const auto& h : windowed.at(id)->hashtags) dict.emplace(h, static_cast<std::uint32_t>(dict.size()));

    universe_.assign(universe.begin(), universe.end());
    for (auto id : universe_) {
      TweetTags tags;
      for (const auto& h : windowed.at(id)->hashtags) {
        const auto code = dict.at(h);
        tags.all.push_back(code);
        if (code < hashtags_.size()) tags.eligible.push_back(code);
      }
      std::sort(tags.all.begin(), tags.all.end());
      std::sort(tags.eligible.begin(), tags.eligible.end());
      tags_.emplace(id, std::move(tags));
    }

    for (const auto& p : postings_) {
      const long double m = static_cast<long double>(p.size());
      weights_.push_back(m * (m - 1) / 2);
    }
  }

  /// Up to `target` distinct pairs of `label`, as many as exist when fewer.
  std::vector<TrainingPair> sample(PairLabel label, std::uint64_t target) const {
    const std::size_t H = hashtags_.size();
    std::vector<bool> exhausted(H, false);
    std::vector<std::uint64_t> budget(H, 0);
    std::vector<std::vector<PairKey>> drawn(H);
    std::vector<bool> dirty(H, false);

    auto add_allocation = [&](std::uint64_t amount) {
      std::vector<long double> w(H, 0);
      bool any_positive = false;
      for (std::size_t h = 0; h < H; ++h)
        if (!exhausted[h] && weights_[h] > 0) any_positive = true;
      for (std::size_t h = 0; h < H; ++h) {
        if (exhausted[h]) continue;
        // Once every hashtag with a positive cross product is exhausted,
        // fall back to posting sizes so singleton hashtags still anchor
        // negatives.
        w[h] = any_positive ? weights_[h] : static_cast<long double>(postings_[h].size());
      }
      const auto extra = apportion(amount, w);
      for (std::size_t h = 0; h < H; ++h)
        if (extra[h] > 0) {
          budget[h] += extra[h];
          dirty[h] = true;
        }
    };

    add_allocation(target);
    for (;;) {
      std::vector<std::size_t> todo;
      for (std::size_t h = 0; h < H; ++h)
        if (dirty[h]) todo.push_back(h);
      if (todo.empty()) break;
      parallel_for(todo.size(), [&](std::size_t k) {
        const auto h = todo[k];
        drawn[h] = draw(label, static_cast<std::uint32_t>(h), budget[h]);
      });
      std::uint64_t total = 0;
      for (std::size_t h = 0; h < H; ++h) {
        dirty[h] = false;
        if (drawn[h].size() < budget[h]) exhausted[h] = true;
        total += drawn[h].size();
      }
      if (total >= target || std::all_of(exhausted.begin(), exhausted.end(), [](bool e) { return e; })) break;
      add_allocation(target - total);
    }

    std::vector<TrainingPair> out;
    for (std::size_t h = 0; h < H; ++h)
      for (const auto& k : drawn[h]) out.push_back({k.a, k.b, label, hashtags_[h]});
    return out;
  }

 private:
  struct TweetTags {
    std::vector<std::uint32_t> all;       // dictionary ids, sorted
    std::vector<std::uint32_t> eligible;  // subset < hashtags_.size(), sorted
  };

  bool owns(PairLabel label, std::uint32_t h, TweetId a, TweetId b) const {
    const auto& ta = tags_.at(a);
    const auto& tb = tags_.at(b);
    if (label == PairLabel::Positive) return smallest_shared(ta.eligible, tb.eligible) == h;
    if (!sorted_disjoint(ta.all, tb.all)) return false;
    // Anchor a carries h; the pair belongs to h when h is the smallest
    // eligible hashtag across both tweets.
    return !ta.eligible.empty() && ta.eligible.front() == h && (tb.eligible.empty() || tb.eligible.front() > h);
  }

  static PairKey key(TweetId x, TweetId y) { return x < y ? PairKey{x, y} : PairKey{y, x}; }

  std::vector<PairKey> draw(PairLabel label, std::uint32_t h, std::uint64_t want) const {
    const auto& members = postings_[h];
    const std::uint64_t m = members.size();
    const std::uint64_t space = label == PairLabel::Positive ? m * (m - 1) / 2 : m * universe_.size();
    if (want == 0 || space == 0) return {};
    auto engine = rng::make_engine(seed_, rng::derive(rng::hash_string(hashtags_[h]), static_cast<std::uint64_t>(label)));

    if (space > kEnumerateLimit && want * 4 <= space) {
      std::vector<PairKey> out;
      std::unordered_set<PairKey, PairKeyHash> seen;
      const std::uint64_t max_attempts = want * 64 + 10'000;
      for (std::uint64_t attempt = 0; attempt < max_attempts && out.size() < want; ++attempt) {
        TweetId a, b;
        if (label == PairLabel::Positive) {
          const auto i = rng::uniform_below(engine, m);
          auto j = rng::uniform_below(engine, m - 1);
          if (j >= i) ++j;
          a = members[i];
          b = members[j];
        } else {
          a = members[rng::uniform_below(engine, m)];
          b = universe_[rng::uniform_below(engine, universe_.size())];
          if (a == b) continue;
        }
        if (!owns(label, h, a, b)) continue;
        const auto k = key(a, b);
        if (seen.insert(k).second) out.push_back(k);
      }
      if (out.size() == want || space > kEnumerateHardLimit) return out;
      // Owned pairs are too sparse for rejection sampling; enumerate below.
    }

    std::vector<PairKey> all;
    if (label == PairLabel::Positive) {
      for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
          if (owns(label, h, members[i], members[j])) all.push_back(key(members[i], members[j]));
    } else {
      for (auto a : members)
        for (auto b : universe_)
          if (a != b && owns(label, h, a, b)) all.push_back(key(a, b));
    }
    if (all.size() > want) {
      // Partial Fisher-Yates: the first `want` slots are a uniform sample.
      for (std::uint64_t i = 0; i < want; ++i) {
        const auto j = i + rng::uniform_below(engine, all.size() - i);
        std::swap(all[i], all[j]);
      }
      all.resize(want);
    }
    return all;
  }

  std::uint64_t seed_;
  std::vector<std::string> hashtags_;          // eligible, sorted
  std::vector<std::vector<TweetId>> postings_;  // per eligible hashtag, windowed
  std::vector<long double> weights_;
  std::vector<TweetId> universe_;  // sorted
  std::unordered_map<TweetId, TweetTags> tags_;
};

}  // namespace detail

/// Balanced positive/negative pairs for contrastive fine-tuning: exactly
/// 2·min(max_examples/2, positives available, negatives available) pairs,
/// sorted by (hashtag, id_a, id_b). Deterministic for a given seed.
inline std::vector<TrainingPair> sample_pairs(const std::vector<TweetRecord>& tweets, const HashtagIndex& index,
                                              const std::set<std::string>& hashtags, const PairConfig& cfg) {
  cfg.validate();
  if (hashtags.empty()) throw ValidationError("no eligible hashtag for pair generation");
  const detail::PairSampler sampler(tweets, index, hashtags, cfg);

  const std::uint64_t half = cfg.max_examples / 2;
  auto positives = sampler.sample(PairLabel::Positive, half);
  auto negatives = sampler.sample(PairLabel::Negative, positives.size());
  if (negatives.size() < positives.size()) positives = sampler.sample(PairLabel::Positive, negatives.size());

  std::vector<TrainingPair> out = std::move(positives);
  out.insert(out.end(), negatives.begin(), negatives.end());
  std::sort(out.begin(), out.end(), [](const TrainingPair& x, const TrainingPair& y) {
    return std::tie(x.hashtag, x.id_a, x.id_b, x.label) < std::tie(y.hashtag, y.id_a, y.id_b, y.label);
  });
  return out;
}

/// CSV `text_a,text_b,label` with label 1 for positives and 0 for negatives.
inline void write_pairs(std::ostream& out, const std::vector<TrainingPair>& pairs,
                        const std::vector<TweetRecord>& tweets) {
  std::unordered_map<TweetId, const std::string*> text;
  for (const auto& t : tweets) text.emplace(t.id, &t.text);
  auto lookup = [&](TweetId id) -> const std::string& {
    const auto it = text.find(id);
    if (it == text.end() || it->second->empty()) throw ValidationError("no text for tweet " + std::to_string(id));
    return *it->second;
  };
  csv::write_row(out, {"text_a", "text_b", "label"});
  for (const auto& p : pairs)
    csv::write_row(out, {lookup(p.id_a), lookup(p.id_b), p.label == PairLabel::Positive ? "1" : "0"});
}

}  // namespace partyline
