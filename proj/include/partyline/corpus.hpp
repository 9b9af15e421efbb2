// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <type_traits>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "partyline/error.hpp"
#include "partyline/hashtag.hpp"
#include "partyline/timestamp.hpp"

namespace partyline {

using TweetId = std::uint64_t;

struct Candidacy {
  int year = 0;
  std::string party;
  bool elected = false;
  bool incumbent = false;

  bool operator==(const Candidacy&) const = default;
};

struct TweetRecord {
  TweetId id = 0;
  std::string text;
  std::string author_id;
  Timestamp timestamp{};
  HashtagSet hashtags;
  std::vector<Candidacy> candidacies;

  const Candidacy* candidacy(int year) const {
    for (const auto& c : candidacies)
      if (c.year == year) return &c;
    return nullptr;
  }

  /// Party of the author's candidacy for `year`, if any.
  std::optional<std::string> party(int year) const {
    if (const auto* c = candidacy(year)) return c->party;
    return std::nullopt;
  }

  bool operator==(const TweetRecord&) const = default;
};

/// Lets corpus algorithms accept ranges of records or of record pointers.
template <typename T>
const TweetRecord& as_record(const T& x) {
  if constexpr (std::is_pointer_v<T>) {
    return *x;
  } else {
    return x;
  }
}

namespace detail {

inline TweetId parse_tweet_id(const nlohmann::json& v, std::size_t line) {
  if (v.is_number_unsigned()) return v.get<TweetId>();
  if (v.is_number_integer()) {
    const auto s = v.get<std::int64_t>();
    if (s < 0) throw ParseError(line, "negative id");
    return static_cast<TweetId>(s);
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    TweetId id = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty()) throw ParseError(line, "id '" + s + "' is not an unsigned integer");
    return id;
  }
  throw ParseError(line, "id must be an unsigned integer or a digit string");
}

inline const std::string& require_string(const nlohmann::json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(line, std::string("missing required field '") + key + "'");
  if (!it->is_string()) throw ParseError(line, std::string("field '") + key + "' must be a string");
  return it->get_ref<const std::string&>();
}

inline Candidacy parse_candidacy(const nlohmann::json& c, std::size_t line) {
  if (!c.is_object()) throw ParseError(line, "candidacy must be an object");
  Candidacy out;
  const auto year = c.find("year");
  if (year == c.end() || !year->is_number_integer()) throw ParseError(line, "candidacy year must be an integer");
  out.year = year->get<int>();
  if (out.year < 1000 || out.year > 9999) throw ParseError(line, "candidacy year " + std::to_string(out.year) + " is not four digits");
  out.party = require_string(c, "party", line);
  if (out.party.empty()) throw ParseError(line, "candidacy party is empty");
  for (auto [key, dest] : {std::pair{"elected", &out.elected}, std::pair{"incumbent", &out.incumbent}}) {
    const auto it = c.find(key);
    if (it == c.end()) continue;
    if (!it->is_boolean()) throw ParseError(line, std::string("candidacy field '") + key + "' must be boolean");
    *dest = it->get<bool>();
  }
  return out;
}

}  // namespace detail

/// Parses one JSON object into a TweetRecord. `line` is used for diagnostics.
inline TweetRecord parse_tweet(const std::string& json_line, std::size_t line) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(json_line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(line, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ParseError(line, "expected a JSON object");

  TweetRecord t;
  const auto id = obj.find("id");
  if (id == obj.end()) throw ParseError(line, "missing required field 'id'");
  t.id = detail::parse_tweet_id(*id, line);
  t.author_id = detail::require_string(obj, "author_id", line);
  const auto& ts = detail::require_string(obj, "timestamp", line);
  const auto parsed = parse_timestamp(ts);
  if (!parsed) throw ParseError(line, "timestamp '" + ts + "' is not ISO-8601 UTC");
  t.timestamp = *parsed;

  if (const auto text = obj.find("text"); text != obj.end() && !text->is_null()) {
    if (!text->is_string()) throw ParseError(line, "field 'text' must be a string");
    t.text = text->get<std::string>();
  }

  if (const auto tags = obj.find("hashtags"); tags != obj.end() && !tags->is_null()) {
    if (!tags->is_array()) throw ParseError(line, "field 'hashtags' must be an array");
    for (const auto& h : *tags) {
      if (!h.is_string()) throw ParseError(line, "hashtag entries must be strings");
      try {
        t.hashtags.insert(normalize_hashtag(h.get_ref<const std::string&>()));
      } catch (const ParseError& e) {
        throw ParseError(line, e.what());
      }
    }
  } else {
    t.hashtags = extract_hashtags(t.text);
  }

  if (const auto cands = obj.find("candidacies"); cands != obj.end() && !cands->is_null()) {
    if (!cands->is_array()) throw ParseError(line, "field 'candidacies' must be an array");
    for (const auto& c : *cands) {
      auto cand = detail::parse_candidacy(c, line);
      if (t.candidacy(cand.year)) throw ParseError(line, "two candidacies for year " + std::to_string(cand.year));
      t.candidacies.push_back(std::move(cand));
    }
  }
  return t;
}

/// Reads line-delimited JSON tweets in input order. Blank lines are skipped.
inline std::vector<TweetRecord> parse_tweets(std::istream& in) {
  std::vector<TweetRecord> tweets;
  std::unordered_set<TweetId> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto t = parse_tweet(line, line_no);
    if (!seen.insert(t.id).second) throw ParseError(line_no, "duplicate tweet id " + std::to_string(t.id));
    tweets.push_back(std::move(t));
  }
  return tweets;
}

inline nlohmann::json tweet_to_json(const TweetRecord& t) {
  nlohmann::json cands = nlohmann::json::array();
  for (const auto& c : t.candidacies)
    cands.push_back({{"year", c.year}, {"party", c.party}, {"elected", c.elected}, {"incumbent", c.incumbent}});
  return {{"id", t.id},
          {"text", t.text},
          {"author_id", t.author_id},
          {"timestamp", format_timestamp(t.timestamp)},
          {"hashtags", t.hashtags},
          {"candidacies", std::move(cands)}};
}

inline void write_tweets(std::ostream& out, const std::vector<TweetRecord>& tweets) {
  for (const auto& t : tweets) out << tweet_to_json(t).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Filtering

enum class Group { All, New, Continuing, Old };

inline const char* to_string(Group g) {
  switch (g) {
    case Group::New: return "New";
    case Group::Continuing: return "Continuing";
    case Group::Old: return "Old";
    case Group::All: break;
  }
  return "All";
}

/// New: elected and not incumbent. Continuing: elected and incumbent.
/// Old: incumbent and not elected. All: any candidacy.
inline bool in_group(const Candidacy& c, Group g) {
  switch (g) {
    case Group::New: return c.elected && !c.incumbent;
    case Group::Continuing: return c.elected && c.incumbent;
    case Group::Old: return !c.elected && c.incumbent;
    case Group::All: return true;
  }
  return false;
}

struct DateRange {
  Timestamp start;  // inclusive
  Timestamp end;    // exclusive

  bool contains(Timestamp t) const { return start <= t && t < end; }
};

struct CorpusFilter {
  std::optional<int> year;  // keep authors with a candidacy in this year
  std::optional<std::set<std::string>> party_set;
  std::optional<DateRange> date_range;
  std::optional<Group> group;
  bool require_hashtag = false;

  void validate() const {
    if (date_range && !(date_range->start < date_range->end))
      throw ConfigError("date range start must precede its end");
    if (group && *group != Group::All && !year) throw ConfigError("group filter requires a year");
    if (party_set && !year) throw ConfigError("party filter requires a year");
  }

  bool accepts(const TweetRecord& t) const {
    if (date_range && !date_range->contains(t.timestamp)) return false;
    if (require_hashtag && t.hashtags.empty()) return false;
    if (year) {
      const auto* c = t.candidacy(*year);
      if (!c) return false;
      if (party_set && !party_set->count(c->party)) return false;
      if (group && !in_group(*c, *group)) return false;
    }
    return true;
  }
};

/// Keeps the tweets satisfying every criterion present in `filter`, in input
/// order.
inline std::vector<TweetRecord> apply_filter(const std::vector<TweetRecord>& tweets, const CorpusFilter& filter) {
  filter.validate();
  std::vector<TweetRecord> kept;
  std::copy_if(tweets.begin(), tweets.end(), std::back_inserter(kept), [&](const TweetRecord& t) { return filter.accepts(t); });
  return kept;
}

}  // namespace partyline
