// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "partyline/corpus.hpp"
#include "partyline/distance_matrix.hpp"
#include "partyline/embeddings.hpp"
#include "partyline/error.hpp"
#include "partyline/parallel.hpp"

/**
 * @file distances.hpp
 *
 * @brief Inter-party distances over sentence embeddings.
 *
 * Three families are provided:
 *
 * - Topic aggregation: for every hashtag shared by all parties, the mean
 *   pairwise cosine distance between the two parties' tweets carrying that
 *   hashtag; the party distance is the mean over hashtags.
 * - The plain average baseline: mean pairwise cosine distance over the
 *   parties' complete tweet sets.
 * - Twin matching: a hashtag-free quasi-metric built from each tweet's most
 *   similar tweet in the other party, normalized by the maximal intra-party
 *   similarities.
 *
 * Tweets are referred to by row index into an EmbeddingStore. All reductions
 * run in a fixed order (sorted hashtags, sorted row indices), so results do
 * not depend on input order or on the number of worker threads.
 */

namespace partyline {

using RowSpan = std::span<const std::size_t>;

/// Dot product accumulated in double.
inline double dot(std::span<const float> u, std::span<const float> v) {
  double s = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) s += static_cast<double>(u[k]) * v[k];
  return s;
}

inline double clamp_cosine(double c) { return std::clamp(c, -1.0, 1.0); }

/// Cosine similarity, clamped to [-1, 1]. Throws on a dimension mismatch or
/// a zero vector.
inline double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw ValidationError("cosine of vectors with different dimensions");
  const double nu = dot(u, u), nv = dot(v, v);
  if (nu == 0.0 || nv == 0.0) throw DegenerateError("cosine of a zero vector is undefined");
  return clamp_cosine(dot(u, v) * (1.0 / std::sqrt(nu)) * (1.0 / std::sqrt(nv)));
}

/// Cosine between two stored rows; identical to cosine(row(i), row(j)).
inline double cosine_rows(const EmbeddingStore& store, std::size_t i, std::size_t j) {
  return clamp_cosine(dot(store.row(i), store.row(j)) * store.inv_norm(i) * store.inv_norm(j));
}

namespace detail {

inline std::vector<std::size_t> sorted_copy(RowSpan rows) {
  std::vector<std::size_t> out(rows.begin(), rows.end());
  std::sort(out.begin(), out.end());
  return out;
}

inline void check_rows(RowSpan rows, const EmbeddingStore& store, const char* what) {
  if (rows.empty()) throw ValidationError(std::string(what) + " is empty");
  for (auto r : rows)
    if (r >= store.size()) throw ValidationError(std::string(what) + " refers to row " + std::to_string(r) + " outside the store");
}

}  // namespace detail

/// Mean of the unit-normalized rows, accumulated in ascending row order.
inline std::vector<double> unit_centroid(RowSpan rows, const EmbeddingStore& store) {
  detail::check_rows(rows, store, "row set");
  const auto sorted = detail::sorted_copy(rows);
  std::vector<double> c(store.dim(), 0.0);
  for (auto r : sorted) {
    const auto row = store.row(r);
    const double s = store.inv_norm(r);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += row[k] * s;
  }
  const double n = static_cast<double>(sorted.size());
  for (auto& v : c) v /= n;
  return c;
}

namespace detail {

inline double centroid_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d += a[k] * b[k];
  return std::clamp(1.0 - d, 0.0, 2.0);
}

}  // namespace detail

/// Mean of (1 − cos) over all |a|·|b| cross pairs, by direct enumeration.
inline double topic_distance_bruteforce(RowSpan a, RowSpan b, const EmbeddingStore& store) {
  detail::check_rows(a, store, "first tweet set");
  detail::check_rows(b, store, "second tweet set");
  auto sa = detail::sorted_copy(a), sb = detail::sorted_copy(b);
  // Fixed outer/inner roles make the sum bitwise symmetric in (a, b).
  if (std::lexicographical_compare(sb.begin(), sb.end(), sa.begin(), sa.end())) std::swap(sa, sb);
  double sum = 0.0;
  for (auto i : sa)
    for (auto j : sb) sum += 1.0 - cosine_rows(store, i, j);
  return sum / (static_cast<double>(sa.size()) * static_cast<double>(sb.size()));
}

/// Same quantity as topic_distance_bruteforce in O((|a|+|b|)·dim):
/// mean_{i,j} cos(x_i, y_j) = ⟨mean_i x̂_i, mean_j ŷ_j⟩ for unit rows x̂, ŷ.
inline double topic_distance_fast(RowSpan a, RowSpan b, const EmbeddingStore& store) {
  detail::check_rows(a, store, "first tweet set");
  detail::check_rows(b, store, "second tweet set");
  return detail::centroid_distance(unit_centroid(a, store), unit_centroid(b, store));
}

enum class TopicMethod { Centroid, BruteForce };

inline double topic_distance(RowSpan a, RowSpan b, const EmbeddingStore& store, TopicMethod method) {
  return method == TopicMethod::Centroid ? topic_distance_fast(a, b, store) : topic_distance_bruteforce(a, b, store);
}

// ---------------------------------------------------------------------------
// Topic aggregation

/// Row indices of one hashtag's tweets, grouped by party.
struct TopicSlice {
  std::string hashtag;
  std::map<std::string, std::vector<std::size_t>> per_party;
};

/// One TopicSlice per hashtag in `hashtags`, built from tweets whose author
/// has a candidacy in `year`. Every such tweet carrying a requested hashtag
/// must have an embedding row; otherwise ValidationError names the id.
template <typename Range>
std::vector<TopicSlice> build_topic_slices(const Range& tweets, int year, const std::set<std::string>& hashtags,
                                           const EmbeddingStore& store) {
  std::map<std::string, TopicSlice> slices;
  for (const auto& h : hashtags) slices[h].hashtag = h;
  for (const auto& item : tweets) {
    const TweetRecord& t = as_record(item);
    const auto* c = t.candidacy(year);
    if (!c) continue;
    std::optional<std::size_t> row;
    for (const auto& h : t.hashtags) {
      const auto it = slices.find(h);
      if (it == slices.end()) continue;
      if (!row) {
        row = store.row_of(t.id);
        if (!row) throw ValidationError("tweet " + std::to_string(t.id) + " has no embedding row");
      }
      it->second.per_party[c->party].push_back(*row);
    }
  }
  std::vector<TopicSlice> out;
  out.reserve(slices.size());
  for (auto& [h, s] : slices) {
    for (auto& [p, rows] : s.per_party) std::sort(rows.begin(), rows.end());
    out.push_back(std::move(s));
  }
  return out;
}

struct AggregateOptions {
  TopicMethod method = TopicMethod::Centroid;
};

/// Entry (a, b) is the mean over slices of topic_distance(slice[a], slice[b]).
/// Every slice must contain rows for every party in `parties`.
inline DistanceMatrix aggregate_topics(const std::vector<TopicSlice>& slices, const std::vector<std::string>& parties,
                                       const EmbeddingStore& store, AggregateOptions opts = {}) {
  if (slices.empty()) throw DegenerateError("no shared hashtags: every party must use at least one common hashtag");
  DistanceMatrix out(parties);
  const std::size_t n = parties.size();

  std::vector<const TopicSlice*> ordered;
  for (const auto& s : slices) {
    for (const auto& p : parties) {
      const auto it = s.per_party.find(p);
      if (it == s.per_party.end() || it->second.empty())
        throw ValidationError("hashtag '" + s.hashtag + "' has no tweets from party '" + p + "'");
    }
    ordered.push_back(&s);
  }
  std::sort(ordered.begin(), ordered.end(), [](auto* x, auto* y) { return x->hashtag < y->hashtag; });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

  // per_slice[s * |pairs| + p]; filled in parallel, reduced in slice order.
  std::vector<double> per_slice(ordered.size() * pairs.size());
  parallel_for(ordered.size(), [&](std::size_t s) {
    const auto& slice = *ordered[s];
    std::vector<const std::vector<std::size_t>*> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = &slice.per_party.at(parties[i]);
    if (opts.method == TopicMethod::Centroid) {
      std::vector<std::vector<double>> centroids(n);
      for (std::size_t i = 0; i < n; ++i) centroids[i] = unit_centroid(*rows[i], store);
      for (std::size_t p = 0; p < pairs.size(); ++p)
        per_slice[s * pairs.size() + p] = detail::centroid_distance(centroids[pairs[p].first], centroids[pairs[p].second]);
    } else {
      for (std::size_t p = 0; p < pairs.size(); ++p)
        per_slice[s * pairs.size() + p] = topic_distance_bruteforce(*rows[pairs[p].first], *rows[pairs[p].second], store);
    }
  });

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    double sum = 0.0;
    for (std::size_t s = 0; s < ordered.size(); ++s) sum += per_slice[s * pairs.size() + p];
    out.set(pairs[p].first, pairs[p].second, sum / static_cast<double>(ordered.size()));
  }
  return out;
}

/// Topic distance applied once to each pair of complete party tweet sets.
inline DistanceMatrix average_baseline(const std::vector<std::string>& parties,
                                       const std::map<std::string, std::vector<std::size_t>>& sets,
                                       const EmbeddingStore& store, TopicMethod method = TopicMethod::Centroid) {
  for (const auto& p : parties) {
    const auto it = sets.find(p);
    if (it == sets.end() || it->second.empty()) throw ValidationError("party '" + p + "' has no tweets");
  }
  TopicSlice all;
  all.hashtag = "*";
  for (const auto& p : parties) all.per_party[p] = sets.at(p);
  return aggregate_topics({all}, parties, store, {method});
}

// ---------------------------------------------------------------------------
// Twin matching

struct TwinMatch {
  std::size_t row;
  double cosine;
};

/// Row in `candidates` with the highest cosine to `query`; ties go to the
/// smallest row index.
inline TwinMatch best_match(std::span<const float> query, RowSpan candidates, const EmbeddingStore& store) {
  if (candidates.empty()) throw ValidationError("twin search over an empty set");
  if (query.size() != store.dim()) throw ValidationError("query dimension does not match the store");
  const double qn = dot(query, query);
  if (qn == 0.0) throw DegenerateError("twin of a zero vector is undefined");
  const double q_inv = 1.0 / std::sqrt(qn);
  TwinMatch best{0, -2.0};
  bool found = false;
  for (auto r : candidates) {
    if (r >= store.size()) throw ValidationError("twin candidate row " + std::to_string(r) + " outside the store");
    const double c = clamp_cosine(dot(query, store.row(r)) * q_inv * store.inv_norm(r));
    if (!found || c > best.cosine || (c == best.cosine && r < best.row)) {
      best = {r, c};
      found = true;
    }
  }
  return best;
}

inline std::size_t twin(std::span<const float> query, RowSpan candidates, const EmbeddingStore& store) {
  return best_match(query, candidates, store).row;
}

/// Maximum cosine over pairs of distinct positions in `rows`. Duplicate rows
/// at different positions count as distinct members.
inline double max_intra_sim(RowSpan rows, const EmbeddingStore& store) {
  if (rows.size() < 2) throw ValidationError("maximal intra-set similarity needs at least two tweets");
  detail::check_rows(rows, store, "tweet set");
  std::vector<double> best(rows.size() - 1, -1.0);
  parallel_for(rows.size() - 1, [&](std::size_t i) {
    double m = -1.0;
    for (std::size_t j = i + 1; j < rows.size(); ++j) m = std::max(m, cosine_rows(store, rows[i], rows[j]));
    best[i] = m;
  });
  return *std::max_element(best.begin(), best.end());
}

namespace detail {

// Σ_{s∈from} cos(s, tw(s, to)) / (|from| · denominator)
inline double twin_similarity(const std::vector<std::size_t>& from, const std::vector<std::size_t>& to, double denominator,
                              const EmbeddingStore& store) {
  std::vector<double> matched(from.size());
  parallel_for(from.size(), [&](std::size_t i) { matched[i] = best_match(store.row(from[i]), to, store).cosine; });
  double sum = 0.0;
  for (double c : matched) sum += c;
  return sum / (static_cast<double>(from.size()) * denominator);
}

inline double twin_distance_given(const std::vector<std::size_t>& p1, const std::vector<std::size_t>& p2, double c1,
                                  double c2, const EmbeddingStore& store) {
  if (p1 == p2) return 0.0;
  const double denominator = c1 + c2;
  if (!(denominator > 0.0))
    throw DegenerateError("twin similarity is undefined: maximal intra-party similarities sum to " +
                          std::to_string(denominator) + " (all tweets within each party are orthogonal or opposed)");
  const double forward = twin_similarity(p1, p2, denominator, store);
  const double backward = twin_similarity(p2, p1, denominator, store);
  return 1.0 - (forward + backward) / 2.0;
}

}  // namespace detail

/// Twin-matching quasi-metric: 0 when both sets hold the same rows,
/// otherwise 1 − (sim(P1,P2) + sim(P2,P1)) / 2 with
/// sim(P1,P2) = Σ_{s∈P1} cos(s, tw(s,P2)) / (|P1| (C(P1) + C(P2))).
inline double twin_distance(RowSpan p1, RowSpan p2, const EmbeddingStore& store) {
  if (p1.size() < 2 || p2.size() < 2) throw ValidationError("twin distance needs at least two tweets per party");
  const auto s1 = detail::sorted_copy(p1), s2 = detail::sorted_copy(p2);
  if (s1 == s2) return 0.0;
  return detail::twin_distance_given(s1, s2, max_intra_sim(s1, store), max_intra_sim(s2, store), store);
}

inline DistanceMatrix twin_distance_matrix(const std::vector<std::string>& parties,
                                           const std::map<std::string, std::vector<std::size_t>>& sets,
                                           const EmbeddingStore& store) {
  std::vector<std::vector<std::size_t>> rows;
  std::vector<double> intra;
  for (const auto& p : parties) {
    const auto it = sets.find(p);
    if (it == sets.end() || it->second.size() < 2) throw ValidationError("party '" + p + "' needs at least two tweets for twin distance");
    rows.push_back(detail::sorted_copy(it->second));
    intra.push_back(max_intra_sim(rows.back(), store));
  }
  DistanceMatrix out(parties);
  for (std::size_t i = 0; i < parties.size(); ++i)
    for (std::size_t j = i + 1; j < parties.size(); ++j) {
      const double d = detail::twin_distance_given(rows[i], rows[j], intra[i], intra[j], store);
      if (d < 0.0)
        throw DegenerateError("twin distance between '" + parties[i] + "' and '" + parties[j] + "' is negative (" +
                              std::to_string(d) + "): cross-party twins are more similar than any intra-party pair");
      out.set(i, j, d);
    }
  return out;
}

}  // namespace partyline
