// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

// Fixture builders and independent reference implementations. The oracles
// here deliberately avoid the library's numerics: plain loops over doubles,
// no centroids, no clamping shortcuts.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "partyline/partyline.hpp"

namespace pltest {

using Vec = std::vector<double>;

inline partyline::EmbeddingStore store_of(const std::vector<Vec>& rows) {
  std::vector<partyline::TweetId> ids;
  std::vector<float> values;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ids.push_back(i + 1);
    for (double v : rows[i]) values.push_back(static_cast<float>(v));
  }
  return partyline::EmbeddingStore(rows.empty() ? 1 : rows[0].size(), std::move(ids), std::move(values));
}

// Rows as the store holds them (float precision), widened back to double.
inline std::vector<Vec> rows_of(const partyline::EmbeddingStore& s, const std::vector<std::size_t>& idx) {
  std::vector<Vec> out;
  for (auto i : idx) {
    const auto r = s.row(i);
    out.emplace_back(r.begin(), r.end());
  }
  return out;
}

inline std::vector<Vec> random_rows(std::mt19937_64& g, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> N(0.0, 1.0);
  std::vector<Vec> rows(n, Vec(dim));
  for (auto& r : rows)
    for (auto& v : r) v = N(g);
  return rows;
}

inline partyline::TweetRecord tweet(partyline::TweetId id, std::string author, std::string ts,
                                    std::set<std::string> tags, std::vector<partyline::Candidacy> cands,
                                    std::string text = "") {
  partyline::TweetRecord t;
  t.id = id;
  t.author_id = std::move(author);
  t.timestamp = *partyline::parse_timestamp(ts);
  t.hashtags = std::move(tags);
  t.candidacies = std::move(cands);
  t.text = text.empty() ? "tweet " + std::to_string(id) : std::move(text);
  return t;
}

namespace oracle {

inline double cosine(const Vec& a, const Vec& b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += static_cast<long double>(a[k]) * b[k];
    aa += static_cast<long double>(a[k]) * a[k];
    bb += static_cast<long double>(b[k]) * b[k];
  }
  return static_cast<double>(ab / std::sqrt(aa * bb));
}

// Mean cosine distance over the full cross product.
inline double topic_distance(const std::vector<Vec>& A, const std::vector<Vec>& B) {
  long double s = 0;
  for (const auto& a : A)
    for (const auto& b : B) s += 1.0L - cosine(a, b);
  return static_cast<double>(s / (static_cast<long double>(A.size()) * B.size()));
}

// Twin-matching distance computed literally: twin search, intra-party
// maxima and both directed similarities.
inline double twin_distance(const std::vector<Vec>& P1, const std::vector<Vec>& P2) {
  auto tw_cos = [](const Vec& s, const std::vector<Vec>& T) {
    double best = -2;
    for (const auto& t : T) best = std::max(best, cosine(s, t));
    return best;
  };
  auto C = [](const std::vector<Vec>& P) {
    double best = -2;
    for (std::size_t i = 0; i < P.size(); ++i)
      for (std::size_t j = 0; j < P.size(); ++j)
        if (i != j) best = std::max(best, cosine(P[i], P[j]));
    return best;
  };
  const double c = C(P1) + C(P2);
  double s12 = 0, s21 = 0;
  for (const auto& s : P1) s12 += tw_cos(s, P2);
  for (const auto& s : P2) s21 += tw_cos(s, P1);
  s12 /= P1.size() * c;
  s21 /= P2.size() * c;
  return 1.0 - (s12 + s21) / 2.0;
}

inline double pearson(const Vec& x, const Vec& y) {
  const long double n = x.size();
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  return static_cast<double>((n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

inline Vec upper(const std::vector<Vec>& m) {
  Vec out;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j) out.push_back(m[i][j]);
  return out;
}

// Exact permutation p-value: the share of all n! relabellings of B whose
// correlation is at least as extreme as the observed one (identity included).
inline double mantel_exact_p(const std::vector<Vec>& A, const std::vector<Vec>& B, partyline::Tail tail) {
  const auto n = A.size();
  const Vec x = upper(A);
  const double r0 = pearson(x, upper(B));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t hits = 0, total = 0;
  do {
    std::vector<Vec> P(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) P[i][j] = B[perm[i]][perm[j]];
    const double r = pearson(x, upper(P));
    bool hit = false;
    switch (tail) {
      case partyline::Tail::Greater: hit = r >= r0 - 1e-12; break;
      case partyline::Tail::Less: hit = r <= r0 + 1e-12; break;
      case partyline::Tail::TwoSided: hit = std::fabs(r) >= std::fabs(r0) - 1e-12; break;
    }
    hits += hit;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

inline std::vector<Vec> euclidean_matrix(const std::vector<Vec>& points) {
  std::vector<Vec> m(points.size(), Vec(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < points[i].size(); ++k) s += std::pow(static_cast<long double>(points[i][k]) - points[j][k], 2);
      m[i][j] = static_cast<double>(std::sqrt(s));
    }
  return m;
}

}  // namespace oracle

inline partyline::DistanceMatrix to_matrix(const std::vector<Vec>& m) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < m.size(); ++i) labels.push_back("L" + std::to_string(i));
  std::vector<double> v;
  for (const auto& row : m) v.insert(v.end(), row.begin(), row.end());
  return partyline::DistanceMatrix(labels, v);
}

inline std::vector<Vec> random_points(std::mt19937_64& g, std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Vec> p(n, Vec(dim));
  for (auto& r : p)
    for (auto& v : r) v = U(g);
  return p;
}

}  // namespace pltest
