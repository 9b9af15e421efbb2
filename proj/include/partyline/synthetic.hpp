// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "partyline/corpus.hpp"
#include "partyline/distance_matrix.hpp"
#include "partyline/embeddings.hpp"
#include "partyline/rng.hpp"

namespace partyline {

/// Synthetic corpus with a planted party geometry, used as an end-to-end
/// fixture. Hashtags are drawn independently of party, so every topic is
/// covered by every party and the ideological signal lives only in the
/// embeddings.
struct SyntheticConfig {
  std::size_t n_parties = 6;
  std::size_t politicians_per_party = 30;
  std::size_t tweets_per_politician = 200;
  std::size_t dim = 32;
  double separation = 5.0;
  std::uint64_t seed = 1;
  int year = 2021;
  std::size_t n_topics = 40;
  std::size_t max_hashtags_per_tweet = 3;
  /// Tweets of politicians in this group carry no party signal.
  std::optional<Group> noise_group;
};

struct SyntheticCorpus {
  std::vector<TweetRecord> tweets;
  EmbeddingStore store;
  DistanceMatrix truth;  // Euclidean distances between scaled party means
  std::vector<std::vector<double>> party_means;
};

inline std::string synthetic_party_name(std::size_t p) { return "P" + std::to_string(p + 1); }

/// Politicians cycle through New, Continuing, Old and non-elected
/// newcomers, so every group is populated in every party.
inline Candidacy synthetic_candidacy(std::size_t politician, int year, const std::string& party) {
  switch (politician % 4) {
    case 0: return {year, party, true, false};   // New
    case 1: return {year, party, true, true};    // Continuing
    case 2: return {year, party, false, true};   // Old
    default: return {year, party, false, false};  // lost, first run
  }
}

inline SyntheticCorpus generate_synthetic(const SyntheticConfig& cfg) {
  rng::Engine engine{rng::derive(cfg.seed, 0x53594e5448ULL)};
  std::normal_distribution<double> gauss(0.0, 1.0);
  SyntheticCorpus out;

  // Unit-length party directions, scaled by the separation.
  std::vector<std::string> labels;
  for (std::size_t p = 0; p < cfg.n_parties; ++p) {
    std::vector<double> mean(cfg.dim);
    double sq = 0.0;
    for (auto& v : mean) {
      v = gauss(engine);
      sq += v * v;
    }
    const double scale = cfg.separation / std::sqrt(sq);
    for (auto& v : mean) v *= scale;
    out.party_means.push_back(std::move(mean));
    labels.push_back(synthetic_party_name(p));
  }

  out.truth = DistanceMatrix(labels);
  for (std::size_t i = 0; i < cfg.n_parties; ++i)
    for (std::size_t j = i + 1; j < cfg.n_parties; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < cfg.dim; ++k) {
        const double d = out.party_means[i][k] - out.party_means[j][k];
        sq += d * d;
      }
      out.truth.set(i, j, std::sqrt(sq));
    }

  const auto year_start = make_utc(cfg.year, 1, 1);
  const auto year_ms = static_cast<std::uint64_t>((make_utc(cfg.year + 1, 1, 1) - year_start).count());

  std::vector<TweetId> ids;
  std::vector<float> values;
  TweetId next_id = 1;
  for (std::size_t p = 0; p < cfg.n_parties; ++p) {
    for (std::size_t pol = 0; pol < cfg.politicians_per_party; ++pol) {
      const std::string author = labels[p] + "-" + std::to_string(pol);
      const Candidacy cand = synthetic_candidacy(pol, cfg.year, labels[p]);
      const bool noise = cfg.noise_group && *cfg.noise_group != Group::All && in_group(cand, *cfg.noise_group);
      for (std::size_t k = 0; k < cfg.tweets_per_politician; ++k) {
        TweetRecord t;
        t.id = next_id++;
        t.author_id = author;
        // Whole seconds keep the JSONL form canonical.
        t.timestamp = year_start + std::chrono::seconds(rng::uniform_below(engine, year_ms / 1000));
        t.candidacies.push_back(cand);
        const auto n_tags = 1 + rng::uniform_below(engine, cfg.max_hashtags_per_tweet);
        while (t.hashtags.size() < std::min<std::size_t>(n_tags, cfg.n_topics)) {
          char tag[16];
          std::snprintf(tag, sizeof tag, "topic%03u", static_cast<unsigned>(rng::uniform_below(engine, cfg.n_topics)));
          t.hashtags.insert(tag);
        }
        t.text = "synthetic post " + std::to_string(t.id) + " by " + author;
        for (const auto& h : t.hashtags) t.text += " #" + h;

        std::vector<double> v(cfg.dim);
        double sq = 0.0;
        for (std::size_t d = 0; d < cfg.dim; ++d) {
          v[d] = gauss(engine) + (noise ? 0.0 : out.party_means[p][d]);
          sq += v[d] * v[d];
        }
        const double inv = 1.0 / std::sqrt(sq);
        for (double x : v) values.push_back(static_cast<float>(x * inv));
        ids.push_back(t.id);
        out.tweets.push_back(std::move(t));
      }
    }
  }
  out.store = EmbeddingStore(cfg.dim, std::move(ids), std::move(values));
  return out;
}

}  // namespace partyline
