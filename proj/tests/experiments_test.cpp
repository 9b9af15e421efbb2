// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace partyline;

namespace {

SyntheticCorpus small_corpus(double separation = 5.0, std::uint64_t seed = 3) {
  SyntheticConfig cfg;
  cfg.n_parties = 5;
  cfg.politicians_per_party = 8;
  cfg.tweets_per_politician = 30;
  cfg.dim = 16;
  cfg.n_topics = 10;
  cfg.separation = separation;
  cfg.seed = seed;
  return generate_synthetic(cfg);
}

ExperimentContext context(const SyntheticCorpus& c) {
  ExperimentContext ctx;
  ctx.tweets = &c.tweets;
  ctx.store = &c.store;
  ctx.truth = c.truth;
  ctx.year = 2021;
  return ctx;
}

}  // namespace

TEST(Synthetic, ShapeAndDeterminism) {
  const auto a = small_corpus();
  const auto b = small_corpus();
  EXPECT_EQ(a.tweets.size(), 5u * 8 * 30);
  EXPECT_EQ(a.store.size(), a.tweets.size());
  EXPECT_EQ(a.tweets, b.tweets);
  EXPECT_EQ(a.truth, b.truth);
  EXPECT_EQ(a.truth.labels(), (std::vector<std::string>{"P1", "P2", "P3", "P4", "P5"}));
  for (std::size_t i = 0; i < a.store.size(); i += 97) EXPECT_NEAR(1.0 / a.store.inv_norm(i), 1.0, 1e-6);
  EXPECT_NE(small_corpus(5.0, 4).tweets, a.tweets);
}

TEST(Subsample, SizesAndDeterminism) {
  EXPECT_EQ(subsample_size(1000, 0.125), 125u);
  EXPECT_EQ(subsample_size(7, 0.5), 4u);
  EXPECT_EQ(subsample_size(10, 1.0), 10u);
  const auto c = small_corpus();
  TweetRefs base;
  for (const auto& t : c.tweets) base.push_back(&t);
  const auto s1 = subsample(base, 0.25, 2);
  EXPECT_EQ(s1.size(), subsample_size(base.size(), 0.25));
  EXPECT_EQ(s1, subsample(base, 0.25, 2));
  EXPECT_NE(s1, subsample(base, 0.25, 3));
  EXPECT_TRUE(std::is_sorted(s1.begin(), s1.end()));
  EXPECT_EQ(std::set<const TweetRecord*>(s1.begin(), s1.end()).size(), s1.size());
  EXPECT_EQ(subsample(base, 1.0, 9).size(), base.size());
}

TEST(Temporal, WindowBoundaries) {
  const auto w = temporal_windows(2021, TemporalMode::Windows);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[0].name, "full-year");
  EXPECT_EQ(w[1].range.start, make_utc(2021, 1, 1));
  EXPECT_EQ(w[1].range.end, make_utc(2021, 10, 1));
  EXPECT_EQ(w[3].range.start, make_utc(2021, 6, 1));
  const auto m = temporal_windows(2021, TemporalMode::Months);
  ASSERT_EQ(m.size(), 9u);
  EXPECT_EQ(m[1].range.start, make_utc(2021, 2, 1));
  EXPECT_EQ(m[1].range.end, make_utc(2021, 3, 1));
  EXPECT_EQ(m[8].range.end, make_utc(2021, 10, 1));
}

TEST(Experiments, ConsistentAcrossDrivers) {
  const auto c = small_corpus();
  const auto ctx = context(c);
  const auto full = run_full(ctx);
  ASSERT_EQ(full.runs.size(), 1u);
  ASSERT_TRUE(full.runs[0].ok) << full.runs[0].error;
  ASSERT_TRUE(full.runs[0].baseline_mantel);
  const double r = full.runs[0].mantel->r;
  EXPECT_GT(r, 0.9);

  const auto sub = run_subsample(ctx, {{1.0}, {1, 2}});
  for (const auto& run : sub.runs) EXPECT_EQ(run.mantel->r, r);
  const auto groups = run_groups(ctx);
  ASSERT_EQ(groups.runs.size(), 4u);
  EXPECT_EQ(groups.runs[3].config_summary, "All");
  EXPECT_EQ(groups.runs[3].mantel->r, r);
  const auto temporal = run_temporal(ctx, TemporalMode::Windows);
  EXPECT_EQ(temporal.runs[0].mantel->r, r);
  EXPECT_EQ(temporal.runs[0].n_tweets, full.runs[0].n_tweets);
}

TEST(Experiments, ThreadCountDoesNotChangeReport) {
  const auto c = small_corpus();
  const auto ctx = context(c);
  set_max_threads(1);
  const auto serial = report_to_json(run_subsample(ctx, {{0.5, 0.25}, {1, 2, 3}}));
  set_max_threads(6);
  const auto parallel = report_to_json(run_subsample(ctx, {{0.5, 0.25}, {1, 2, 3}}));
  set_max_threads(0);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial["runs"].size(), 6u);
  EXPECT_EQ(serial["summary"]["per_fraction"].size(), 2u);
}

TEST(Experiments, FailedRunIsRecordedNotThrown) {
  auto c = small_corpus();
  // Move every P1 tweet to December so the months before it lack P1.
  for (auto& t : c.tweets)
    if (t.candidacy(2021)->party == "P1") t.timestamp = make_utc(2021, 12, 5);
  const auto report = run_temporal(context(c), TemporalMode::Months);
  ASSERT_EQ(report.runs.size(), 9u);
  for (const auto& run : report.runs) {
    EXPECT_FALSE(run.ok);
    EXPECT_FALSE(run.error.empty());
  }
  std::ostringstream csv_out;
  write_report_csv(csv_out, report);
  std::istringstream in(csv_out.str());
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "experiment,config,n_tweets,n_hashtags,r,p\r");
  EXPECT_EQ(first.substr(first.size() - 3), ",,\r");
}

TEST(Experiments, MissingEmbeddingFailsFast) {
  const auto c = small_corpus();
  auto tweets = c.tweets;
  tweets[5].id = 999999;
  auto ctx = context(c);
  ctx.tweets = &tweets;
  EXPECT_THROW(run_full(ctx), ValidationError);
}

TEST(Experiments, NoiseGroupLosesSignal) {
  SyntheticConfig cfg;
  cfg.n_parties = 6;
  cfg.politicians_per_party = 12;
  cfg.tweets_per_politician = 30;
  cfg.dim = 16;
  cfg.n_topics = 8;
  cfg.noise_group = Group::Old;
  const auto c = generate_synthetic(cfg);
  const auto report = run_groups(context(c));
  ASSERT_TRUE(report.runs[0].ok);
  ASSERT_TRUE(report.runs[2].ok);
  EXPECT_EQ(report.runs[2].config_summary, "Old");
  EXPECT_GT(report.runs[0].mantel->r, 0.9);
  EXPECT_LT(report.runs[2].mantel->r, report.runs[0].mantel->r);
}

TEST(Centroids, ExportMatchesUnitCentroid) {
  std::vector<TweetRecord> tweets{
      pltest::tweet(1, "a", "2021-02-01T00:00:00Z", {}, {{2021, "A", true, false}}),
      pltest::tweet(2, "a", "2021-03-01T00:00:00Z", {"x"}, {{2021, "A", true, false}}),
      pltest::tweet(3, "b", "2020-03-01T00:00:00Z", {}, {{2021, "B", true, false}}),
      pltest::tweet(4, "c", "2021-03-01T00:00:00Z", {}, {{2017, "C", true, false}})};
  const auto s = pltest::store_of({{2, 0}, {0, 3}, {1, 1}, {1, 0}});
  const auto table = export_centroids(tweets, s, 2021);
  ASSERT_EQ(table.rows.size(), 1u);
  EXPECT_EQ(table.rows[0].author_id, "a");
  EXPECT_EQ(table.rows[0].n_tweets, 2u);
  EXPECT_NEAR(table.rows[0].centroid[0], 0.5, 1e-12);
  EXPECT_NEAR(table.rows[0].centroid[1], 0.5, 1e-12);
  EXPECT_EQ(table.skipped, 1u);

  std::ostringstream out;
  write_centroids_csv(out, table, 2);
  EXPECT_EQ(out.str(), "author_id,party,n_tweets,c0,c1\r\na,A,2,0.5,0.5\r\n# skipped_politicians=1\r\n");

  EXPECT_TRUE(export_centroids(tweets, s, 2021, std::set<std::string>{"B"}).rows.empty());
}
