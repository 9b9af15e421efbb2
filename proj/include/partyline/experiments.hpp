// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "partyline/corpus.hpp"
#include "partyline/distance_matrix.hpp"
#include "partyline/distances.hpp"
#include "partyline/embeddings.hpp"
#include "partyline/error.hpp"
#include "partyline/hashtag_index.hpp"
#include "partyline/mantel.hpp"
#include "partyline/parallel.hpp"
#include "partyline/rng.hpp"

/**
 * @file experiments.hpp
 *
 * @brief Experiment drivers over an assembled corpus.
 *
 * Every run evaluates one subset of the evaluation year's tweets: the
 * hashtags used by all parties are re-derived on that subset, the topic
 * aggregation matrix is built, and it is compared with the ground-truth
 * matrix by a Mantel test. Runs that cannot be evaluated (no shared hashtag,
 * a constant matrix, ...) are recorded as failed instead of aborting the
 * experiment.
 *
 * The evaluation year's data are the tweets whose author has a candidacy in
 * that year, for a party present in the ground truth, timestamped within the
 * calendar year (UTC).
 */

namespace partyline {

using TweetRefs = std::vector<const TweetRecord*>;

struct ExperimentContext {
  const std::vector<TweetRecord>* tweets = nullptr;
  const EmbeddingStore* store = nullptr;
  DistanceMatrix truth;  // ground truth; its labels define the party set
  int year = 2021;
  MantelOptions mantel;
  TopicMethod method = TopicMethod::Centroid;
  bool baseline = false;  // also evaluate the plain average baseline

  std::set<std::string> parties() const { return {truth.labels().begin(), truth.labels().end()}; }
};

struct RunRecord {
  std::string config_summary;
  nlohmann::json config;
  bool ok = false;
  std::string error;
  std::size_t n_tweets = 0;  // tweets carrying at least one shared hashtag
  std::size_t n_hashtags = 0;
  std::map<std::string, std::size_t> party_tweets;
  std::optional<DistanceMatrix> matrix;
  std::optional<MantelResult> mantel;
  std::optional<DistanceMatrix> baseline_matrix;
  std::optional<MantelResult> baseline_mantel;
};

struct ExperimentReport {
  std::string name;
  std::vector<RunRecord> runs;
  std::vector<std::uint64_t> seed_set;
  nlohmann::json summary = nlohmann::json::object();
};

/// The evaluation year's tweets (see file comment), in corpus order.
inline TweetRefs year_tweets(const ExperimentContext& ctx) {
  const auto parties = ctx.parties();
  const DateRange year{make_utc(ctx.year, 1, 1), make_utc(ctx.year + 1, 1, 1)};
  TweetRefs out;
  for (const auto& t : *ctx.tweets) {
    const auto* c = t.candidacy(ctx.year);
    if (c && parties.count(c->party) && year.contains(t.timestamp)) out.push_back(&t);
  }
  return out;
}

/// Evaluates one subset. Never throws for data-dependent failures; those end
/// up in RunRecord::error.
inline RunRecord evaluate_run(const ExperimentContext& ctx, const TweetRefs& subset, std::string summary,
                              nlohmann::json config) {
  RunRecord run;
  run.config_summary = std::move(summary);
  run.config = std::move(config);
  try {
    const auto parties = ctx.parties();
    const auto index = build_index(subset, ctx.year);
    const auto hashtags = eval_hashtags(index, parties);
    run.n_hashtags = hashtags.size();

    TweetRefs used;
    for (const auto* t : subset) {
      const bool shared = std::any_of(t->hashtags.begin(), t->hashtags.end(), [&](const auto& h) { return hashtags.count(h) > 0; });
      if (!shared) continue;
      used.push_back(t);
      ++run.party_tweets[t->candidacy(ctx.year)->party];
    }
    run.n_tweets = used.size();
    if (hashtags.empty()) throw DegenerateError("no hashtag is used by every party in this sample");

    const auto& labels = ctx.truth.labels();
    const auto slices = build_topic_slices(used, ctx.year, hashtags, *ctx.store);
    run.matrix = aggregate_topics(slices, labels, *ctx.store, {ctx.method});
    run.mantel = mantel_test(*run.matrix, ctx.truth, ctx.mantel);

    if (ctx.baseline) {
      std::map<std::string, std::vector<std::size_t>> sets;
      for (const auto* t : used) sets[t->candidacy(ctx.year)->party].push_back(*ctx.store->row_of(t->id));
      run.baseline_matrix = average_baseline(labels, sets, *ctx.store, ctx.method);
      run.baseline_mantel = mantel_test(*run.baseline_matrix, ctx.truth, ctx.mantel);
    }
    run.ok = true;
  } catch (const Error& e) {
    run.ok = false;
    run.error = e.what();
  }
  return run;
}

namespace detail {

inline nlohmann::json base_config(const ExperimentContext& ctx) {
  return {{"year", ctx.year},
          {"method", ctx.method == TopicMethod::Centroid ? "centroid" : "bruteforce"},
          {"mantel", {{"permutations", ctx.mantel.permutations}, {"seed", ctx.mantel.seed}, {"tail", to_string(ctx.mantel.tail)}}}};
}

inline void check_context(const ExperimentContext& ctx) {
  if (!ctx.tweets || !ctx.store) throw ConfigError("experiment context needs tweets and an embedding store");
}

}  // namespace detail

/// Fails fast when an evaluation tweet has no embedding row.
inline void require_embeddings(const TweetRefs& tweets, const EmbeddingStore& store) {
  std::size_t missing = 0;
  std::string examples;
  for (const auto* t : tweets) {
    if (store.row_of(t->id)) continue;
    if (++missing <= 5) examples += (examples.empty() ? "" : ", ") + std::to_string(t->id);
  }
  if (missing)
    throw ValidationError(std::to_string(missing) + " evaluation tweet(s) have no embedding row (e.g. " + examples + ")");
}

namespace detail {

inline TweetRefs assembled_year(const ExperimentContext& ctx) {
  check_context(ctx);
  auto year = year_tweets(ctx);
  require_embeddings(year, *ctx.store);
  return year;
}

}  // namespace detail

/// One run over the whole evaluation year, always accompanied by the plain
/// average baseline.
inline ExperimentReport run_full(const ExperimentContext& ctx) {
  const auto year = detail::assembled_year(ctx);
  ExperimentContext with_baseline = ctx;
  with_baseline.baseline = true;
  ExperimentReport report{"full", {}, {ctx.mantel.seed}, nlohmann::json::object()};
  auto config = detail::base_config(ctx);
  config["filter"] = {{"year", ctx.year}};
  report.runs.push_back(evaluate_run(with_baseline, year, "full year " + std::to_string(ctx.year), std::move(config)));
  return report;
}

struct SubsampleOptions {
  std::vector<double> fractions{0.875, 0.75, 0.625, 0.5, 0.375, 0.25, 0.125};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

inline std::size_t subsample_size(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

/// Uniform sample without replacement of round(fraction·n) tweets, kept in
/// corpus order. The RNG stream depends only on (seed, fraction).
inline TweetRefs subsample(const TweetRefs& base, double fraction, std::uint64_t seed) {
  const auto k = subsample_size(base.size(), fraction);
  std::vector<std::size_t> order(base.size());
  std::iota(order.begin(), order.end(), 0);
  auto engine = rng::make_engine(seed, static_cast<std::uint64_t>(std::llround(fraction * 1e9)));
  for (std::size_t i = 0; i < k; ++i) std::swap(order[i], order[i + rng::uniform_below(engine, order.size() - i)]);
  order.resize(k);
  std::sort(order.begin(), order.end());
  TweetRefs out;
  out.reserve(k);
  for (auto i : order) out.push_back(base[i]);
  return out;
}

/// Repeated random subsampling of the year's evaluation tweets (those with at
/// least one hashtag shared by all parties on the full year). Reports mean and
/// standard deviation of r per fraction over completed runs.
inline ExperimentReport run_subsample(const ExperimentContext& ctx, const SubsampleOptions& opts = {}) {
  for (double f : opts.fractions)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("subsample fractions must lie in (0, 1]");
  if (opts.seeds.empty()) throw ConfigError("subsampling needs at least one seed");

  const auto year = detail::assembled_year(ctx);
  const auto shared = eval_hashtags(build_index(year, ctx.year), ctx.parties());
  TweetRefs base;
  for (const auto* t : year)
    if (std::any_of(t->hashtags.begin(), t->hashtags.end(), [&](const auto& h) { return shared.count(h) > 0; }))
      base.push_back(t);

  struct Job {
    double fraction;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (double f : opts.fractions)
    for (auto s : opts.seeds) jobs.push_back({f, s});

  ExperimentReport report{"subsample", std::vector<RunRecord>(jobs.size()), opts.seeds, nlohmann::json::object()};
  parallel_for(jobs.size(), [&](std::size_t i) {
    const auto sample = subsample(base, jobs[i].fraction, jobs[i].seed);
    auto config = detail::base_config(ctx);
    config["fraction"] = jobs[i].fraction;
    config["sample_seed"] = jobs[i].seed;
    config["sample_size"] = sample.size();
    config["population"] = base.size();
    report.runs[i] = evaluate_run(ctx, sample, "fraction=" + format_value(jobs[i].fraction) + " seed=" + std::to_string(jobs[i].seed),
                                  std::move(config));
  });

  nlohmann::json per_fraction = nlohmann::json::array();
  for (double f : opts.fractions) {
    std::vector<double> rs;
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (jobs[i].fraction == f && report.runs[i].ok) rs.push_back(report.runs[i].mantel->r);
    nlohmann::json entry{{"fraction", f}, {"completed", rs.size()}, {"failed", opts.seeds.size() - rs.size()}};
    if (!rs.empty()) {
      const double mean = std::accumulate(rs.begin(), rs.end(), 0.0) / static_cast<double>(rs.size());
      double ss = 0.0;
      for (double r : rs) ss += (r - mean) * (r - mean);
      entry["mean_r"] = mean;
      entry["std_r"] = rs.size() > 1 ? std::sqrt(ss / static_cast<double>(rs.size() - 1)) : 0.0;
    }
    per_fraction.push_back(std::move(entry));
  }
  report.summary["per_fraction"] = std::move(per_fraction);
  return report;
}

enum class TemporalMode { Windows, Months };

/// Month in which the election is held; windows end on the first day of the
/// following month.
inline constexpr unsigned kElectionMonth = 9;

struct TemporalWindow {
  std::string name;
  DateRange range;
};

/// Windows: the full calendar year (reference), then Jan–Sep, Mar–Sep and
/// Jun–Sep. Months: each month from January to the election month.
inline std::vector<TemporalWindow> temporal_windows(int year, TemporalMode mode) {
  std::vector<TemporalWindow> out;
  const auto end = make_utc(year, kElectionMonth + 1, 1);
  if (mode == TemporalMode::Windows) {
    out.push_back({"full-year", {make_utc(year, 1, 1), make_utc(year + 1, 1, 1)}});
    out.push_back({"Jan-Sep", {make_utc(year, 1, 1), end}});
    out.push_back({"Mar-Sep", {make_utc(year, 3, 1), end}});
    out.push_back({"Jun-Sep", {make_utc(year, 6, 1), end}});
  } else {
    static constexpr const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep"};
    for (unsigned m = 1; m <= kElectionMonth; ++m) out.push_back({names[m - 1], {make_utc(year, m, 1), make_utc(year, m + 1, 1)}});
  }
  return out;
}

inline ExperimentReport run_temporal(const ExperimentContext& ctx, TemporalMode mode) {
  const auto year = detail::assembled_year(ctx);
  const auto windows = temporal_windows(ctx.year, mode);
  ExperimentReport report{mode == TemporalMode::Windows ? "temporal-windows" : "temporal-months",
                          std::vector<RunRecord>(windows.size()), {ctx.mantel.seed}, nlohmann::json::object()};
  parallel_for(windows.size(), [&](std::size_t i) {
    TweetRefs slice;
    for (const auto* t : year)
      if (windows[i].range.contains(t->timestamp)) slice.push_back(t);
    auto config = detail::base_config(ctx);
    config["window"] = {{"name", windows[i].name},
                        {"start", format_timestamp(windows[i].range.start)},
                        {"end", format_timestamp(windows[i].range.end)}};
    report.runs[i] = evaluate_run(ctx, slice, windows[i].name, std::move(config));
  });
  return report;
}

/// New, Continuing and Old politicians, then All for reference.
inline ExperimentReport run_groups(const ExperimentContext& ctx) {
  const auto year = detail::assembled_year(ctx);
  const std::vector<Group> groups{Group::New, Group::Continuing, Group::Old, Group::All};
  ExperimentReport report{"groups", std::vector<RunRecord>(groups.size()), {ctx.mantel.seed}, nlohmann::json::object()};
  parallel_for(groups.size(), [&](std::size_t i) {
    TweetRefs members;
    for (const auto* t : year)
      if (in_group(*t->candidacy(ctx.year), groups[i])) members.push_back(t);
    auto config = detail::base_config(ctx);
    config["group"] = to_string(groups[i]);
    report.runs[i] = evaluate_run(ctx, members, to_string(groups[i]), std::move(config));
  });
  return report;
}

// ---------------------------------------------------------------------------
// Politician centroids

struct PoliticianCentroid {
  std::string author_id;
  std::string party;
  std::size_t n_tweets = 0;
  std::vector<double> centroid;  // mean of unit-normalized rows
};

struct CentroidTable {
  std::vector<PoliticianCentroid> rows;  // sorted by author_id
  std::size_t skipped = 0;               // candidates of the year without tweets in it
};

/// Centroids of each candidate's tweets within the calendar year. Every such
/// tweet must have an embedding row. When `parties` is given only those
/// parties are exported.
inline CentroidTable export_centroids(const std::vector<TweetRecord>& tweets, const EmbeddingStore& store, int year,
                                      const std::optional<std::set<std::string>>& parties = std::nullopt) {
  const DateRange range{make_utc(year, 1, 1), make_utc(year + 1, 1, 1)};
  std::map<std::string, std::string> party_of;
  std::map<std::string, std::vector<std::size_t>> rows;
  for (const auto& t : tweets) {
    const auto* c = t.candidacy(year);
    if (!c || (parties && !parties->count(c->party))) continue;
    party_of.emplace(t.author_id, c->party);
    if (!range.contains(t.timestamp)) continue;
    const auto row = store.row_of(t.id);
    if (!row) throw ValidationError("tweet " + std::to_string(t.id) + " has no embedding row");
    rows[t.author_id].push_back(*row);
  }
  CentroidTable table;
  for (const auto& [author, party] : party_of) {
    const auto it = rows.find(author);
    if (it == rows.end()) {
      ++table.skipped;
      continue;
    }
    table.rows.push_back({author, party, it->second.size(), unit_centroid(it->second, store)});
  }
  return table;
}

/// Header `author_id,party,n_tweets,c0,…`; a trailing comment line records
/// how many candidates were skipped.
inline void write_centroids_csv(std::ostream& out, const CentroidTable& table, std::size_t dim) {
  std::vector<std::string> row{"author_id", "party", "n_tweets"};
  for (std::size_t k = 0; k < dim; ++k) row.push_back("c" + std::to_string(k));
  csv::write_row(out, row);
  for (const auto& c : table.rows) {
    row.assign({c.author_id, c.party, std::to_string(c.n_tweets)});
    for (double v : c.centroid) row.push_back(format_value(v));
    csv::write_row(out, row);
  }
  out << "# skipped_politicians=" << table.skipped << "\r\n";
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::json matrix_to_json(const DistanceMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return {{"labels", m.labels()}, {"values", std::move(rows)}};
}

inline nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : report.runs) {
    nlohmann::json j{{"config_summary", r.config_summary}, {"config", r.config},          {"status", r.ok ? "ok" : "failed"},
                     {"n_tweets", r.n_tweets},             {"n_hashtags", r.n_hashtags}, {"party_tweets", r.party_tweets}};
    if (!r.ok) j["error"] = r.error;
    if (r.matrix) j["matrix"] = matrix_to_json(*r.matrix);
    if (r.mantel) j["mantel"] = mantel_to_json(*r.mantel);
    if (r.baseline_matrix) j["baseline_matrix"] = matrix_to_json(*r.baseline_matrix);
    if (r.baseline_mantel) j["baseline_mantel"] = mantel_to_json(*r.baseline_mantel);
    runs.push_back(std::move(j));
  }
  return {{"experiment", report.name}, {"seed_set", report.seed_set}, {"summary", report.summary}, {"runs", std::move(runs)}};
}

/// One row per run: experiment,config,n_tweets,n_hashtags,r,p. Failed runs
/// leave r and p empty.
inline void write_report_csv(std::ostream& out, const ExperimentReport& report, bool header = true) {
  if (header) csv::write_row(out, {"experiment", "config", "n_tweets", "n_hashtags", "r", "p"});
  for (const auto& r : report.runs) {
    csv::write_row(out, {report.name, r.config_summary, std::to_string(r.n_tweets), std::to_string(r.n_hashtags),
                         r.mantel ? format_value(r.mantel->r) : "", r.mantel ? format_value(r.mantel->p_value) : ""});
    if (r.baseline_mantel)
      csv::write_row(out, {report.name, r.config_summary + " [average baseline]", std::to_string(r.n_tweets),
                           std::to_string(r.n_hashtags), format_value(r.baseline_mantel->r),
                           format_value(r.baseline_mantel->p_value)});
  }
}

}  // namespace partyline
