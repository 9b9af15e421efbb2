// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

// partyline command-line driver. Exit codes: 0 success, 1 usage or
// configuration error, 2 data error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "partyline/partyline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace partyline;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::vector<TweetRecord> read_tweets(const std::string& path) {
  auto in = open_in(path);
  try {
    return parse_tweets(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DistanceMatrix read_matrix(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

// Writes `text` to `path`, or to stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// Resolved options of the innermost selected subcommand.
std::string resolved_config(const CLI::App& app) {
  const CLI::App* cur = &app;
  while (!cur->get_subcommands().empty()) cur = cur->get_subcommands().front();
  return cur->config_to_str(true, false);
}

// Resolved configuration and seed beside a file artifact.
void write_meta(const std::string& path, const CLI::App& app, const std::string& command, json extra) {
  if (path.empty() || path == "-") return;
  extra["command"] = command;
  extra["config"] = resolved_config(app);
  emit(path + ".meta.json", extra.dump(2) + "\n");
}

Tail parse_tail(const std::string& s) {
  if (s == "greater") return Tail::Greater;
  if (s == "less") return Tail::Less;
  return Tail::TwoSided;
}

PermutationMode parse_mode(const std::string& s) {
  if (s == "exhaustive") return PermutationMode::Exhaustive;
  if (s == "sampled") return PermutationMode::Sampled;
  return PermutationMode::Auto;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::vector<std::string> files;
  bool json_out = false;
};

std::string sniff_kind(const std::string& path) {
  const auto ext = fs::path(path).extension().string();
  if (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") return "tweets";
  if (ext == ".plemb" || ext == ".bin") return "embeddings";
  if (ext == ".csv") {
    auto in = open_in(path);
    std::string first;
    std::getline(in, first);
    if (!first.empty() && first.back() == '\r') first.pop_back();
    return first == "party,category,count" ? "cmp" : "matrix";
  }
  throw ConfigError("cannot infer file type of " + path + " (expected .jsonl, .plemb or .csv)");
}

int cmd_validate(const ValidateArgs& a) {
  json report = json::array();
  std::vector<TweetRecord> tweets;
  std::optional<EmbeddingStore> store;
  bool have_tweets = false;
  for (const auto& path : a.files) {
    const auto kind = sniff_kind(path);
    json entry{{"file", path}, {"kind", kind}};
    if (kind == "tweets") {
      auto t = read_tweets(path);
      entry["records"] = t.size();
      tweets.insert(tweets.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
      have_tweets = true;
    } else if (kind == "embeddings") {
      store = load_embeddings(path);
      entry["records"] = store->size();
      entry["dim"] = store->dim();
    } else if (kind == "cmp") {
      auto in = open_in(path);
      const auto table = build_cmp_vectors(in);
      entry["parties"] = table.vectors.size();
      entry["warnings"] = table.warnings;
      for (const auto& w : table.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
    } else {
      const auto m = read_matrix(path);
      entry["parties"] = m.size();
    }
    report.push_back(std::move(entry));
  }
  std::size_t missing = 0;
  if (have_tweets && store) {
    for (const auto& t : tweets)
      if (!store->row_of(t.id)) ++missing;
    if (missing) std::cerr << "note: " << missing << " tweets have no embedding row\n";
  }
  if (a.json_out) {
    std::cout << json{{"ok", true}, {"files", report}, {"tweets_without_embedding", missing}}.dump(2) << "\n";
  } else {
    for (const auto& e : report) {
      std::cout << e["file"].get<std::string>() << ": " << e["kind"].get<std::string>() << " OK";
      if (e.contains("records")) std::cout << " records=" << e["records"];
      if (e.contains("dim")) std::cout << " dim=" << e["dim"];
      if (e.contains("parties")) std::cout << " parties=" << e["parties"];
      std::cout << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// index

struct IndexArgs {
  std::string tweets, parties, out;
  int year = 0;
  std::size_t min_parties = 3, min_uses = 50;
  bool ids = false;
};

int cmd_index(const IndexArgs& a) {
  const auto tweets = read_tweets(a.tweets);
  const auto index = build_index(tweets, a.year);
  json j = index_to_json(index);
  if (!a.ids)
    for (auto& [h, v] : j["hashtags"].items()) v.erase("ids");
  if (!a.parties.empty()) j["eval_hashtags"] = eval_hashtags(index, split_list(a.parties));
  j["training_hashtags"] = training_hashtags(index, {a.min_parties, a.min_uses});
  emit(a.out, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------
// pairs

struct PairsArgs {
  std::string tweets, out;
  int year = 0;
  std::optional<int> start_year, end_year;
  std::uint64_t max = 2'500'000;
  std::uint64_t seed = kDefaultSeed;
  std::size_t min_parties = 3, min_uses = 50;
  bool json_out = false;
};

int cmd_pairs(const PairsArgs& a, const CLI::App& app) {
  PairConfig cfg;
  cfg.max_examples = a.max;
  cfg.seed = a.seed;
  cfg.start_year = a.start_year.value_or(a.year - 4);
  cfg.end_year = a.end_year.value_or(a.year - 1);
  cfg.validate();
  if (cfg.start_year > cfg.end_year) throw ConfigError("--start-year must not exceed --end-year");

  const auto tweets = read_tweets(a.tweets);
  std::vector<const TweetRecord*> window;
  for (const auto& t : tweets) {
    const int y = utc_year(t.timestamp);
    if (y >= cfg.start_year && y <= cfg.end_year) window.push_back(&t);
  }
  const auto index = build_index(window, a.year);
  const auto hashtags = training_hashtags(index, {a.min_parties, a.min_uses});
  const auto pairs = sample_pairs(tweets, index, hashtags, cfg);

  std::ostringstream csv_text;
  write_pairs(csv_text, pairs, tweets);
  emit(a.out, csv_text.str());

  std::size_t positives = 0;
  for (const auto& p : pairs) positives += p.label == PairLabel::Positive;
  json summary{{"seed", a.seed},
               {"pairs", pairs.size()},
               {"positives", positives},
               {"negatives", pairs.size() - positives},
               {"hashtags", hashtags.size()},
               {"window", {cfg.start_year, cfg.end_year}}};
  write_meta(a.out, app, "pairs", summary);
  auto& log = (a.out.empty() || a.out == "-") ? std::cerr : std::cout;
  if (a.json_out)
    log << summary.dump(2) << "\n";
  else
    log << "pairs=" << pairs.size() << " positives=" << positives << " negatives=" << pairs.size() - positives
        << " hashtags=" << hashtags.size() << " seed=" << a.seed << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// distances

struct DistancesArgs {
  std::string method = "topics", tweets, embeddings, parties, subset, out;
  int year = 0;
  bool brute_force = false, json_out = false;
};

int cmd_distances(const DistancesArgs& a, const CLI::App& app) {
  const auto tweets = read_tweets(a.tweets);
  const auto store = load_embeddings(a.embeddings);
  const DateRange range{make_utc(a.year, 1, 1), make_utc(a.year + 1, 1, 1)};

  std::vector<const TweetRecord*> year;
  std::set<std::string> present;
  const auto wanted = split_list(a.parties);
  for (const auto& t : tweets) {
    const auto* c = t.candidacy(a.year);
    if (!c || !range.contains(t.timestamp)) continue;
    if (!wanted.empty() && !wanted.count(c->party)) continue;
    year.push_back(&t);
    present.insert(c->party);
  }
  const std::set<std::string> parties = wanted.empty() ? present : wanted;
  if (parties.size() < 2) throw ValidationError("need at least two parties with tweets in " + std::to_string(a.year));
  const std::vector<std::string> labels(parties.begin(), parties.end());
  const auto method = a.brute_force ? TopicMethod::BruteForce : TopicMethod::Centroid;

  const auto shared = eval_hashtags(build_index(year, a.year), parties);
  auto keep = [&](const TweetRecord& t, const std::string& mode) {
    if (mode == "all") return true;
    if (mode == "hashtags") return !t.hashtags.empty();
    if (mode == "no-hashtags") return t.hashtags.empty();
    return std::any_of(t.hashtags.begin(), t.hashtags.end(), [&](const auto& h) { return shared.count(h) > 0; });
  };
  auto party_rows = [&](const std::string& mode) {
    std::map<std::string, std::vector<std::size_t>> sets;
    for (const auto* t : year) {
      if (!keep(*t, mode)) continue;
      const auto row = store.row_of(t->id);
      if (!row) throw ValidationError("tweet " + std::to_string(t->id) + " has no embedding row");
      sets[t->candidacy(a.year)->party].push_back(*row);
    }
    return sets;
  };

  DistanceMatrix m;
  std::string subset = a.subset;
  if (a.method == "topics") {
    m = aggregate_topics(build_topic_slices(year, a.year, shared, store), labels, store, {method});
    subset = "shared";
  } else if (a.method == "average") {
    if (subset.empty()) subset = "shared";
    m = average_baseline(labels, party_rows(subset), store, method);
  } else {
    if (subset.empty()) subset = "all";
    m = twin_distance_matrix(labels, party_rows(subset), store);
  }

  if (a.json_out) {
    emit(a.out, json{{"method", a.method}, {"year", a.year}, {"subset", subset}, {"n_hashtags", shared.size()},
                     {"matrix", matrix_to_json(m)}}
                        .dump(2) +
                    "\n");
  } else {
    std::ostringstream s;
    write_matrix_csv(s, m);
    emit(a.out, s.str());
  }
  write_meta(a.out, app, "distances", {{"method", a.method}, {"subset", subset}, {"n_hashtags", shared.size()}});
  return 0;
}

// ---------------------------------------------------------------------------
// groundtruth

struct GroundtruthArgs {
  std::string cmp, out;
  bool json_out = false;
};

int cmd_groundtruth(const GroundtruthArgs& a) {
  auto in = open_in(a.cmp);
  const auto table = build_cmp_vectors(in);
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
  const auto m = cmp_distance_matrix(table.vectors);
  if (a.json_out) {
    emit(a.out, json{{"matrix", matrix_to_json(m)}, {"warnings", table.warnings}}.dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_matrix_csv(s, m);
    emit(a.out, s.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// mantel

struct MantelArgs {
  std::string a, b, tail = "greater", mode = "auto";
  std::uint64_t perms = 10'000, seed = kDefaultSeed;
  bool json_out = false;
};

int cmd_mantel(const MantelArgs& a) {
  const auto ma = read_matrix(a.a);
  auto mb = read_matrix(a.b);
  // Align B to A's label order; differing label sets are an error.
  if (mb.labels() != ma.labels()) mb = mb.reordered(ma.labels());
  const auto r = mantel_test(ma, mb, {a.perms, a.seed, parse_tail(a.tail), parse_mode(a.mode)});
  if (a.json_out)
    std::cout << mantel_to_json(r).dump(2) << "\n";
  else
    std::cout << format_mantel(r) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentArgs {
  std::string tweets, embeddings, cmp, truth, out_json, out_csv, tail = "greater", mode = "auto";
  int year = 0;
  std::uint64_t perms = 10'000, seed = kDefaultSeed;
  bool brute_force = false, baseline = false, json_out = false;
  std::vector<double> fractions;
  std::vector<std::uint64_t> seeds;
  std::string temporal = "windows";
};

int cmd_experiment(const std::string& which, const ExperimentArgs& a, const CLI::App& app) {
  const auto tweets = read_tweets(a.tweets);
  const auto store = load_embeddings(a.embeddings);
  ExperimentContext ctx;
  ctx.tweets = &tweets;
  ctx.store = &store;
  if (!a.truth.empty()) {
    ctx.truth = read_matrix(a.truth);
  } else {
    auto in = open_in(a.cmp);
    const auto table = build_cmp_vectors(in);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << "\n";
    ctx.truth = cmp_distance_matrix(table.vectors);
  }
  ctx.year = a.year;
  ctx.mantel = {a.perms, a.seed, parse_tail(a.tail), parse_mode(a.mode)};
  ctx.method = a.brute_force ? TopicMethod::BruteForce : TopicMethod::Centroid;
  ctx.baseline = a.baseline;

  ExperimentReport report;
  if (which == "full") {
    report = run_full(ctx);
  } else if (which == "subsample") {
    SubsampleOptions opts;
    if (!a.fractions.empty()) opts.fractions = a.fractions;
    if (!a.seeds.empty()) opts.seeds = a.seeds;
    report = run_subsample(ctx, opts);
  } else if (which == "temporal") {
    report = run_temporal(ctx, a.temporal == "months" ? TemporalMode::Months : TemporalMode::Windows);
  } else {
    report = run_groups(ctx);
  }

  json j = report_to_json(report);
  j["mantel_seed"] = a.seed;
  j["config"] = resolved_config(app);
  if (!a.out_json.empty()) emit(a.out_json, j.dump(2) + "\n");
  if (!a.out_csv.empty()) {
    std::ostringstream s;
    s << "# seed=" << a.seed << "\r\n";
    write_report_csv(s, report);
    emit(a.out_csv, s.str());
    write_meta(a.out_csv, app, "experiment " + which, {{"seed", a.seed}});
  }
  if (a.json_out) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "experiment=" << report.name << " seed=" << a.seed << "\n";
    for (const auto& r : report.runs) {
      std::cout << r.config_summary << ": ";
      if (r.mantel)
        std::cout << format_mantel(*r.mantel) << " n_tweets=" << r.n_tweets << " n_hashtags=" << r.n_hashtags;
      else
        std::cout << "failed: " << r.error;
      std::cout << "\n";
      if (r.baseline_mantel) std::cout << r.config_summary << " [average baseline]: " << format_mantel(*r.baseline_mantel) << "\n";
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// centroids

struct CentroidArgs {
  std::string tweets, embeddings, parties, out;
  int year = 0;
  bool json_out = false;
};

int cmd_centroids(const CentroidArgs& a) {
  const auto tweets = read_tweets(a.tweets);
  const auto store = load_embeddings(a.embeddings);
  std::optional<std::set<std::string>> parties;
  if (!a.parties.empty()) parties = split_list(a.parties);
  const auto table = export_centroids(tweets, store, a.year, parties);
  if (a.json_out) {
    json rows = json::array();
    for (const auto& c : table.rows)
      rows.push_back({{"author_id", c.author_id}, {"party", c.party}, {"n_tweets", c.n_tweets}, {"centroid", c.centroid}});
    emit(a.out, json{{"year", a.year}, {"rows", rows}, {"skipped_politicians", table.skipped}}.dump(2) + "\n");
  } else {
    std::ostringstream s;
    write_centroids_csv(s, table, store.dim());
    emit(a.out, s.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out_dir;
  SyntheticConfig cfg;
  std::string noise_group;
};

int cmd_synth(const SynthArgs& a, const CLI::App& app) {
  auto cfg = a.cfg;
  if (a.noise_group == "new") cfg.noise_group = Group::New;
  if (a.noise_group == "continuing") cfg.noise_group = Group::Continuing;
  if (a.noise_group == "old") cfg.noise_group = Group::Old;
  const auto corpus = generate_synthetic(cfg);
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  {
    std::ofstream out(dir / "tweets.jsonl", std::ios::binary | std::ios::trunc);
    write_tweets(out, corpus.tweets);
  }
  store_embeddings(corpus.store, dir / "embeddings.plemb");
  {
    std::ofstream out(dir / "truth.csv", std::ios::binary | std::ios::trunc);
    out << "# seed=" << cfg.seed << "\r\n";
    write_matrix_csv(out, corpus.truth);
  }
  write_meta((dir / "truth.csv").string(), app, "synth", {{"seed", cfg.seed}});
  std::cout << "tweets=" << corpus.tweets.size() << " parties=" << cfg.n_parties << " dim=" << cfg.dim
            << " seed=" << cfg.seed << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partyline: inter-party distances from politicians' tweets"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file with option values; flags override it");
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker thread cap (default: all cores)");

  const std::vector<std::string> tails{"greater", "less", "two-sided"};
  const std::vector<std::string> modes{"auto", "exhaustive", "sampled"};

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "check tweet JSONL, PLEMB, CMP or matrix files");
  validate->add_option("files", va.files, "files to check")->required()->check(CLI::ExistingFile);
  validate->add_flag("--json", va.json_out);

  IndexArgs ia;
  auto* index = app.add_subcommand("index", "hashtag index for the candidates of one year");
  index->add_option("--tweets", ia.tweets)->required()->check(CLI::ExistingFile);
  index->add_option("--year", ia.year)->required();
  index->add_option("--parties", ia.parties, "comma-separated; adds the hashtags shared by all of them");
  index->add_option("--min-parties", ia.min_parties)->capture_default_str();
  index->add_option("--min-uses", ia.min_uses)->capture_default_str();
  index->add_flag("--ids", ia.ids, "include tweet ids per hashtag");
  index->add_option("--out", ia.out);
  index->add_flag("--json", "output is always JSON");

  PairsArgs pa;
  auto* pairs = app.add_subcommand("pairs", "contrastive training pairs from shared hashtags");
  pairs->add_option("--tweets", pa.tweets)->required()->check(CLI::ExistingFile);
  pairs->add_option("--year", pa.year, "election year whose candidates are used")->required();
  pairs->add_option("--start-year", pa.start_year, "first tweet year (default year-4)");
  pairs->add_option("--end-year", pa.end_year, "last tweet year (default year-1)");
  pairs->add_option("--max", pa.max, "maximum number of pairs (even)")->capture_default_str();
  pairs->add_option("--seed", pa.seed)->capture_default_str();
  pairs->add_option("--min-parties", pa.min_parties)->capture_default_str();
  pairs->add_option("--min-uses", pa.min_uses)->capture_default_str();
  pairs->add_option("--out", pa.out, "pair CSV (default stdout)");
  pairs->add_flag("--json", pa.json_out);

  DistancesArgs da;
  auto* distances = app.add_subcommand("distances", "inter-party distance matrix");
  distances->add_option("--method", da.method)->check(CLI::IsMember({"topics", "average", "twin"}))->capture_default_str();
  distances->add_option("--tweets", da.tweets)->required()->check(CLI::ExistingFile);
  distances->add_option("--embeddings", da.embeddings)->required()->check(CLI::ExistingFile);
  distances->add_option("--year", da.year)->required();
  distances->add_option("--parties", da.parties, "comma-separated (default: all parties with tweets)");
  distances->add_option("--subset", da.subset, "tweets for average/twin: shared, all, hashtags, no-hashtags")
      ->check(CLI::IsMember({"shared", "all", "hashtags", "no-hashtags"}));
  distances->add_flag("--brute-force", da.brute_force, "evaluate every tweet pair instead of centroids");
  distances->add_option("--out", da.out);
  distances->add_flag("--json", da.json_out);

  GroundtruthArgs ga;
  auto* groundtruth = app.add_subcommand("groundtruth", "CMP ground-truth distance matrix");
  groundtruth->add_option("--cmp", ga.cmp)->required()->check(CLI::ExistingFile);
  groundtruth->add_option("--out", ga.out);
  groundtruth->add_flag("--json", ga.json_out);

  MantelArgs ma;
  auto* mantel = app.add_subcommand("mantel", "Mantel test between two distance matrices");
  mantel->add_option("--a", ma.a)->required()->check(CLI::ExistingFile);
  mantel->add_option("--b", ma.b)->required()->check(CLI::ExistingFile);
  mantel->add_option("--perms", ma.perms)->capture_default_str();
  mantel->add_option("--seed", ma.seed)->capture_default_str();
  mantel->add_option("--tail", ma.tail)->check(CLI::IsMember(tails))->capture_default_str();
  mantel->add_option("--mode", ma.mode)->check(CLI::IsMember(modes))->capture_default_str();
  mantel->add_flag("--json", ma.json_out);

  ExperimentArgs ea;
  auto* experiment = app.add_subcommand("experiment", "run an experiment against the ground truth");
  experiment->require_subcommand(1);
  std::string which;
  for (const auto* name : {"full", "subsample", "temporal", "groups"}) {
    auto* sub = experiment->add_subcommand(name);
    sub->callback([&which, name] { which = name; });
    sub->add_option("--tweets", ea.tweets)->required()->check(CLI::ExistingFile);
    sub->add_option("--embeddings", ea.embeddings)->required()->check(CLI::ExistingFile);
    auto* cmp = sub->add_option("--cmp", ea.cmp, "CMP counts CSV")->check(CLI::ExistingFile);
    auto* truth = sub->add_option("--truth", ea.truth, "precomputed ground-truth matrix CSV")->check(CLI::ExistingFile);
    cmp->excludes(truth);
    sub->add_option("--year", ea.year)->required();
    sub->add_option("--perms", ea.perms)->capture_default_str();
    sub->add_option("--seed", ea.seed)->capture_default_str();
    sub->add_option("--tail", ea.tail)->check(CLI::IsMember(tails))->capture_default_str();
    sub->add_option("--mode", ea.mode)->check(CLI::IsMember(modes))->capture_default_str();
    sub->add_flag("--brute-force", ea.brute_force);
    sub->add_option("--out-json", ea.out_json);
    sub->add_option("--out-csv", ea.out_csv);
    sub->add_flag("--json", ea.json_out);
    if (std::string(name) != "full") sub->add_flag("--baseline", ea.baseline, "also evaluate the average baseline");
    if (std::string(name) == "subsample") {
      sub->add_option("--fractions", ea.fractions)->delimiter(',');
      sub->add_option("--seeds", ea.seeds, "subsample seeds")->delimiter(',');
    }
    if (std::string(name) == "temporal")
      sub->add_option("--temporal-mode", ea.temporal)->check(CLI::IsMember({"windows", "months"}))->capture_default_str();
  }

  CentroidArgs ca;
  auto* centroids = app.add_subcommand("centroids", "per-politician tweet centroids");
  centroids->add_option("--tweets", ca.tweets)->required()->check(CLI::ExistingFile);
  centroids->add_option("--embeddings", ca.embeddings)->required()->check(CLI::ExistingFile);
  centroids->add_option("--year", ca.year)->required();
  centroids->add_option("--parties", ca.parties);
  centroids->add_option("--out", ca.out);
  centroids->add_flag("--json", ca.json_out);

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "write a synthetic corpus with planted party positions");
  synth->add_option("--out-dir", sa.out_dir)->required();
  synth->add_option("--parties", sa.cfg.n_parties)->capture_default_str();
  synth->add_option("--politicians", sa.cfg.politicians_per_party)->capture_default_str();
  synth->add_option("--tweets", sa.cfg.tweets_per_politician)->capture_default_str();
  synth->add_option("--dim", sa.cfg.dim)->capture_default_str();
  synth->add_option("--separation", sa.cfg.separation)->capture_default_str();
  synth->add_option("--topics", sa.cfg.n_topics)->capture_default_str();
  synth->add_option("--seed", sa.cfg.seed)->capture_default_str();
  synth->add_option("--year", sa.cfg.year)->capture_default_str();
  synth->add_option("--noise-group", sa.noise_group)->check(CLI::IsMember({"new", "continuing", "old"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (threads > 0) set_max_threads(threads);
    if (*validate) return cmd_validate(va);
    if (*index) return cmd_index(ia);
    if (*pairs) return cmd_pairs(pa, app);
    if (*distances) return cmd_distances(da, app);
    if (*groundtruth) return cmd_groundtruth(ga);
    if (*mantel) return cmd_mantel(ma);
    if (*experiment) return cmd_experiment(which, ea, app);
    if (*centroids) return cmd_centroids(ca);
    if (*synth) return cmd_synth(sa, app);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
