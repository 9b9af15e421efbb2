// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

// Runs the partyline executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

namespace fs = std::filesystem;
using namespace partyline;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(PARTYLINE_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / ("partyline_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    const auto r = run("synth --out-dir " + dir_.string() + " --parties 5 --politicians 6 --tweets 25 --dim 8 --topics 6 --seed 4");
    ASSERT_EQ(r.code, 0) << r.out;
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string f(const std::string& name) { return (dir_ / name).string(); }
  static std::string corpus() { return " --tweets " + f("tweets.jsonl") + " --embeddings " + f("embeddings.plemb"); }

  static inline fs::path dir_;
};

}  // namespace

TEST_F(Cli, ValidateAcceptsSyntheticFiles) {
  const auto r = run("validate " + f("tweets.jsonl") + " " + f("embeddings.plemb") + " " + f("truth.csv"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("records=750"), std::string::npos);
}

TEST_F(Cli, ValidateReportsBadLine) {
  std::ofstream(f("bad.jsonl")) << R"({"id":1,"author_id":"a","timestamp":"2021-01-01T00:00:00Z"})" << "\n{\"id\":2\n";
  const auto r = run("validate " + f("bad.jsonl"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 2"), std::string::npos) << r.out;
}

TEST_F(Cli, ValidateRejectsTruncatedEmbeddings) {
  const auto bytes = slurp(f("embeddings.plemb"));
  std::ofstream(f("short.plemb"), std::ios::binary) << bytes.substr(0, bytes.size() - 5);
  EXPECT_EQ(run("validate " + f("short.plemb")).code, 2);
}

TEST_F(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(run("mantel --bogus").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("distances --method nope" + corpus() + " --year 2021").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, MantelOfMatrixWithItselfIsOne) {
  const auto r = run("mantel --a " + f("truth.csv") + " --b " + f("truth.csv") + " --perms 10000 --seed 7");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.rfind("r=1 p=", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("seed=7"), std::string::npos);
  const auto j = nlohmann::json::parse(run("mantel --json --a " + f("truth.csv") + " --b " + f("truth.csv")).out);
  EXPECT_EQ(j["r"], 1.0);
  EXPECT_EQ(j["n_perm"], 119);
}

TEST_F(Cli, MantelAlignsLabelOrder) {
  std::ifstream in(f("truth.csv"));
  auto m = read_matrix_csv(in);
  std::ofstream out(f("truth_rev.csv"), std::ios::binary);
  write_matrix_csv(out, m.reordered({"P5", "P4", "P3", "P2", "P1"}));
  out.close();
  const auto r = run("mantel --a " + f("truth.csv") + " --b " + f("truth_rev.csv"));
  EXPECT_EQ(r.out.rfind("r=1 p=", 0), 0u) << r.out;
}

TEST_F(Cli, DistancesWritesMatrixAndSidecar) {
  for (const char* method : {"topics", "average", "twin"}) {
    const auto out = f(std::string("d_") + method + ".csv");
    const auto r = run(std::string("distances --method ") + method + corpus() + " --year 2021 --out " + out);
    ASSERT_EQ(r.code, 0) << r.out;
    std::ifstream in(out);
    const auto m = read_matrix_csv(in);
    EXPECT_EQ(m.size(), 5u);
    EXPECT_TRUE(fs::exists(out + ".meta.json"));
  }
  const auto brute = run("distances --brute-force --json" + corpus() + " --year 2021");
  const auto fast = run("distances --json" + corpus() + " --year 2021");
  const auto jb = nlohmann::json::parse(brute.out), jf = nlohmann::json::parse(fast.out);
  EXPECT_NEAR(jb["matrix"]["values"][0][1].get<double>(), jf["matrix"]["values"][0][1].get<double>(), 1e-9);
}

TEST_F(Cli, PairsAreDeterministicAndEmbedSeed) {
  // Pair generation reads the years before the election; relabel a copy.
  std::ifstream in(f("tweets.jsonl"));
  auto tweets = parse_tweets(in);
  for (auto& t : tweets) t.timestamp -= std::chrono::hours(24 * 366);
  std::ofstream(f("train.jsonl")) << [&] {
    std::ostringstream s;
    write_tweets(s, tweets);
    return s.str();
  }();
  const std::string args = "pairs --tweets " + f("train.jsonl") + " --year 2021 --max 40 --min-uses 5 --seed 11 --out ";
  ASSERT_EQ(run(args + f("p1.csv")).code, 0);
  ASSERT_EQ(run(args + f("p2.csv")).code, 0);
  EXPECT_EQ(slurp(f("p1.csv")), slurp(f("p2.csv")));
  const auto meta = nlohmann::json::parse(slurp(f("p1.csv.meta.json")));
  EXPECT_EQ(meta["seed"], 11);
  EXPECT_EQ(meta["pairs"], 40);
  EXPECT_NE(meta["config"].get<std::string>().find("seed=11"), std::string::npos);
}

TEST_F(Cli, ExperimentReportsCarrySeed) {
  const auto r = run("experiment full" + corpus() + " --truth " + f("truth.csv") + " --year 2021 --seed 3 --out-csv " + f("full.csv") +
                     " --out-json " + f("full.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("seed=3"), std::string::npos);
  EXPECT_EQ(slurp(f("full.csv")).rfind("# seed=3\r\nexperiment,config,n_tweets,n_hashtags,r,p\r\n", 0), 0u);
  const auto j = nlohmann::json::parse(slurp(f("full.json")));
  EXPECT_EQ(j["mantel_seed"], 3);
  EXPECT_EQ(j["runs"][0]["status"], "ok");
  EXPECT_TRUE(j["runs"][0].contains("baseline_mantel"));

  const auto sub = run("experiment subsample" + corpus() + " --truth " + f("truth.csv") + " --year 2021 --fractions 0.5,0.25 --seeds 1,2 --json");
  ASSERT_EQ(sub.code, 0) << sub.out;
  EXPECT_EQ(nlohmann::json::parse(sub.out)["runs"].size(), 4u);
  EXPECT_EQ(run("experiment groups" + corpus() + " --truth " + f("truth.csv") + " --year 2021").code, 0);
  EXPECT_EQ(run("experiment temporal" + corpus() + " --truth " + f("truth.csv") + " --year 2021 --temporal-mode months").code, 0);
}

TEST_F(Cli, ConfigFileSuppliesDefaultsAndFlagsOverride) {
  std::ofstream(f("run.toml")) << "[mantel]\nperms = 30\nmode = \"sampled\"\nseed = 5\n";
  const auto from_file = run("--config " + f("run.toml") + " mantel --a " + f("truth.csv") + " --b " + f("truth.csv"));
  EXPECT_NE(from_file.out.find("n_perm=30"), std::string::npos) << from_file.out;
  EXPECT_NE(from_file.out.find("seed=5"), std::string::npos);
  const auto overridden = run("--config " + f("run.toml") + " mantel --a " + f("truth.csv") + " --b " + f("truth.csv") + " --seed 9");
  EXPECT_NE(overridden.out.find("seed=9"), std::string::npos) << overridden.out;
}

TEST_F(Cli, GroundtruthIndexAndCentroids) {
  std::ofstream(f("cmp.csv")) << "party,category,count\na,101,0\na,102,0\na,__length__,1\nb,101,3\nb,102,4\nb,__length__,1\n";
  const auto gt = run("groundtruth --cmp " + f("cmp.csv"));
  EXPECT_EQ(gt.code, 0) << gt.out;
  EXPECT_NE(gt.out.find("a,0,5"), std::string::npos) << gt.out;

  const auto idx = run("index --tweets " + f("tweets.jsonl") + " --year 2021 --parties P1,P2");
  ASSERT_EQ(idx.code, 0);
  const auto j = nlohmann::json::parse(idx.out);
  EXPECT_EQ(j["eval_hashtags"].size(), 6u);

  const auto cen = run("centroids" + corpus() + " --year 2021");
  EXPECT_EQ(cen.code, 0);
  EXPECT_EQ(cen.out.rfind("author_id,party,n_tweets,c0,", 0), 0u);
  EXPECT_NE(cen.out.find("# skipped_politicians=0"), std::string::npos);
}

TEST_F(Cli, ThreadsFlagDoesNotChangeOutput) {
  const auto one = run("--threads 1 distances" + corpus() + " --year 2021");
  const auto many = run("--threads 8 distances" + corpus() + " --year 2021");
  EXPECT_EQ(one.out, many.out);
}
