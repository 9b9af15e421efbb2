// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace partyline;
using pltest::Vec;

namespace {

CMPTable parse_cmp(const std::string& text) {
  std::istringstream in(text);
  return build_cmp_vectors(in);
}

}  // namespace

TEST(Cmp, SalienceIsCountOverLength) {
  const auto t = parse_cmp("party,category,count\nP,501,4\nP,502,6\nP,__length__,10\n");
  ASSERT_EQ(t.vectors.size(), 1u);
  EXPECT_EQ(t.vectors[0].salience.at("501"), 0.4);
  EXPECT_EQ(t.vectors[0].salience.at("502"), 0.6);
  EXPECT_TRUE(t.warnings.empty());
}

TEST(Cmp, ZeroCountAndUnknownCode) {
  const auto t = parse_cmp("party,category,count\nP,501,0\nP,foo,2\nP,__length__,4\n");
  EXPECT_EQ(t.vectors[0].salience.at("501"), 0.0);
  EXPECT_EQ(t.vectors[0].salience.at("foo"), 0.5);
  ASSERT_EQ(t.warnings.size(), 1u);
  EXPECT_NE(t.warnings[0].find("foo"), std::string::npos);
}

TEST(Cmp, Errors) {
  try {
    parse_cmp("party,category,count\nSPD,501,4\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("SPD"), std::string::npos);
  }
  EXPECT_THROW(parse_cmp("party,category,count\nP,501,4\nP,__length__,0\n"), ValidationError);
  EXPECT_THROW(parse_cmp("party,cat,count\n"), ParseError);
  EXPECT_THROW(parse_cmp("party,category,count\nP,501,-1\nP,__length__,3\n"), ParseError);
  EXPECT_THROW(parse_cmp("party,category,count\nP,501,1\nP,501,2\nP,__length__,3\n"), ParseError);
}

TEST(Cmp, CodebookPattern) {
  for (const char* ok : {"000", "101", "201.1", "103_2", "per501", "706"}) EXPECT_TRUE(is_codebook_category(ok)) << ok;
  for (const char* bad : {"801", "50", "abc", "5011", "101.123"}) EXPECT_FALSE(is_codebook_category(bad)) << bad;
}

TEST(GroundTruth, ThreeFourFive) {
  const auto m = cmp_distance_matrix({{"a", {{"x", 0.0}, {"y", 0.0}}, 1}, {"b", {{"x", 3.0}, {"y", 4.0}}, 1}});
  EXPECT_EQ(m(0, 1), 5.0);
  EXPECT_EQ(m(1, 0), 5.0);
}

TEST(GroundTruth, EqualVectorsAndLine) {
  const auto same = cmp_distance_matrix({{"a", {{"x", 0.25}}, 4}, {"b", {{"x", 0.25}}, 8}});
  EXPECT_EQ(same(0, 1), 0.0);
  const auto line = cmp_distance_matrix({{"a", {{"x", 0.0}}, 1}, {"b", {{"x", 1.0}}, 1}, {"c", {{"x", 3.0}}, 1}});
  EXPECT_EQ(line(0, 1), 1.0);
  EXPECT_EQ(line(1, 2), 2.0);
  EXPECT_EQ(line(0, 2), 3.0);
}

TEST(GroundTruth, MissingCategoriesCountAsZero) {
  const auto m = cmp_distance_matrix({{"a", {{"x", 3.0}}, 1}, {"b", {{"y", 4.0}}, 1}});
  EXPECT_EQ(m(0, 1), 5.0);
}

TEST(GroundTruth, RandomMatricesAreMetric) {
  std::mt19937_64 g(53);
  for (int trial = 0; trial < 25; ++trial) {
    std::ostringstream cmp;
    cmp << "party,category,count\n";
    const auto n = 3 + g() % 6;
    for (std::size_t p = 0; p < n; ++p) {
      for (int c = 101; c < 101 + 20; ++c) cmp << "P" << p << "," << c << "," << g() % 30 << "\n";
      cmp << "P" << p << ",__length__," << 100 + g() % 400 << "\n";
    }
    const auto m = cmp_distance_matrix(parse_cmp(cmp.str()).vectors);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(m(i, i), 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(m(i, j), m(j, i));
        for (std::size_t k = 0; k < n; ++k) EXPECT_LE(m(i, k), m(i, j) + m(j, k) + 1e-12);
      }
    }
  }
}

TEST(GroundTruth, ScalingCountsAndLengthTogether) {
  std::mt19937_64 g(59);
  std::ostringstream base, scaled;
  base << "party,category,count\n";
  scaled << "party,category,count\n";
  for (int p = 0; p < 5; ++p) {
    const auto factor = 1 + g() % 7;
    for (int c = 201; c < 215; ++c) {
      const auto k = g() % 50;
      base << "P" << p << "," << c << "," << k << "\n";
      scaled << "P" << p << "," << c << "," << k * factor << "\n";
    }
    const auto len = 300 + g() % 100;
    base << "P" << p << ",__length__," << len << "\n";
    scaled << "P" << p << ",__length__," << len * factor << "\n";
  }
  const auto a = cmp_distance_matrix(parse_cmp(base.str()).vectors);
  const auto b = cmp_distance_matrix(parse_cmp(scaled.str()).vectors);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(a(i, j), b(i, j), 1e-12);
}

TEST(Pearson, Examples) {
  const Vec x{1, 2, 3};
  EXPECT_NEAR(pearson_r(x, Vec{2, 4, 6}), 1.0, 1e-15);
  EXPECT_NEAR(pearson_r(x, Vec{3, 2, 1}), -1.0, 1e-15);
  EXPECT_NEAR(pearson_r(x, Vec{1, 3, 2}), 0.5, 1e-15);
  EXPECT_THROW(pearson_r(x, Vec{1, 1, 1}), DegenerateError);
  EXPECT_THROW(pearson_r(Vec{1, 2}, Vec{2, 1}), ValidationError);
}

TEST(UpperTriangle, Shapes) {
  DistanceMatrix m({"a", "b", "c"});
  m.set(0, 1, 1);
  m.set(0, 2, 2);
  m.set(1, 2, 3);
  EXPECT_EQ(upper_triangle(m), (Vec{1, 2, 3}));
  EXPECT_EQ(upper_triangle(DistanceMatrix({"a", "b"})).size(), 1u);
  std::mt19937_64 g(1);
  EXPECT_EQ(upper_triangle(pltest::to_matrix(pltest::oracle::euclidean_matrix(pltest::random_points(g, 6, 2)))).size(), 15u);
}

TEST(Mantel, IdentityGivesMinimalP) {
  std::mt19937_64 g(61);
  const auto a = pltest::to_matrix(pltest::oracle::euclidean_matrix(pltest::random_points(g, 6, 3)));
  const auto r = mantel_test(a, a, {10000, 7});
  EXPECT_NEAR(r.r, 1.0, 1e-12);
  EXPECT_TRUE(r.exhaustive);
  EXPECT_EQ(r.permutations, 719u);
  // Only relabellings that are automorphisms of a generic matrix can tie.
  EXPECT_EQ(r.p_value, 1.0 / 720.0);
}

TEST(Mantel, AffineInvariance) {
  std::mt19937_64 g(67);
  const auto pts = pltest::random_points(g, 7, 2);
  const auto A = pltest::oracle::euclidean_matrix(pts);
  auto B = A;
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < B.size(); ++j)
      if (i != j) B[i][j] = 3.0 + 2.5 * B[i][j];
  const auto r = mantel_test(pltest::to_matrix(A), pltest::to_matrix(B));
  EXPECT_NEAR(r.r, 1.0, 1e-12);
}

TEST(Mantel, RMatchesDirectPearson) {
  std::mt19937_64 g(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = 4 + g() % 6;
    const auto A = pltest::oracle::euclidean_matrix(pltest::random_points(g, n, 3));
    const auto B = pltest::oracle::euclidean_matrix(pltest::random_points(g, n, 3));
    const auto r = mantel_test(pltest::to_matrix(A), pltest::to_matrix(B), {200, 1, Tail::Greater, PermutationMode::Sampled});
    EXPECT_NEAR(r.r, pltest::oracle::pearson(pltest::oracle::upper(A), pltest::oracle::upper(B)), 1e-12);
  }
}

TEST(Mantel, ExhaustiveMatchesOracleExactly) {
  std::mt19937_64 g(73);
  for (std::size_t n = 4; n <= 7; ++n)
    for (auto tail : {Tail::Greater, Tail::Less, Tail::TwoSided}) {
      const auto A = pltest::oracle::euclidean_matrix(pltest::random_points(g, n, 2));
      const auto B = pltest::oracle::euclidean_matrix(pltest::random_points(g, n, 2));
      const auto r = mantel_test(pltest::to_matrix(A), pltest::to_matrix(B), {1, 0, tail, PermutationMode::Exhaustive});
      EXPECT_DOUBLE_EQ(r.p_value, pltest::oracle::mantel_exact_p(A, B, tail)) << "n=" << n << " tail=" << to_string(tail);
    }
}

TEST(Mantel, SampledIsSeededAndNearExact) {
  std::mt19937_64 g(79);
  const auto A = pltest::oracle::euclidean_matrix(pltest::random_points(g, 5, 2));
  const auto B = pltest::oracle::euclidean_matrix(pltest::random_points(g, 5, 2));
  const auto a = pltest::to_matrix(A), b = pltest::to_matrix(B);
  const MantelOptions opts{10000, 5, Tail::Greater, PermutationMode::Sampled};
  const auto r1 = mantel_test(a, b, opts);
  const auto r2 = mantel_test(a, b, opts);
  EXPECT_EQ(r1.p_value, r2.p_value);
  EXPECT_FALSE(r1.exhaustive);
  EXPECT_NEAR(r1.p_value, pltest::oracle::mantel_exact_p(A, B, Tail::Greater), 0.02);
}

TEST(Mantel, Errors) {
  std::mt19937_64 g(83);
  const auto a = pltest::to_matrix(pltest::oracle::euclidean_matrix(pltest::random_points(g, 4, 2)));
  const auto three = pltest::to_matrix(pltest::oracle::euclidean_matrix(pltest::random_points(g, 3, 2)));
  EXPECT_THROW(mantel_test(three, three), ValidationError);
  EXPECT_THROW(mantel_test(a, a.reordered({"L3", "L2", "L1", "L0"})), ValidationError);
  DistanceMatrix other({"A", "B", "C", "D"});
  other.set(0, 1, 1);
  try {
    mantel_test(a, other);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("L0"), std::string::npos);
  }
  DistanceMatrix flat({"L0", "L1", "L2", "L3"});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) flat.set(i, j, 1.0);
  EXPECT_THROW(mantel_test(a, flat), DegenerateError);
}

TEST(Mantel, OutputFormat) {
  MantelResult m;
  m.r = 0.123456789012;
  m.p_value = 0.5;
  m.permutations = 719;
  m.seed = 7;
  EXPECT_EQ(format_mantel(m), "r=0.123456789 p=0.5 n_perm=719 tail=greater seed=7");
  const auto j = mantel_to_json(m);
  EXPECT_EQ(j["n_perm"], 719);
  EXPECT_EQ(j["tail"], "greater");
}
