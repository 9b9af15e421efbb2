// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "partyline/distance_matrix.hpp"
#include "partyline/error.hpp"
#include "partyline/parallel.hpp"
#include "partyline/rng.hpp"

namespace partyline {

enum class Tail { Greater, Less, TwoSided };

inline const char* to_string(Tail t) {
  switch (t) {
    case Tail::Less: return "less";
    case Tail::TwoSided: return "two-sided";
    case Tail::Greater: break;
  }
  return "greater";
}

/// Auto enumerates all n! orderings when n! <= permutations, else samples.
enum class PermutationMode { Auto, Exhaustive, Sampled };

struct MantelResult {
  double r = 0.0;
  double p_value = 1.0;
  /// Null permutations evaluated (for exhaustive runs: n! − 1, the identity
  /// being the observed statistic), so p = (hits + 1) / (permutations + 1).
  std::uint64_t permutations = 0;
  bool exhaustive = false;
  std::uint64_t seed = 0;
  Tail tail = Tail::Greater;
};

/// Strict upper triangle in row-major order.
inline std::vector<double> upper_triangle(const DistanceMatrix& m) {
  const auto n = m.size();
  std::vector<double> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12)
        throw ValidationError("matrix is not symmetric at (" + m.labels()[i] + ", " + m.labels()[j] + ")");
      out.push_back(m(i, j));
    }
  return out;
}

/// Sample Pearson correlation (two-pass, mean-centred).
inline double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("pearson_r needs vectors of equal length");
  if (x.size() < 3) throw ValidationError("pearson_r needs at least three observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DegenerateError("pearson_r is undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct MantelOptions {
  std::uint64_t permutations = 10'000;
  std::uint64_t seed = 0;
  Tail tail = Tail::Greater;
  PermutationMode mode = PermutationMode::Auto;
};

namespace detail {

// n! saturating at UINT64_MAX.
inline std::uint64_t factorial_saturating(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) {
    if (f > std::numeric_limits<std::uint64_t>::max() / k) return std::numeric_limits<std::uint64_t>::max();
    f *= k;
  }
  return f;
}

// Correlation of A's upper triangle with B's after relabeling B by `perm`.
// Mean and variance of B's upper triangle are invariant under relabeling, so
// only the cross term is recomputed.
class PermutedCorrelation {
 public:
  PermutedCorrelation(const DistanceMatrix& a, const DistanceMatrix& b) : n_(a.size()), b_(&b) {
    const auto x = upper_triangle(a), y = upper_triangle(b);
    const double m = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / m;
    mean_b_ = std::accumulate(y.begin(), y.end(), 0.0) / m;
    double sxx = 0.0, syy = 0.0;
    centred_a_.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      centred_a_.push_back(x[k] - mx);
      sxx += centred_a_.back() * centred_a_.back();
      syy += (y[k] - mean_b_) * (y[k] - mean_b_);
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateError("Mantel test is undefined for a constant matrix");
    scale_ = 1.0 / std::sqrt(sxx * syy);
  }

  double operator()(std::span<const std::size_t> perm) const {
    double sxy = 0.0;
    std::size_t k = 0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) sxy += centred_a_[k++] * ((*b_)(perm[i], perm[j]) - mean_b_);
    return std::clamp(sxy * scale_, -1.0, 1.0);
  }

 private:
  std::size_t n_;
  const DistanceMatrix* b_;
  std::vector<double> centred_a_;
  double mean_b_ = 0.0;
  double scale_ = 0.0;
};

// Permuted statistics equal to the observed one in exact arithmetic may
// differ by rounding; they count as "at least as extreme".
inline constexpr double kTieTolerance = 1e-12;

inline bool as_extreme(double permuted, double observed, Tail tail) {
  switch (tail) {
    case Tail::Greater: return permuted >= observed - kTieTolerance;
    case Tail::Less: return permuted <= observed + kTieTolerance;
    case Tail::TwoSided: return std::abs(permuted) >= std::abs(observed) - kTieTolerance;
  }
  return false;
}

}  // namespace detail

/// Pearson-normalized Mantel test. The matrices must carry the same labels in
/// the same order (align with DistanceMatrix::reordered first). B's rows and
/// columns are permuted jointly to build the null distribution.
inline MantelResult mantel_test(const DistanceMatrix& a, const DistanceMatrix& b, MantelOptions opts = {}) {
  if (const auto diff = label_difference(a.labels(), b.labels()); !diff.empty())
    throw ValidationError("Mantel test needs identically labeled matrices: " + diff);
  const std::size_t n = a.size();
  if (n < 4) throw ValidationError("Mantel test needs at least 4 parties, got " + std::to_string(n));
  if (opts.permutations == 0 && opts.mode != PermutationMode::Exhaustive)
    throw ConfigError("Mantel test needs a positive permutation count");

  const detail::PermutedCorrelation stat(a, b);
  MantelResult result;
  result.seed = opts.seed;
  result.tail = opts.tail;
  {
    const auto xa = upper_triangle(a), xb = upper_triangle(b);
    result.r = pearson_r(xa, xb);
  }

  const auto total = detail::factorial_saturating(n);
  const bool exhaustive = opts.mode == PermutationMode::Exhaustive ||
                          (opts.mode == PermutationMode::Auto && total <= opts.permutations);
  std::uint64_t hits = 0;

  if (exhaustive) {
    if (n > 12) throw ConfigError("exhaustive Mantel enumeration is limited to n <= 12");
    // Split by the first element so the enumeration parallelizes cleanly.
    std::vector<std::uint64_t> per_first(n, 0);
    parallel_for(n, [&](std::size_t first) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::rotate(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(first), perm.begin() + static_cast<std::ptrdiff_t>(first) + 1);
      std::uint64_t count = 0;
      do {
        const bool identity = std::is_sorted(perm.begin(), perm.end());
        if (!identity && detail::as_extreme(stat(perm), result.r, opts.tail)) ++count;
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
      per_first[first] = count;
    });
    hits = std::accumulate(per_first.begin(), per_first.end(), std::uint64_t{0});
    result.permutations = total - 1;
    result.exhaustive = true;
  } else {
    std::vector<unsigned char> extreme(opts.permutations, 0);
    parallel_for(opts.permutations, [&](std::size_t k) {
      auto engine = rng::make_engine(opts.seed, k);
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      rng::shuffle(perm.begin(), perm.end(), engine);
      extreme[k] = detail::as_extreme(stat(perm), result.r, opts.tail);
    });
    hits = static_cast<std::uint64_t>(std::count(extreme.begin(), extreme.end(), 1));
    result.permutations = opts.permutations;
  }
  result.p_value = static_cast<double>(hits + 1) / static_cast<double>(result.permutations + 1);
  return result;
}

inline nlohmann::json mantel_to_json(const MantelResult& m) {
  return {{"r", m.r},           {"p", m.p_value},         {"n_perm", m.permutations},
          {"exhaustive", m.exhaustive}, {"tail", to_string(m.tail)}, {"seed", m.seed}};
}

/// `r=<9 sig digits> p=<…> n_perm=<…> tail=<…> seed=<…>`
inline std::string format_mantel(const MantelResult& m) {
  return "r=" + format_value(m.r) + " p=" + format_value(m.p_value) + " n_perm=" + std::to_string(m.permutations) +
         " tail=" + to_string(m.tail) + " seed=" + std::to_string(m.seed);
}

}  // namespace partyline
