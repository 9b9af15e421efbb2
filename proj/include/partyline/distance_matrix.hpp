// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "partyline/csv.hpp"
#include "partyline/error.hpp"

namespace partyline {

/// Symmetric, labeled party × party matrix with a zero diagonal.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  explicit DistanceMatrix(std::vector<std::string> labels)
      : labels_(std::move(labels)), values_(labels_.size() * labels_.size(), 0.0) {
    std::set<std::string> unique(labels_.begin(), labels_.end());
    if (unique.size() != labels_.size()) throw ValidationError("distance matrix labels must be unique");
  }

  /// Builds from a row-major n×n buffer and checks the matrix invariants.
  DistanceMatrix(std::vector<std::string> labels, std::vector<double> values, double tolerance = 1e-12)
      : DistanceMatrix(std::move(labels)) {
    if (values.size() != values_.size())
      throw ValidationError("distance matrix needs " + std::to_string(values_.size()) + " values, got " +
                            std::to_string(values.size()));
    values_ = std::move(values);
    validate(tolerance);
  }

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }

  /// Sets both (i, j) and (j, i).
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * size() + j] = v;
    values_[j * size() + i] = v;
  }

  std::optional<std::size_t> index_of(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
  }

  /// Throws ValidationError unless finite, non-negative, zero on the
  /// diagonal and symmetric within `tolerance`.
  void validate(double tolerance = 1e-12) const {
    const auto n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if ((*this)(i, i) != 0.0) throw ValidationError("diagonal entry for '" + labels_[i] + "' is not zero");
      for (std::size_t j = 0; j < n; ++j) {
        const double v = (*this)(i, j);
        if (!std::isfinite(v)) throw ValidationError("non-finite entry at (" + labels_[i] + ", " + labels_[j] + ")");
        if (v < 0.0) throw ValidationError("negative entry at (" + labels_[i] + ", " + labels_[j] + ")");
        if (std::abs(v - (*this)(j, i)) > tolerance)
          throw ValidationError("matrix is not symmetric at (" + labels_[i] + ", " + labels_[j] + ")");
      }
    }
  }

  /// Same matrix with rows and columns in the order of `order`, which must be
  /// a permutation of labels().
  DistanceMatrix reordered(const std::vector<std::string>& order) const;

  bool operator==(const DistanceMatrix&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<double> values_;
};

/// Human-readable description of how two label lists differ; empty when they
/// are identical (same labels, same order).
inline std::string label_difference(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a == b) return {};
  const std::set<std::string> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::string only_a, only_b;
  for (const auto& l : sa)
    if (!sb.count(l)) only_a += (only_a.empty() ? "" : ", ") + l;
  for (const auto& l : sb)
    if (!sa.count(l)) only_b += (only_b.empty() ? "" : ", ") + l;
  if (only_a.empty() && only_b.empty()) return "same labels in a different order";
  std::string out;
  if (!only_a.empty()) out += "only in first: {" + only_a + "}";
  if (!only_b.empty()) out += std::string(out.empty() ? "" : "; ") + "only in second: {" + only_b + "}";
  return out;
}

inline DistanceMatrix DistanceMatrix::reordered(const std::vector<std::string>& order) const {
  const std::set<std::string> want(order.begin(), order.end());
  if (want.size() != order.size() || want != std::set<std::string>(labels_.begin(), labels_.end()))
    throw ValidationError("cannot align matrices: " + label_difference(labels_, order));
  DistanceMatrix out(order);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto src_i = *index_of(order[i]);
    for (std::size_t j = 0; j < order.size(); ++j) out.values_[i * order.size() + j] = (*this)(src_i, *index_of(order[j]));
  }
  return out;
}

/// 9 significant digits, shortest %g form.
inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

/// Header row `,label1,label2,…` followed by one labeled row per party.
inline void write_matrix_csv(std::ostream& out, const DistanceMatrix& m) {
  std::vector<std::string> row{""};
  row.insert(row.end(), m.labels().begin(), m.labels().end());
  csv::write_row(out, row);
  for (std::size_t i = 0; i < m.size(); ++i) {
    row.assign({m.labels()[i]});
    for (std::size_t j = 0; j < m.size(); ++j) row.push_back(format_value(m(i, j)));
    csv::write_row(out, row);
  }
}

/// Inverse of write_matrix_csv. Lines starting with '#' are ignored.
/// Symmetry is checked with an absolute tolerance of `tolerance`.
inline DistanceMatrix read_matrix_csv(std::istream& in, double tolerance = 1e-12) {
  std::vector<std::string> fields;
  std::size_t line = 0;
  auto next_row = [&]() {
    while (csv::read_row(in, fields, line)) {
      if (!fields.empty() && !fields[0].empty() && fields[0][0] == '#') continue;
      if (fields.size() == 1 && fields[0].empty()) continue;
      return true;
    }
    return false;
  };

  if (!next_row()) throw ParseError("matrix CSV is empty");
  if (fields.size() < 2) throw ParseError(line, "matrix header needs at least one label");
  std::vector<std::string> labels(fields.begin() + 1, fields.end());
  const auto n = labels.size();
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!next_row()) throw ParseError(line, "matrix CSV has " + std::to_string(i) + " rows, expected " + std::to_string(n));
    if (fields.size() != n + 1) throw ParseError(line, "expected " + std::to_string(n + 1) + " fields");
    if (fields[0] != labels[i]) throw ParseError(line, "row label '" + fields[0] + "' does not match column '" + labels[i] + "'");
    for (std::size_t j = 1; j <= n; ++j) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(fields[j], &used);
      } catch (const std::exception&) {
        throw ParseError(line, "'" + fields[j] + "' is not a number");
      }
      if (used != fields[j].size()) throw ParseError(line, "'" + fields[j] + "' is not a number");
      values.push_back(v);
    }
  }
  if (next_row()) throw ParseError(line, "unexpected extra row in matrix CSV");
  return DistanceMatrix(std::move(labels), std::move(values), tolerance);
}

}  // namespace partyline
