// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "partyline/corpus.hpp"
#include "partyline/error.hpp"

/**
 * @file embeddings.hpp
 *
 * @brief Dense sentence-embedding matrix keyed by tweet id, and the PLEMB
 * binary container.
 *
 * PLEMB layout (all integers and floats little-endian):
 *
 *     "PLEMB001"                 8 bytes magic
 *     dim                        u32
 *     count                      u64
 *     count × { id: u64, dim × f32 }
 */

namespace partyline {

inline constexpr char kPlembMagic[8] = {'P', 'L', 'E', 'M', 'B', '0', '0', '1'};
inline constexpr std::size_t kPlembHeaderBytes = 8 + 4 + 8;

/// Row-major float matrix with one row per tweet id. Immutable once built;
/// safe to share between threads for reading.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  /// Validates and takes ownership. Throws ValidationError on a duplicate id,
  /// a shape mismatch, a non-finite entry, or an all-zero row.
  EmbeddingStore(std::size_t dim, std::vector<TweetId> ids, std::vector<float> values)
      : dim_(dim), ids_(std::move(ids)), values_(std::move(values)) {
    if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
    if (values_.size() != ids_.size() * dim_)
      throw ValidationError("embedding matrix has " + std::to_string(values_.size()) + " values, expected " +
                            std::to_string(ids_.size() * dim_));
    row_of_.reserve(ids_.size());
    inv_norms_.resize(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      if (!row_of_.emplace(ids_[i], i).second)
        throw ValidationError("duplicate embedding id " + std::to_string(ids_[i]));
      double sq = 0.0;
      for (float v : row(i)) {
        if (!std::isfinite(v)) throw ValidationError("non-finite value in embedding of id " + std::to_string(ids_[i]));
        sq += static_cast<double>(v) * v;
      }
      if (sq == 0.0) throw ValidationError("embedding of id " + std::to_string(ids_[i]) + " is the zero vector");
      inv_norms_[i] = 1.0 / std::sqrt(sq);
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<TweetId>& ids() const noexcept { return ids_; }
  const std::vector<float>& values() const noexcept { return values_; }

  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }

  /// 1/‖row i‖ computed in double at construction.
  double inv_norm(std::size_t i) const { return inv_norms_[i]; }

  std::optional<std::size_t> row_of(TweetId id) const {
    const auto it = row_of_.find(id);
    if (it == row_of_.end()) return std::nullopt;
    return it->second;
  }

  /// Copy with every row scaled to unit length.
  EmbeddingStore normalized() const {
    std::vector<float> unit(values_.size());
    for (std::size_t i = 0; i < size(); ++i) {
      const double s = inv_norms_[i];
      for (std::size_t k = 0; k < dim_; ++k) unit[i * dim_ + k] = static_cast<float>(values_[i * dim_ + k] * s);
    }
    return EmbeddingStore(dim_, ids_, std::move(unit));
  }

 private:
  std::size_t dim_ = 0;
  std::vector<TweetId> ids_;
  std::vector<float> values_;
  std::vector<double> inv_norms_;
  std::unordered_map<TweetId, std::size_t> row_of_;
};

namespace detail {

template <typename T>
T load_le(const unsigned char* p) {
  T v;
  std::memcpy(&v, p, sizeof v);
  if constexpr (std::endian::native == std::endian::big) {
    auto* b = reinterpret_cast<unsigned char*>(&v);
    for (std::size_t i = 0; i < sizeof v / 2; ++i) std::swap(b[i], b[sizeof v - 1 - i]);
  }
  return v;
}

template <typename T>
void store_le(std::ostream& out, T v) {
  unsigned char b[sizeof v];
  std::memcpy(b, &v, sizeof v);
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof v / 2; ++i) std::swap(b[i], b[sizeof v - 1 - i]);
  }
  out.write(reinterpret_cast<const char*>(b), sizeof v);
}

}  // namespace detail

struct LoadOptions {
  bool normalize = false;  // scale each row to unit length on load
};

/// Reads a PLEMB stream. `total_bytes`, when known, lets truncation be
/// reported before any row is read.
inline EmbeddingStore read_embeddings(std::istream& in, std::optional<std::uint64_t> total_bytes = std::nullopt,
                                      LoadOptions opts = {}) {
  unsigned char header[kPlembHeaderBytes];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (in.gcount() < 8 || std::memcmp(header, kPlembMagic, 8) != 0) throw FormatError("not a PLEMB file (bad magic)");
  if (in.gcount() != static_cast<std::streamsize>(sizeof header)) throw TruncationError("PLEMB header is truncated");

  const auto dim = detail::load_le<std::uint32_t>(header + 8);
  const auto count = detail::load_le<std::uint64_t>(header + 12);
  if (dim == 0) throw FormatError("PLEMB dimension is zero");

  const std::uint64_t record_bytes = 8 + 4ULL * dim;
  if (count > (std::numeric_limits<std::uint64_t>::max() - kPlembHeaderBytes) / record_bytes)
    throw FormatError("PLEMB count is implausibly large");
  const std::uint64_t expected = kPlembHeaderBytes + count * record_bytes;
  if (total_bytes) {
    if (*total_bytes < expected)
      throw TruncationError("PLEMB declares " + std::to_string(count) + " rows of dim " + std::to_string(dim) + " (" +
                            std::to_string(expected) + " bytes) but holds " + std::to_string(*total_bytes) + " bytes");
    if (*total_bytes > expected)
      throw FormatError("PLEMB has " + std::to_string(*total_bytes - expected) + " trailing bytes after " +
                        std::to_string(count) + " rows");
  }

  std::vector<TweetId> ids(count);
  std::vector<float> values(count * dim);
  std::vector<unsigned char> record(record_bytes);
  for (std::uint64_t r = 0; r < count; ++r) {
    in.read(reinterpret_cast<char*>(record.data()), static_cast<std::streamsize>(record_bytes));
    if (in.gcount() != static_cast<std::streamsize>(record_bytes))
      throw TruncationError("PLEMB declares " + std::to_string(count) + " rows but ends after " + std::to_string(r));
    ids[r] = detail::load_le<std::uint64_t>(record.data());
    for (std::uint32_t k = 0; k < dim; ++k) values[r * dim + k] = detail::load_le<float>(record.data() + 8 + 4 * k);
  }
  if (!total_bytes && in.peek() != std::char_traits<char>::eof()) throw FormatError("PLEMB has trailing bytes");

  EmbeddingStore store(dim, std::move(ids), std::move(values));
  return opts.normalize ? store.normalized() : store;
}

inline EmbeddingStore load_embeddings(const std::filesystem::path& path, LoadOptions opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return read_embeddings(in, std::filesystem::file_size(path), opts);
}

inline void write_embeddings(std::ostream& out, const EmbeddingStore& store) {
  out.write(kPlembMagic, sizeof kPlembMagic);
  detail::store_le<std::uint32_t>(out, static_cast<std::uint32_t>(store.dim()));
  detail::store_le<std::uint64_t>(out, store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    detail::store_le<std::uint64_t>(out, store.ids()[i]);
    for (float v : store.row(i)) detail::store_le<float>(out, v);
  }
}

inline void store_embeddings(const EmbeddingStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write embedding file " + path.string());
  write_embeddings(out, store);
  if (!out) throw Error("failed writing embedding file " + path.string());
}

}  // namespace partyline
