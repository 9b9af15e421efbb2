// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "partyline/error.hpp"

namespace partyline {

using HashtagSet = std::set<std::string>;

namespace detail {

inline bool is_hashtag_char(UChar32 c) {
  if (c == '_') return true;
  const auto mask = U_GET_GC_MASK(c);
  // Letters, decimal digits, and combining marks (so decomposed umlauts stay
  // inside the token).
  return (mask & (U_GC_L_MASK | U_GC_ND_MASK | U_GC_M_MASK)) != 0;
}

}  // namespace detail

/// Unicode full case fold followed by NFC. Diacritics are preserved.
inline std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s.foldCase();
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_SUCCESS(status)) {
    icu::UnicodeString normalized = nfc->normalize(s, status);
    if (U_SUCCESS(status)) s = std::move(normalized);
  }
  std::string out;
  s.toUTF8String(out);
  return out;
}

/// Normalizes a hashtag supplied explicitly (e.g. in a "hashtags" field):
/// one leading '#' is stripped and the rest case-folded. Throws ParseError if
/// the result is empty or contains whitespace.
inline std::string normalize_hashtag(std::string_view raw) {
  if (!raw.empty() && raw.front() == '#') raw.remove_prefix(1);
  std::string folded = fold_case(raw);
  if (folded.empty()) throw ParseError("empty hashtag");
  const auto* p = reinterpret_cast<const uint8_t*>(folded.data());
  const auto n = static_cast<int32_t>(folded.size());
  for (int32_t i = 0; i < n;) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) throw ParseError("hashtag is not valid UTF-8");
    if (u_isUWhiteSpace(c) || c == '#') throw ParseError("hashtag '" + folded + "' contains whitespace or '#'");
  }
  return folded;
}

/// Every '#' followed by one or more letters, digits, underscores (or
/// combining marks) yields one hashtag; '#' is stripped and the token
/// case-folded. Invalid UTF-8 sequences end a token.
inline HashtagSet extract_hashtags(std::string_view text) {
  HashtagSet tags;
  const auto* p = reinterpret_cast<const uint8_t*>(text.data());
  const auto n = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < n) {
    if (p[i] != '#') {
      UChar32 skipped;
      U8_NEXT(p, i, n, skipped);
      (void)skipped;
      continue;
    }
    const int32_t start = ++i;
    int32_t end = start;
    while (end < n) {
      int32_t next = end;
      UChar32 c;
      U8_NEXT(p, next, n, c);
      if (c < 0 || !detail::is_hashtag_char(c)) break;
      end = next;
    }
    if (end > start) tags.insert(fold_case(text.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(end - start))));
    i = end;
  }
  return tags;
}

}  // namespace partyline
