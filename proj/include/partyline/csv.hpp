// Copyright 2026 The partyline Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "partyline/error.hpp"

// Minimal RFC-4180 reading and writing.
namespace partyline::csv {

inline bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void write_field(std::ostream& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    write_field(out, fields[i]);
  }
  out << "\r\n";
}

/// Reads one record, which may span several physical lines when a quoted
/// field contains a line break. Returns false at end of input. `line` is
/// advanced by the number of physical lines consumed.
inline bool read_row(std::istream& in, std::vector<std::string>& fields, std::size_t& line) {
  fields.clear();
  std::string physical;
  if (!std::getline(in, physical)) return false;
  ++line;
  const std::size_t start_line = line;

  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == physical.size()) {
      if (quoted) {
        field += '\n';
        if (!std::getline(in, physical)) throw ParseError(start_line, "unterminated quoted field");
        ++line;
        i = static_cast<std::size_t>(-1);
        continue;
      }
      if (!was_quoted && !field.empty() && field.back() == '\r') field.pop_back();
      fields.push_back(std::move(field));
      return true;
    }
    const char c = physical[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < physical.size() && physical[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty() && !was_quoted) {
      quoted = was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      was_quoted = false;
    } else if (c == '\r' && i + 1 == physical.size()) {
      // CRLF terminator
    } else {
      field += c;
    }
  }
}

}  // namespace partyline::csv
