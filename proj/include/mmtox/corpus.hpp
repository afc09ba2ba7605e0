// Copyright 2026 The mmtox Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "mmtox/core.hpp"

namespace mmtox {

struct Document {
  std::string id;
  std::string text;
};

/// A single-language, single-category collection of toxic documents. Each
/// message or paragraph is one document.
struct Corpus {
  std::string id;
  Language language = Language::En;
  ToxicityCategory category = ToxicityCategory::Hate;
  std::vector<Document> documents;

  /// Throws FormatError if two documents share an id.
  void validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& d : documents)
      if (!seen.insert(d.id).second) throw FormatError("duplicate document id " + d.id);
  }
};

struct PlainLines {};
struct Csv {
  std::string column;
};
using CorpusFormat = std::variant<PlainLines, Csv>;

namespace detail {

// RFC 4180 records; quoted fields may span lines.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view data) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        any = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        any = true;
        break;
      case '\r':
        break;
      case '\n':
        if (any || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        row.clear();
        field.clear();
        any = false;
        break;
      default:
        field.push_back(c);
        any = true;
    }
  }
  if (quoted) throw FormatError("unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string strip_bom(std::string s) {
  if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xEF &&
      static_cast<unsigned char>(s[1]) == 0xBB && static_cast<unsigned char>(s[2]) == 0xBF)
    s.erase(0, 3);
  return s;
}

}  // namespace detail

/// Loads a corpus from a UTF-8 file. PlainLines yields one document per
/// non-empty line; Csv yields one per non-empty cell of the named column
/// (header row required). Document ids are "<corpus id>:<row number>".
inline Corpus load_corpus(const std::filesystem::path& path, const CorpusFormat& format,
                          Language language, ToxicityCategory category) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw IoError("corpus file not found: " + path.string());
  const std::string data = detail::strip_bom(read_file(path));

  Corpus corpus;
  corpus.id = path.stem().string();
  corpus.language = language;
  corpus.category = category;

  if (std::holds_alternative<PlainLines>(format)) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= data.size()) {
      auto end = data.find('\n', start);
      if (end == std::string::npos) end = data.size();
      ++line_no;
      std::string text = trim(std::string_view(data).substr(start, end - start));
      if (!text.empty())
        corpus.documents.push_back({corpus.id + ":" + std::to_string(line_no), std::move(text)});
      start = end + 1;
    }
    return corpus;
  }

  const auto& column = std::get<Csv>(format).column;
  auto rows = detail::parse_csv(data);
  if (rows.empty()) throw FormatError("CSV has no header row: " + path.string());
  std::size_t col = rows.front().size();
  for (std::size_t i = 0; i < rows.front().size(); ++i)
    if (trim(rows.front()[i]) == column) col = i;
  if (col == rows.front().size())
    throw FormatError("CSV column '" + column + "' missing in " + path.string());
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (col >= rows[r].size()) continue;
    std::string text = trim(rows[r][col]);
    if (!text.empty())
      corpus.documents.push_back({corpus.id + ":" + std::to_string(r), std::move(text)});
  }
  return corpus;
}

}  // namespace mmtox
