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

#include <algorithm>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mmtox/core.hpp"

namespace mmtox {

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One token per line; blank lines and lines starting with '#' are ignored.
  static StopwordList from_file(const std::filesystem::path& path) {
    std::unordered_set<std::string> words;
    for (auto& line : read_lines(path)) {
      auto w = trim(line);
      if (w.empty() || w.front() == '#') continue;
      words.insert(ascii_lower(w));
    }
    return StopwordList(std::move(words));
  }

  static StopwordList bundled(Language language,
                              const std::filesystem::path& data_dir = default_data_dir()) {
    return from_file(data_dir / "stopwords" / (to_string(language) + ".txt"));
  }

  bool contains(std::string_view token) const { return words_.count(std::string(token)) != 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Splits Chinese text into candidate words. Implementations must be
/// reentrant.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::vector<std::string> segment(std::string_view text) const = 0;
};

namespace detail {

inline bool is_word_char(char32_t cp) {
  if (cp < 0x80)
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  if (cp >= 0x2000 && cp <= 0x206F) return false;  // general punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFF3B && cp <= 0xFF40) return false;
  if (cp >= 0xFF5B && cp <= 0xFF65) return false;
  if (cp == 0xA0 || cp == 0xFEFF || cp == 0xFFFD) return false;
  return cp >= 0xC0;
}

// Emits lowercased non-Han word runs as tokens and hands each Han run to
// on_han.
template <typename OnHan>
void split_runs(std::string_view text, std::vector<std::string>& out, OnHan on_han) {
  const auto cps = utf8_decode(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (!is_word_char(cps[i])) {
      ++i;
      continue;
    }
    const bool han = is_han(cps[i]);
    std::size_t j = i;
    while (j < cps.size() && is_word_char(cps[j]) && is_han(cps[j]) == han) ++j;
    std::u32string_view run(cps.data() + i, j - i);
    if (han) {
      on_han(run);
    } else {
      out.push_back(ascii_lower(utf8_encode(run)));
    }
    i = j;
  }
}

}  // namespace detail

/// Overlapping character bigrams over each Han run; a one-character run
/// yields that character. Non-Han runs are kept as lowercased words.
class BigramSegmenter final : public Segmenter {
 public:
  std::vector<std::string> segment(std::string_view text) const override {
    std::vector<std::string> out;
    detail::split_runs(text, out, [&](std::u32string_view run) {
      if (run.size() == 1) {
        out.push_back(utf8_encode(run));
        return;
      }
      for (std::size_t k = 0; k + 1 < run.size(); ++k) out.push_back(utf8_encode(run.substr(k, 2)));
    });
    return out;
  }
};

/// Forward maximum matching against a word list; unmatched characters become
/// single-character tokens.
class DictionarySegmenter final : public Segmenter {
 public:
  explicit DictionarySegmenter(const std::vector<std::string>& words) {
    for (const auto& w : words) {
      auto cps = utf8_decode(w);
      if (cps.empty()) continue;
      max_len_ = std::max(max_len_, cps.size());
      words_.insert(std::move(cps));
    }
  }

  std::vector<std::string> segment(std::string_view text) const override {
    std::vector<std::string> out;
    detail::split_runs(text, out, [&](std::u32string_view run) {
      std::size_t i = 0;
      while (i < run.size()) {
        std::size_t len = std::min(max_len_, run.size() - i);
        for (; len > 1; --len)
          if (words_.count(std::u32string(run.substr(i, len)))) break;
        out.push_back(utf8_encode(run.substr(i, std::max<std::size_t>(len, 1))));
        i += std::max<std::size_t>(len, 1);
      }
    });
    return out;
  }

 private:
  std::unordered_set<std::u32string> words_;
  std::size_t max_len_ = 1;
};

/// Language-aware tokenizer with stopword removal.
///
/// En: lowercase, split on non-alphanumeric characters, drop empties.
/// Zh: delegate to the segmenter (character bigrams unless one is injected).
class Tokenizer {
 public:
  Tokenizer(Language language, StopwordList stopwords,
            std::shared_ptr<const Segmenter> segmenter = nullptr)
      : language_(language), stopwords_(std::move(stopwords)), segmenter_(std::move(segmenter)) {
    if (!segmenter_) segmenter_ = std::make_shared<BigramSegmenter>();
  }

  static Tokenizer bundled(Language language,
                           const std::filesystem::path& data_dir = default_data_dir()) {
    return Tokenizer(language, StopwordList::bundled(language, data_dir));
  }

  std::vector<std::string> tokenize(std::string_view text) const {
    std::vector<std::string> raw;
    if (language_ == Language::En) {
      detail::split_runs(text, raw, [&](std::u32string_view run) {
        raw.push_back(utf8_encode(run));
      });
    } else {
      raw = segmenter_->segment(text);
    }
    std::vector<std::string> out;
    out.reserve(raw.size());
    for (auto& t : raw)
      if (!t.empty() && !stopwords_.contains(t)) out.push_back(std::move(t));
    return out;
  }

  Language language() const { return language_; }
  const StopwordList& stopwords() const { return stopwords_; }

 private:
  Language language_;
  StopwordList stopwords_;
  std::shared_ptr<const Segmenter> segmenter_;
};

/// Tokenizes with the bundled stopword list for the language.
inline std::vector<std::string> tokenize(std::string_view text, Language language) {
  static const Tokenizer en = Tokenizer::bundled(Language::En);
  static const Tokenizer zh = Tokenizer::bundled(Language::Zh);
  return (language == Language::En ? en : zh).tokenize(text);
}

}  // namespace mmtox
