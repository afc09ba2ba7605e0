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
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mmtox/corpus.hpp"
#include "mmtox/tokenize.hpp"

namespace mmtox {

inline constexpr std::size_t kDefaultTopKeywords = 20;
inline constexpr std::size_t kDefaultSupportSentences = 5;

using TfidfScores = std::map<std::string, double>;

struct KeywordCandidate {
  std::string token;
  double score = 0.0;
  std::vector<std::string> support;
};

/// Smoothed inverse document frequency: ln((1 + N) / (1 + df)) + 1.
inline double smoothed_idf(std::size_t documents, std::size_t document_frequency) {
  return std::log((1.0 + static_cast<double>(documents)) /
                  (1.0 + static_cast<double>(document_frequency))) +
         1.0;
}

/// Corpus-level TF-IDF over pre-tokenized documents:
///   score(t) = sum_d tf(t, d) * idf(t)
/// which is the total occurrence count of t times its idf.
inline TfidfScores compute_tfidf(std::span<const std::vector<std::string>> documents) {
  if (documents.empty()) throw EmptyCorpusError();
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // count, df
  std::unordered_set<std::string_view> in_doc;
  for (const auto& doc : documents) {
    in_doc.clear();
    for (const auto& t : doc) {
      auto& s = stats[t];
      ++s.first;
      if (in_doc.insert(t).second) ++s.second;
    }
  }
  TfidfScores scores;
  for (const auto& [token, s] : stats)
    scores.emplace(token, static_cast<double>(s.first) * smoothed_idf(documents.size(), s.second));
  return scores;
}

inline std::vector<std::vector<std::string>> tokenize_corpus(const Corpus& corpus,
                                                             const Tokenizer& tokenizer) {
  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents) docs.push_back(tokenizer.tokenize(d.text));
  return docs;
}

inline TfidfScores compute_tfidf(const Corpus& corpus, const Tokenizer& tokenizer) {
  if (corpus.documents.empty()) throw EmptyCorpusError();
  const auto docs = tokenize_corpus(corpus, tokenizer);
  return compute_tfidf(std::span<const std::vector<std::string>>(docs));
}

/// Top-k tokens by descending score; equal scores are ordered by token.
inline std::vector<KeywordCandidate> select_keywords(const TfidfScores& scores,
                                                     std::size_t k = kDefaultTopKeywords) {
  require(k >= 1, "select_keywords: k must be positive");
  std::vector<KeywordCandidate> all;
  all.reserve(scores.size());
  for (const auto& [token, score] : scores) all.push_back({token, score, {}});
  const auto n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(),
                    [](const KeywordCandidate& a, const KeywordCandidate& b) {
                      if (a.score != b.score) return a.score > b.score;
                      return a.token < b.token;
                    });
  all.resize(n);
  return all;
}

/// Up to n documents containing token (as a token), in corpus order, with
/// duplicate texts collapsed.
inline std::vector<std::string> fetch_support(const Corpus& corpus, std::string_view token,
                                              const Tokenizer& tokenizer,
                                              std::size_t n = kDefaultSupportSentences) {
  require(!token.empty(), "fetch_support: empty token");
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& d : corpus.documents) {
    if (out.size() >= n) break;
    const auto toks = tokenizer.tokenize(d.text);
    if (std::find(toks.begin(), toks.end(), token) == toks.end()) continue;
    if (seen.insert(d.text).second) out.push_back(d.text);
  }
  return out;
}

/// Score, select and attach support sentences in one pass.
inline std::vector<KeywordCandidate> mine_keywords(const Corpus& corpus, const Tokenizer& tokenizer,
                                                   std::size_t k = kDefaultTopKeywords,
                                                   std::size_t support = kDefaultSupportSentences) {
  auto candidates = select_keywords(compute_tfidf(corpus, tokenizer), k);
  for (auto& c : candidates) c.support = fetch_support(corpus, c.token, tokenizer, support);
  return candidates;
}

}  // namespace mmtox
