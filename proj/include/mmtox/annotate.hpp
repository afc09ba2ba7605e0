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

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mmtox/core.hpp"
#include "mmtox/tfidf.hpp"

namespace mmtox {

enum class Pos { Noun, Verb, Adjective, Adverb, Other };
enum class Ner { GroupName, Location, Person, None };
enum class Sentiment { Negative, Neutral, Positive };

inline std::string to_string(Pos p) {
  switch (p) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adjective: return "adjective";
    case Pos::Adverb: return "adverb";
    case Pos::Other: return "other";
  }
  return "other";
}

inline std::string to_string(Ner n) {
  switch (n) {
    case Ner::GroupName: return "group";
    case Ner::Location: return "location";
    case Ner::Person: return "person";
    case Ner::None: return "none";
  }
  return "none";
}

inline std::string to_string(Sentiment s) {
  switch (s) {
    case Sentiment::Negative: return "negative";
    case Sentiment::Neutral: return "neutral";
    case Sentiment::Positive: return "positive";
  }
  return "neutral";
}

inline Pos parse_pos(std::string_view s) {
  auto l = ascii_lower(s);
  if (l == "noun" || l == "n" || l == "propn") return Pos::Noun;
  if (l == "verb" || l == "v") return Pos::Verb;
  if (l == "adjective" || l == "adj" || l == "a") return Pos::Adjective;
  if (l == "adverb" || l == "adv" || l == "d") return Pos::Adverb;
  return Pos::Other;
}

inline Ner parse_ner(std::string_view s) {
  auto l = ascii_lower(s);
  if (l == "group" || l == "groupname" || l == "norp") return Ner::GroupName;
  if (l == "location" || l == "loc" || l == "gpe") return Ner::Location;
  if (l == "person" || l == "per") return Ner::Person;
  return Ner::None;
}

inline Sentiment parse_sentiment(std::string_view s) {
  auto l = ascii_lower(s);
  if (l == "negative" || l == "neg") return Sentiment::Negative;
  if (l == "positive" || l == "pos") return Sentiment::Positive;
  return Sentiment::Neutral;
}

/// One provider judgement of a token inside one sentence.
struct SentenceAnalysis {
  Pos pos = Pos::Other;
  Ner ner = Ner::None;
  Sentiment sentiment = Sentiment::Neutral;
};

struct WordAnnotation {
  std::string token;
  Pos pos = Pos::Other;
  Ner ner = Ner::None;
  Sentiment sentiment = Sentiment::Neutral;
  double score = 0.0;

  bool operator==(const WordAnnotation&) const = default;
};

/// Part-of-speech, entity and sentiment analysis of a token in context.
/// Implementations must tolerate concurrent calls.
class AnnotatorProvider {
 public:
  virtual ~AnnotatorProvider() = default;
  /// Returns one analysis per sentence, in order. Throws AnnotatorError.
  virtual std::vector<SentenceAnalysis> analyze(std::string_view token,
                                                std::span<const std::string> sentences,
                                                Language language) const = 0;
};

namespace detail {

// Unique plurality wins; a shared top count falls back to the neutral value.
template <typename E, std::size_t N>
E vote(std::span<const E> values, E neutral) {
  std::array<std::size_t, N> counts{};
  for (E v : values) ++counts[static_cast<std::size_t>(v)];
  std::size_t best = 0;
  std::size_t best_count = 0;
  bool tie = false;
  for (std::size_t i = 0; i < N; ++i) {
    if (counts[i] > best_count) {
      best = i;
      best_count = counts[i];
      tie = false;
    } else if (counts[i] == best_count && best_count > 0) {
      tie = true;
    }
  }
  if (best_count == 0 || tie) return neutral;
  return static_cast<E>(best);
}

}  // namespace detail

/// Majority vote of per-sentence analyses.
inline WordAnnotation vote_annotation(std::string token, std::span<const SentenceAnalysis> analyses) {
  std::vector<Pos> pos;
  std::vector<Ner> ner;
  std::vector<Sentiment> sent;
  for (const auto& a : analyses) {
    pos.push_back(a.pos);
    ner.push_back(a.ner);
    sent.push_back(a.sentiment);
  }
  WordAnnotation w;
  w.token = std::move(token);
  w.pos = detail::vote<Pos, 5>(pos, Pos::Other);
  w.ner = detail::vote<Ner, 4>(ner, Ner::None);
  w.sentiment = detail::vote<Sentiment, 3>(sent, Sentiment::Neutral);
  return w;
}

/// Annotates a keyword from its support sentences. Throws AnnotatorError
/// when the provider fails or answers with the wrong number of analyses.
inline WordAnnotation annotate(const KeywordCandidate& candidate,
                               const AnnotatorProvider& annotator, Language language) {
  require(!candidate.support.empty(), "annotate: candidate has no support sentences");
  auto analyses = annotator.analyze(candidate.token, candidate.support, language);
  if (analyses.size() != candidate.support.size())
    throw AnnotatorError("annotator returned " + std::to_string(analyses.size()) +
                         " analyses for " + std::to_string(candidate.support.size()) +
                         " sentences");
  auto w = vote_annotation(candidate.token, analyses);
  w.score = candidate.score;
  return w;
}

/// Offline rule-and-lexicon annotator.
///
/// Data directory layout (per language): pos.tsv (token<TAB>tag),
/// groups.txt / locations.txt / persons.txt gazetteers, negative.txt /
/// positive.txt sentiment lexicons. Tokens missing from the PoS lexicon fall
/// back to context and suffix rules for English and to Other for Chinese;
/// tokens missing from the sentiment lexicon are Neutral.
class LexiconAnnotator final : public AnnotatorProvider {
 public:
  explicit LexiconAnnotator(const std::filesystem::path& lexicon_root =
                                default_data_dir() / "lexicon") {
    for (Language lang : kAllLanguages) {
      auto dir = lexicon_root / to_string(lang);
      auto& lex = lexicons_[static_cast<std::size_t>(lang)];
      std::error_code ec;
      if (!std::filesystem::is_directory(dir, ec)) continue;
      if (std::filesystem::exists(dir / "pos.tsv")) {
        for (const auto& line : read_lines(dir / "pos.tsv")) {
          if (line.empty() || line.front() == '#') continue;
          auto tab = line.find('\t');
          if (tab == std::string::npos) continue;
          lex.pos[ascii_lower(trim(line.substr(0, tab)))] = parse_pos(trim(line.substr(tab + 1)));
        }
      }
      load_set(dir / "groups.txt", lex.groups);
      load_set(dir / "locations.txt", lex.locations);
      load_set(dir / "persons.txt", lex.persons);
      load_set(dir / "negative.txt", lex.negative);
      load_set(dir / "positive.txt", lex.positive);
    }
  }

  std::vector<SentenceAnalysis> analyze(std::string_view token,
                                        std::span<const std::string> sentences,
                                        Language language) const override {
    std::vector<SentenceAnalysis> out;
    out.reserve(sentences.size());
    for (const auto& s : sentences) out.push_back(analyze_one(ascii_lower(token), s, language));
    return out;
  }

 private:
  struct Lexicon {
    std::unordered_map<std::string, Pos> pos;
    std::unordered_set<std::string> groups, locations, persons, negative, positive;
  };

  static void load_set(const std::filesystem::path& p, std::unordered_set<std::string>& out) {
    if (!std::filesystem::exists(p)) return;
    for (const auto& line : read_lines(p)) {
      auto w = trim(line);
      if (!w.empty() && w.front() != '#') out.insert(ascii_lower(w));
    }
  }

  static bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
  }

  static Pos suffix_pos(std::string_view t) {
    for (auto suf : {"ly"})
      if (ends_with(t, suf)) return Pos::Adverb;
    for (auto suf : {"ous", "ful", "ive", "less", "able", "ible", "ish", "ic", "al"})
      if (ends_with(t, suf)) return Pos::Adjective;
    for (auto suf : {"ize", "ise", "ate", "ify", "ing", "ed"})
      if (ends_with(t, suf)) return Pos::Verb;
    return Pos::Noun;
  }

  SentenceAnalysis analyze_one(const std::string& token, std::string_view sentence,
                               Language language) const {
    const auto& lex = lexicons_[static_cast<std::size_t>(language)];
    SentenceAnalysis a;
    if (auto it = lex.pos.find(token); it != lex.pos.end()) {
      a.pos = it->second;
    } else if (language == Language::En) {
      a.pos = context_pos(token, sentence);
    } else {
      a.pos = Pos::Other;
    }
    if (lex.groups.count(token)) {
      a.ner = Ner::GroupName;
    } else if (lex.locations.count(token)) {
      a.ner = Ner::Location;
    } else if (lex.persons.count(token)) {
      a.ner = Ner::Person;
    }
    if (lex.negative.count(token)) {
      a.sentiment = Sentiment::Negative;
    } else if (lex.positive.count(token)) {
      a.sentiment = Sentiment::Positive;
    }
    return a;
  }

  static Pos context_pos(const std::string& token, std::string_view sentence) {
    static const std::unordered_set<std::string> determiners = {
        "a", "an", "the", "your", "my", "his", "her", "their", "our", "this", "that",
        "these", "those", "some", "all"};
    static const std::unordered_set<std::string> verb_cues = {
        "to", "will", "would", "can", "could", "must", "should", "i", "we", "you", "they",
        "please", "lets"};
    std::vector<std::string> words;
    detail::split_runs(sentence, words, [&](std::u32string_view run) {
      words.push_back(utf8_encode(run));
    });
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (words[i] != token) continue;
      if (i > 0 && determiners.count(words[i - 1])) return Pos::Noun;
      if (i > 0 && verb_cues.count(words[i - 1])) return Pos::Verb;
      if (i + 1 < words.size() && determiners.count(words[i + 1])) return Pos::Verb;
      break;
    }
    return suffix_pos(token);
  }

  std::array<Lexicon, 2> lexicons_;
};

}  // namespace mmtox
