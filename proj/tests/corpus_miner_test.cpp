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


#include <gtest/gtest.h>

#include <cmath>

#include "mmtox/annotate.hpp"
#include "mmtox/corpus.hpp"
#include "mmtox/tfidf.hpp"
#include "test_support.hpp"

namespace mmtox {
namespace {

Corpus corpus_of(std::vector<std::string> texts, Language lang = Language::En) {
  Corpus c;
  c.id = "t";
  c.language = lang;
  for (std::size_t i = 0; i < texts.size(); ++i) c.documents.push_back({"t:" + std::to_string(i), texts[i]});
  return c;
}

TEST(Tfidf, TwoDocumentExample) {
  const std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"a", "c"}};
  const auto s = compute_tfidf(std::span<const std::vector<std::string>>(docs));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s.at("a"), 2.0);
  EXPECT_DOUBLE_EQ(s.at("b"), 1.0 + std::log(1.5));
  EXPECT_DOUBLE_EQ(s.at("c"), 1.0 + std::log(1.5));
}

TEST(Tfidf, RepeatedTermInSingleDocument) {
  const std::vector<std::vector<std::string>> docs = {{"x", "x", "x"}};
  EXPECT_DOUBLE_EQ(compute_tfidf(std::span<const std::vector<std::string>>(docs)).at("x"), 3.0);
}

TEST(Tfidf, EmptyCorpusThrows) {
  const std::vector<std::vector<std::string>> none;
  EXPECT_THROW(compute_tfidf(std::span<const std::vector<std::string>>(none)), EmptyCorpusError);
}

TEST(SelectKeywords, TiesBreakByToken) {
  const TfidfScores s = {{"b", 1.0}, {"a", 1.0}, {"c", 2.0}};
  const auto k = select_keywords(s, 2);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k[0].token, "c");
  EXPECT_EQ(k[1].token, "a");
  EXPECT_EQ(select_keywords(s, 10).size(), 3u);
}

TEST(MineKeywords, SupportSentencesContainToken) {
  const auto c = corpus_of({"monkeys are stupid", "stupid monkeys again", "monkeys everywhere", "lazy pigs",
                            "monkeys are stupid"});
  const auto tok = Tokenizer::bundled(Language::En, testing::data_dir());
  const auto k = mine_keywords(c, tok, 2, 5);
  ASSERT_EQ(k.size(), 2u);
  EXPECT_EQ(k[0].token, "monkeys");
  // Duplicate texts are collapsed.
  EXPECT_EQ(k[0].support.size(), 3u);
  for (const auto& s : k[1].support) EXPECT_NE(s.find(k[1].token), std::string::npos);
}

TEST(MineKeywords, TopKOverrideCapsCandidates) {
  const auto c = corpus_of({"a1 b1 c1 d1 e1", "f1 g1 h1 i1 j1 k1 l1 m1"});
  const auto tok = Tokenizer::bundled(Language::En, testing::data_dir());
  EXPECT_LE(mine_keywords(c, tok, 10).size(), 10u);
}

class ScriptedAnnotator final : public AnnotatorProvider {
 public:
  explicit ScriptedAnnotator(std::vector<SentenceAnalysis> replies, bool fail = false)
      : replies_(std::move(replies)), fail_(fail) {}
  std::vector<SentenceAnalysis> analyze(std::string_view, std::span<const std::string> sentences,
                                        Language) const override {
    if (fail_) throw AnnotatorError("offline");
    std::vector<SentenceAnalysis> out;
    for (std::size_t i = 0; i < sentences.size() && i < replies_.size(); ++i) out.push_back(replies_[i]);
    return out;
  }

 private:
  std::vector<SentenceAnalysis> replies_;
  bool fail_;
};

TEST(Annotate, PluralityVotePerField) {
  const SentenceAnalysis noun_neg{Pos::Noun, Ner::GroupName, Sentiment::Negative};
  const SentenceAnalysis verb_neu{Pos::Verb, Ner::None, Sentiment::Neutral};
  ScriptedAnnotator ann({noun_neg, noun_neg, verb_neu});
  KeywordCandidate k{"monkeys", 4.5, {"s1", "s2", "s3"}};
  const auto w = annotate(k, ann, Language::En);
  EXPECT_EQ(w.token, "monkeys");
  EXPECT_EQ(w.pos, Pos::Noun);
  EXPECT_EQ(w.ner, Ner::GroupName);
  EXPECT_EQ(w.sentiment, Sentiment::Negative);
  EXPECT_DOUBLE_EQ(w.score, 4.5);
}

TEST(Annotate, TiedVoteFallsBackToNeutral) {
  ScriptedAnnotator ann({{Pos::Noun, Ner::None, Sentiment::Negative}, {Pos::Verb, Ner::None, Sentiment::Positive}});
  const auto w = annotate({"x", 1.0, {"s1", "s2"}}, ann, Language::En);
  EXPECT_EQ(w.pos, Pos::Other);
  EXPECT_EQ(w.sentiment, Sentiment::Neutral);
}

TEST(Annotate, ProviderFailureSurfaces) {
  ScriptedAnnotator failing({}, true);
  EXPECT_THROW(annotate({"x", 1.0, {"s"}}, failing, Language::En), AnnotatorError);
  ScriptedAnnotator short_reply(std::vector<SentenceAnalysis>{SentenceAnalysis{}});
  EXPECT_THROW(annotate({"x", 1.0, {"s1", "s2"}}, short_reply, Language::En), AnnotatorError);
}

TEST(LexiconAnnotator, BundledLexiconTagsKnownWords) {
  LexiconAnnotator ann(testing::data_dir() / "lexicon");
  const std::vector<std::string> s = {"zombies are stupid"};
  const auto a = ann.analyze("zombies", s, Language::En);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0].pos, Pos::Noun);
  EXPECT_EQ(a[0].ner, Ner::GroupName);
  const auto b = ann.analyze("stupid", s, Language::En);
  EXPECT_EQ(b[0].sentiment, Sentiment::Negative);
}

}  // namespace
}  // namespace mmtox
