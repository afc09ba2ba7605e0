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

#include <set>

#include "mmtox/core.hpp"
#include "mmtox/corpus.hpp"
#include "mmtox/tokenize.hpp"
#include "test_support.hpp"

namespace mmtox {
namespace {

TEST(Utf8, RoundTripsMixedScripts) {
  const std::string s = "tobacco: 烟草 ok";
  const auto cps = utf8_decode(s);
  EXPECT_EQ(cps.size(), 14u);
  EXPECT_EQ(utf8_encode(cps), s);
  EXPECT_TRUE(is_han(cps[9]));
  EXPECT_TRUE(is_wide(cps[9]));
  EXPECT_FALSE(is_wide(U'a'));
}

TEST(Strings, TrimLowerEquals) {
  EXPECT_EQ(trim("  a b \t\n"), "a b");
  EXPECT_EQ(ascii_lower("TeL"), "tel");
  EXPECT_TRUE(iequals("Monkey", "monKEY"));
  EXPECT_FALSE(iequals("monkey", "monkeys"));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    differs |= x != c.next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformIndexStaysInRange) {
  Rng r(7);
  std::set<std::size_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.uniform_index(9);
    ASSERT_LT(v, 9u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 9u);
  EXPECT_THROW(r.uniform_index(0), std::logic_error);
}

TEST(DeriveSeed, DependsOnSeedAndKey) {
  EXPECT_EQ(derive_seed(42, "en-hate-000-image-vt"), derive_seed(42, "en-hate-000-image-vt"));
  EXPECT_NE(derive_seed(42, "a"), derive_seed(42, "b"));
  EXPECT_NE(derive_seed(42, "a"), derive_seed(43, "a"));
}

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Files, AtomicWriteReplacesContent) {
  testing::TempDir dir;
  const auto p = dir / "sub/f.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  EXPECT_THROW(read_file(dir / "missing"), IoError);
}

TEST(Corpus, PlainLinesSkipBlankLines) {
  testing::TempDir dir;
  write_file(dir / "c.txt", "\xEF\xBB\xBF" "first line\n\n  second  \r\n");
  const auto c = load_corpus(dir / "c.txt", PlainLines{}, Language::En, ToxicityCategory::Hate);
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].text, "first line");
  EXPECT_EQ(c.documents[1].text, "second");
  EXPECT_NE(c.documents[0].id, c.documents[1].id);
}

TEST(Corpus, CsvColumnWithQuotes) {
  testing::TempDir dir;
  write_file(dir / "c.csv", "id,text\n1,\"hello, world\"\n2,\"say \"\"hi\"\"\"\n3,\n");
  const auto c = load_corpus(dir / "c.csv", Csv{"text"}, Language::En, ToxicityCategory::Hate);
  ASSERT_EQ(c.documents.size(), 2u);
  EXPECT_EQ(c.documents[0].text, "hello, world");
  EXPECT_EQ(c.documents[1].text, "say \"hi\"");
  EXPECT_THROW(load_corpus(dir / "c.csv", Csv{"body"}, Language::En, ToxicityCategory::Hate), FormatError);
}

TEST(Corpus, MissingFileIsIoError) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.txt", PlainLines{}, Language::En, ToxicityCategory::Hate),
               IoError);
}

TEST(Tokenizer, EnglishDropsStopwordsAndLowercases) {
  const auto tok = Tokenizer::bundled(Language::En, testing::data_dir());
  const auto t = tok.tokenize("The Monkeys are STUPID, and they're lazy!");
  EXPECT_NE(std::find(t.begin(), t.end(), "monkeys"), t.end());
  EXPECT_NE(std::find(t.begin(), t.end(), "stupid"), t.end());
  EXPECT_EQ(std::find(t.begin(), t.end(), "the"), t.end());
  EXPECT_EQ(std::find(t.begin(), t.end(), "and"), t.end());
}

TEST(Tokenizer, ChineseBigramsOverHanRuns) {
  const auto tok = Tokenizer::bundled(Language::Zh, testing::data_dir());
  const auto t = tok.tokenize("猴子很笨");
  EXPECT_FALSE(t.empty());
  for (const auto& w : t) EXPECT_LE(utf8_length(w), 2u);
}

}  // namespace
}  // namespace mmtox
