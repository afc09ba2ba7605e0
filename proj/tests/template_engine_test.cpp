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

#include <regex>

#include "mmtox/templates.hpp"

namespace mmtox {
namespace {

WordAnnotation word(std::string t, Pos p, Ner n = Ner::None, Sentiment s = Sentiment::Neutral) {
  return {std::move(t), p, n, s, 1.0};
}

TEST(SlotRules, HateNeedsGroupNounAndNegativeB) {
  const auto group = word("monkeys", Pos::Noun, Ner::GroupName);
  const auto ugly = word("ugly", Pos::Adjective, Ner::None, Sentiment::Negative);
  const auto nice = word("nice", Pos::Adjective, Ner::None, Sentiment::Positive);
  EXPECT_TRUE(fits_slot_a(ToxicityCategory::Hate, group));
  EXPECT_FALSE(fits_slot_a(ToxicityCategory::Hate, word("monkeys", Pos::Noun)));
  EXPECT_TRUE(fits_slot_b(ToxicityCategory::Hate, SlotB{ugly}));
  EXPECT_FALSE(fits_slot_b(ToxicityCategory::Hate, SlotB{nice}));
  EXPECT_FALSE(satisfies_rule({group, group, ToxicityCategory::Hate, "are", Language::En}));
}

TEST(SlotRules, AdvertisementNeedsContactB) {
  const auto tobacco = word("tobacco", Pos::Noun);
  EXPECT_TRUE(fits_slot_a(ToxicityCategory::Advertisement, tobacco));
  EXPECT_FALSE(fits_slot_a(ToxicityCategory::Advertisement, word("tel", Pos::Noun)));
  EXPECT_TRUE(fits_slot_b(ToxicityCategory::Advertisement, SlotB{ContactInfo{ContactPrefix::Tel, "123"}}));
  EXPECT_FALSE(fits_slot_b(ToxicityCategory::Advertisement, SlotB{ContactInfo{ContactPrefix::Tel, ""}}));
  EXPECT_FALSE(fits_slot_b(ToxicityCategory::Advertisement, SlotB{tobacco}));
}

TEST(SlotRules, PornographyVerbThenNoun) {
  EXPECT_TRUE(fits_slot_a(ToxicityCategory::Pornography, word("caress", Pos::Verb)));
  EXPECT_FALSE(fits_slot_a(ToxicityCategory::Pornography, word("belly", Pos::Noun)));
  EXPECT_TRUE(fits_slot_b(ToxicityCategory::Pornography, SlotB{word("belly", Pos::Noun)}));
}

TEST(RenderSeed, TemplatesAreByteExact) {
  KeywordPair hate{word("monkeys", Pos::Noun, Ner::GroupName),
                   word("stupid", Pos::Adjective, Ner::None, Sentiment::Negative), ToxicityCategory::Hate, "are",
                   Language::En};
  EXPECT_EQ(render_seed(hate).text, "monkeys are stupid");
  EXPECT_EQ(render_seed(hate).template_id, "hate/A-are-B");
  KeywordPair ad{word("tobacco", Pos::Noun), ContactInfo{ContactPrefix::Tel, "123"}, ToxicityCategory::Advertisement,
                 ":", Language::En};
  EXPECT_EQ(render_seed(ad).text, "tobacco: Tel: 123");
  KeywordPair porn{word("caress", Pos::Verb), word("belly", Pos::Noun), ToxicityCategory::Pornography, "your",
                   Language::En};
  EXPECT_EQ(render_seed(porn).text, "caress your belly");
  EXPECT_EQ(a_with_middle(hate), "monkeys are");
  EXPECT_EQ(b_with_middle(hate), "are stupid");
  EXPECT_EQ(a_with_middle(ad), "tobacco:");
  EXPECT_EQ(b_with_middle(ad), ": Tel: 123");
}

TEST(RenderSeed, RejectsRuleViolations) {
  KeywordPair bad{word("x", Pos::Verb), word("y", Pos::Verb), ToxicityCategory::Hate, "are", Language::En};
  EXPECT_THROW(render_seed(bad), std::logic_error);
}

TEST(ExtractPairs, AMajorOrderAndLimit) {
  const std::vector<WordAnnotation> words = {
      word("monkeys", Pos::Noun, Ner::GroupName), word("stupid", Pos::Adjective, Ner::None, Sentiment::Negative),
      word("pigs", Pos::Noun, Ner::GroupName, Sentiment::Negative), word("ugly", Pos::Adjective, Ner::None,
                                                                          Sentiment::Negative)};
  const auto all = extract_pairs(ToxicityCategory::Hate, Language::En, std::span<const WordAnnotation>(words));
  // monkeys x {stupid, pigs, ugly}, pigs x {stupid, ugly}
  ASSERT_EQ(all.size(), 5u);
  EXPECT_EQ(all[0].a.token, "monkeys");
  EXPECT_EQ(all[1].b_text(), "pigs");
  EXPECT_EQ(all[3].a.token, "pigs");
  for (const auto& p : all) EXPECT_TRUE(satisfies_rule(p));
  EXPECT_EQ(extract_pairs(ToxicityCategory::Hate, Language::En, std::span<const WordAnnotation>(words), 2).size(),
            2u);
}

TEST(ExtractPairs, ZeroValidPairs) {
  const std::vector<WordAnnotation> words = {word("run", Pos::Verb)};
  EXPECT_TRUE(extract_pairs(ToxicityCategory::Hate, Language::En, std::span<const WordAnnotation>(words)).empty());
}

TEST(TemplateOptions, MiddleWordsConfigurable) {
  EXPECT_EQ(middle_word(ToxicityCategory::Hate), "are");
  EXPECT_EQ(middle_word(ToxicityCategory::Advertisement), ":");
  EXPECT_EQ(middle_word(ToxicityCategory::Pornography), "your");
  TemplateOptions o{"is", "my"};
  EXPECT_EQ(middle_word(ToxicityCategory::Hate, o), "is");
  EXPECT_EQ(middle_word(ToxicityCategory::Pornography, o), "my");
}

TEST(Contacts, HarvestThenSynthesize) {
  Corpus c;
  c.documents = {{"1", "buy now tel: 5551234 or Email: deals@shop.example."},
                 {"2", "TEL：7654321，call"},
                 {"3", "tel: 5551234 again"}};
  const auto harvested = harvest_contacts(c, 5);
  ASSERT_EQ(harvested.size(), 3u);
  EXPECT_EQ(harvested[0].prefix, ContactPrefix::Tel);
  EXPECT_EQ(harvested[0].value, "5551234");
  EXPECT_EQ(harvested[1].value, "7654321");
  EXPECT_EQ(harvested[2].value, "deals@shop.example");

  Rng r1(9), r2(9);
  const auto a = contact_candidates(c, 3, r1);
  const auto b = contact_candidates(c, 3, r2);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 12u);
  const std::regex tel("[0-9]{7,8}");
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& ci = std::get<ContactInfo>(a[i]);
    EXPECT_EQ(ci.prefix, ContactPrefix::Tel);
    EXPECT_TRUE(std::regex_match(ci.value, tel)) << ci.value;
  }
}

}  // namespace
}  // namespace mmtox
