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

#include "mmtox/config.hpp"
#include "test_support.hpp"

namespace mmtox {
namespace {

TEST(Toml, ScalarsTablesAndArrays) {
  const auto t = parse_toml(R"(
# comment
seed = 42
name = "a \"quoted\" é value"  # trailing
ratio = 0.25
flag = true
list = ["en", "zh",
        "x"]
[corpora]
en.hate = "data/en.txt"
"zh.porn" = 'raw\path'
)");
  EXPECT_EQ(std::get<std::int64_t>(t.at("seed")), 42);
  EXPECT_EQ(std::get<std::string>(t.at("name")), "a \"quoted\" \xC3\xA9 value");
  EXPECT_DOUBLE_EQ(std::get<double>(t.at("ratio")), 0.25);
  EXPECT_TRUE(std::get<bool>(t.at("flag")));
  EXPECT_EQ(std::get<std::vector<std::string>>(t.at("list")), (std::vector<std::string>{"en", "zh", "x"}));
  EXPECT_EQ(std::get<std::string>(t.at("corpora.en.hate")), "data/en.txt");
  EXPECT_EQ(std::get<std::string>(t.at("corpora.zh.porn")), "raw\\path");
}

TEST(Toml, ErrorsNameTheLine) {
  try {
    parse_toml("a = 1\nb = \n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_toml("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse_toml("a = \"open\n"), ConfigError);
}

TEST(Toml, SerializeParseIdentity) {
  const TomlTable t = {{"seed", std::int64_t{7}},      {"x.a", 0.1},
                       {"x.b", std::string("q\"\n")}, {"y.list", std::vector<std::string>{"a", "b"}},
                       {"y.on", false}};
  EXPECT_EQ(parse_toml(serialize_toml(t)), t);
}

CampaignConfig sample() {
  CampaignConfig c;
  c.seed = 42;
  for (Language l : kAllLanguages)
    for (ToxicityCategory cat : kAllCategories)
      c.corpora[CampaignConfig::corpus_key(l, cat)] =
          testing::data_dir() / "sample" / to_string(l) / (to_string(cat) + ".txt");
  return c;
}

TEST(Config, DefaultsMatchPipelineConstants) {
  const CampaignConfig c;
  EXPECT_EQ(c.top_k, 20u);
  EXPECT_EQ(c.support_sentences, 5u);
  EXPECT_EQ(c.image_candidates, 5u);
  EXPECT_DOUBLE_EQ(c.area_low, 0.8);
  EXPECT_DOUBLE_EQ(c.area_high, 1.2);
  EXPECT_DOUBLE_EQ(c.overlap, 0.30);
  EXPECT_EQ(c.pairs_per_category, 100u);
  EXPECT_EQ(c.combos.size(), 5u);
  EXPECT_EQ(c.languages.size(), 2u);
  EXPECT_EQ(c.categories.size(), 3u);
}

TEST(Config, RoundTripIsIdentity) {
  auto c = sample();
  c.jobs = 3;
  c.run_id = "trial";
  c.languages = {Language::Zh};
  c.combos = {Combo::ImageVT, Combo::VideoVAT};
  c.image_assignment = ImageAssignment::AVision;
  c.overlap = 0.1 + 0.2;  // not exactly representable as written
  c.video.fps = 12;
  c.encoder.executable = "/usr/bin/ffmpeg";
  c.providers.moderator = "http://127.0.0.1:9000";
  c.http.requests_per_second = 2.5;
  c.toxic_labels = {"hate", "spam"};
  c.mock.reads_image_text = false;
  const auto text = serialize_config(c);
  const auto back = parse_config(text);
  EXPECT_EQ(back, c);
  EXPECT_EQ(serialize_config(back), text);
}

TEST(Config, RelativePathsResolveAgainstConfigDir) {
  testing::TempDir dir;
  write_file(dir / "cfg/c.toml", "seed = 1\noutput_dir = \"out\"\n[corpora]\nen.hate = \"../en.txt\"\n");
  const auto c = load_config(dir / "cfg/c.toml");
  EXPECT_EQ(c.output_dir, (dir / "cfg/out").lexically_normal());
  EXPECT_EQ(c.corpora.at("en.hate"), (dir / "en.txt").lexically_normal());
}

TEST(Config, UnknownKeysAndWrongTypesRejected) {
  EXPECT_THROW(parse_config("seeed = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = \"42\"\n"), ConfigError);
  EXPECT_THROW(parse_config("[layout]\noverlap = \"high\"\n"), ConfigError);
  EXPECT_THROW(parse_config("combos = [\"Image-XY\"]\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.toml"), ConfigError);
}

TEST(Config, ValidationFailsFast) {
  auto c = sample();
  EXPECT_NO_THROW(c.validate());
  auto unseeded = c;
  unseeded.seed.reset();
  EXPECT_THROW(unseeded.validate(), ConfigError);
  auto missing = c;
  missing.corpora.erase("zh.hate");
  EXPECT_THROW(missing.validate(), ConfigError);
  auto absent = c;
  absent.corpora["en.hate"] = "/nonexistent/hate.txt";
  EXPECT_THROW(absent.validate(), ConfigError);
  auto overlap = c;
  overlap.overlap = 1.5;
  EXPECT_THROW(overlap.validate(), ConfigError);
  auto window = c;
  window.area_low = 1.3;
  EXPECT_THROW(window.validate(), ConfigError);
  auto variant_only = c;
  variant_only.combos = {Combo::VideoText};
  EXPECT_THROW(variant_only.validate(), ConfigError);
  auto subset = c;
  subset.languages = {Language::En};
  subset.corpora = {{"en.hate", c.corpora.at("en.hate")},
                    {"en.advertisement", c.corpora.at("en.advertisement")},
                    {"en.pornography", c.corpora.at("en.pornography")}};
  EXPECT_NO_THROW(subset.validate());
}

TEST(Config, ProviderAssignment) {
  ProviderSelection p;
  p.assign("moderator=http://localhost:8089");
  p.assign("tts = stub");
  EXPECT_EQ(p.moderator, "http://localhost:8089");
  EXPECT_EQ(p.tts, "stub");
  EXPECT_THROW(p.assign("moderator"), ConfigError);
  EXPECT_THROW(p.assign("ocr=stub"), ConfigError);
}

TEST(Config, ListFlags) {
  EXPECT_EQ(detail::split_list(" en, zh ,,"), (std::vector<std::string>{"en", "zh"}));
  EXPECT_EQ(parse_languages({"en"}), std::vector<Language>{Language::En});
  EXPECT_THROW(parse_languages({"fr"}), ConfigError);
  EXPECT_THROW(parse_categories({"spam"}), Error);
}

TEST(Config, BundledSampleConfigLoads) {
  const auto c = load_config(std::filesystem::path(MMTOX_SOURCE_DIR) / "configs" / "sample.toml");
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.corpora.size(), 6u);
  EXPECT_NO_THROW(c.validate());
}

}  // namespace
}  // namespace mmtox
