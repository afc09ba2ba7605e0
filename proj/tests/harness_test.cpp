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

#include <chrono>

#include "httplib.h"
#include "mmtox/harness.hpp"
#include "mmtox/http.hpp"
#include "mmtox/manifest.hpp"
#include "mmtox/moderation.hpp"
#include "test_support.hpp"

namespace mmtox {
namespace {

TestCaseManifest image_case(std::string id, std::string inserted_text, std::string label) {
  TestCaseManifest m;
  m.case_id = std::move(id);
  m.seed_id = "en-hate-000";
  m.seed_sentence = "monkeys are stupid";
  m.template_id = "hate/A-are-B";
  m.keyword_a = "monkeys";
  m.keyword_b = "stupid";
  m.middle = "are";
  m.assignment = {Modality::Vision, Modality::Text};
  m.artifact_kind = ArtifactKind::Image;
  m.combo = Combo::ImageVT;
  PlacementSummary p;
  p.cell = "middle-right";
  p.row = 1;
  p.col = 2;
  p.text_box = {1, 2, 30, 20};
  p.lines = {inserted_text};
  p.text = inserted_text;
  m.placement = p;
  AssetRecord a;
  a.slot = "A";
  a.modality = "vision";
  a.content = std::move(label);
  a.provenance = "synth:monkeys";
  a.salient = BoundingBox{1, 1, 5, 5};
  AssetRecord b;
  b.slot = "B";
  b.modality = "text";
  b.content = inserted_text;
  b.provenance = "template";
  m.assets = {a, b};
  m.artifact = "artifact.png";
  return m;
}

MockPolicy banning(std::vector<std::string> words) {
  MockPolicy p;
  p.banned = std::move(words);
  return p;
}

TEST(MockModerator, WordBoundariesAndCase) {
  const auto p = banning({"stupid", "废物"});
  EXPECT_TRUE(is_toxic(mock_moderate("Monkeys are STUPID!", p)));
  EXPECT_FALSE(is_toxic(mock_moderate("stupidity is not banned", p)));
  EXPECT_TRUE(is_toxic(mock_moderate("矮人 are 废物", p)));
  EXPECT_TRUE(is_toxic(mock_moderate("stupid，真的", p)));
  const auto v = std::get<Toxic>(mock_moderate("stupid", p));
  EXPECT_EQ(v.labels, std::vector<std::string>{"text:stupid"});
  EXPECT_EQ(v.confidence, 1.0);
}

TEST(MockModerator, BlindSpotHidesRenderedText) {
  auto p = banning({"stupid"});
  const auto m = image_case("c1", "are stupid", "monkeys");
  EXPECT_TRUE(is_toxic(mock_moderate(content_of(m), p)));
  p.reads_image_text = false;
  EXPECT_EQ(mock_moderate(content_of(m), p), ModerationVerdict{NonToxic{}});
  p.banned.push_back("monkeys");
  EXPECT_TRUE(is_toxic(mock_moderate(content_of(m), p)));
  p.reads_image_salient_label = false;
  EXPECT_FALSE(is_toxic(mock_moderate(content_of(m), p)));
}

TEST(MockModerator, PolicySwap) {
  MockModerator mod(banning({"stupid"}));
  EXPECT_TRUE(is_toxic(mod.moderate_text("stupid")));
  mod.set_policy(banning({}));
  EXPECT_FALSE(is_toxic(mod.moderate_text("stupid")));
  EXPECT_EQ(mod.id(), "mock");
}

TEST(Verdict, JsonRoundTrip) {
  for (const ModerationVerdict& v :
       {ModerationVerdict{Toxic{{"a", "b"}, 0.5}}, ModerationVerdict{Toxic{{}, std::nullopt}},
        ModerationVerdict{NonToxic{}}, ModerationVerdict{ProviderFailure{"timeout"}}})
    EXPECT_EQ(verdict_from_json(to_json(v)), v);
  EXPECT_THROW(verdict_from_json(json{{"verdict", "toxic"}, {"confidence", 1.5}}), FormatError);
  EXPECT_THROW(verdict_from_json(json{{"verdict", "maybe"}}), FormatError);
}

TEST(CheckMr, ToxicPassesCleanReportsFailureExcluded) {
  const auto m = image_case("c1", "are stupid", "monkeys");
  EXPECT_TRUE(std::holds_alternative<Pass>(check_mr(m, Toxic{}, "mock")));
  const auto r = check_mr(m, NonToxic{}, "mock", "2026-01-01T00:00:00Z");
  ASSERT_TRUE(std::holds_alternative<ErrorReport>(r));
  const auto& e = std::get<ErrorReport>(r);
  EXPECT_EQ(e.case_id, "c1");
  EXPECT_EQ(e.seed_sentence, "monkeys are stupid");
  EXPECT_EQ(e.timestamp, "2026-01-01T00:00:00Z");
  EXPECT_EQ(to_json(e).at("combo"), "Image-VT");
  EXPECT_TRUE(std::holds_alternative<Excluded>(check_mr(m, ProviderFailure{"503"}, "mock")));
}

CaseOutcome outcome(std::string id, ModerationVerdict v) {
  return {std::move(id), "s", ToxicityCategory::Hate, Language::En, ArtifactKind::Image, Combo::ImageVT,
          std::move(v), "mock"};
}

TEST(Efr, ThreeOfFourWithFailuresExcluded) {
  const std::vector<CaseOutcome> log = {outcome("1", NonToxic{}), outcome("2", NonToxic{}),
                                        outcome("3", NonToxic{}), outcome("4", Toxic{}),
                                        outcome("5", ProviderFailure{"x"}), outcome("6", ProviderFailure{"y"})};
  const auto s = compute_efr(log);
  ASSERT_EQ(s.rows.size(), 1u);
  EXPECT_EQ(s.rows[0].generated, 4u);
  EXPECT_EQ(s.rows[0].misclassified, 3u);
  EXPECT_EQ(s.rows[0].provider_errors, 2u);
  EXPECT_EQ(s.rows[0].efr_percent(), "75.00");
  EXPECT_EQ(s.rows[0].efr_rational(), "3/4");
  EXPECT_NE(efr_csv(s).find("hate,en,image,Image-VT,4,3,75.00%"), std::string::npos);
}

TEST(Efr, GroupsWithoutDefiniteVerdictsAreOmitted) {
  const std::vector<CaseOutcome> log = {outcome("1", ProviderFailure{"x"})};
  const auto s = compute_efr(log);
  EXPECT_TRUE(s.rows.empty());
  EXPECT_EQ(s.provider_errors, 1u);
}

TEST(Efr, PercentRounding) {
  EXPECT_EQ(percent_2dp(1, 3), "33.33");
  EXPECT_EQ(percent_2dp(2, 3), "66.67");
  EXPECT_EQ(percent_2dp(1, 8), "12.50");
  EXPECT_EQ(percent_2dp(0, 5), "0.00");
  EXPECT_EQ(percent_2dp(5, 5), "100.00");
  EXPECT_EQ(percent_2dp(0, 0), "n/a");
}

TEST(Outcome, JsonRoundTrip) {
  const auto o = outcome("x", Toxic{{"text:stupid"}, 1.0});
  const auto back = outcome_from_json(json::parse(to_json(o).dump()));
  EXPECT_EQ(back.case_id, "x");
  EXPECT_EQ(back.verdict, o.verdict);
  EXPECT_EQ(to_json(outcome("y", NonToxic{})).at("outcome"), "error_report");
  EXPECT_THROW(outcome_from_json(json{{"case_id", "x"}}), FormatError);
}

TEST(Collection, KeepsOnlyToxicSeeds) {
  MockModerator mod(banning({"stupid"}));
  std::vector<SeedRecord> seeds(2);
  seeds[0].seed_id = "a";
  seeds[0].seed.text = "monkeys are stupid";
  seeds[1].seed_id = "b";
  seeds[1].seed.text = "monkeys are lovely";
  const auto r = collect_toxic_seeds(seeds, mod);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].seed_id, "a");
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].verdict, ModerationVerdict{NonToxic{}});
}

TEST(Manifest, JsonRoundTrip) {
  auto m = image_case("c1", "are stupid", "monkeys");
  m.rng_seed = 18446744073709551615ull;
  const auto text = serialize_manifest(m);
  EXPECT_EQ(parse_manifest(text), m);
  EXPECT_EQ(serialize_manifest(parse_manifest(text)), text);
  PlanSummary plan;
  plan.segments.push_back({3.0, "A", "image", "monkey", "fixture:monkey.png", "silence", "", ""});
  plan.segments.push_back({1.5, "B", "blank", "", "", "speech", "are stupid", "segment_1.wav"});
  plan.encoder_exit = 1;
  plan.encoding = "failed";
  m.placement.reset();
  m.plan = plan;
  m.combo = Combo::VideoVA;
  m.artifact_kind = ArtifactKind::Video;
  EXPECT_EQ(parse_manifest(serialize_manifest(m)), m);
  EXPECT_THROW(parse_manifest("{}"), FormatError);
  EXPECT_THROW(parse_manifest("not json"), FormatError);
}

TEST(Combo, NamesParseCaseInsensitively) {
  for (Combo c : kCampaignCombos) EXPECT_EQ(parse_combo(to_string(c)), c);
  EXPECT_EQ(parse_combo("video-vat"), Combo::VideoVAT);
  EXPECT_THROW(parse_combo("Video-XY"), ConfigError);
}

TEST(RateLimiter, SpacesCalls) {
  RateLimiter unlimited;
  for (int i = 0; i < 1000; ++i) EXPECT_TRUE(unlimited.try_acquire());
  RateLimiter limited(50.0);
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 6; ++i) limited.acquire();
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  // One burst token, then five more at 20 ms each.
  EXPECT_GE(elapsed, 0.09);
  EXPECT_FALSE(limited.try_acquire());
}

TEST(Http, Base64AndEndpoints) {
  EXPECT_EQ(detail::base64_encode("hello"), "aGVsbG8=");
  EXPECT_EQ(detail::base64_decode("aGVsbG8="), "hello");
  const std::string bytes("\0\xff\x10zz", 5);
  EXPECT_EQ(detail::base64_decode(detail::base64_encode(bytes)), bytes);
  const auto e = HttpEndpoint::parse("http://127.0.0.1:8089/api/");
  EXPECT_EQ(e.origin, "http://127.0.0.1:8089");
  EXPECT_EQ(e.path("/moderate/text"), "/api/moderate/text");
  EXPECT_THROW(HttpEndpoint::parse("localhost:80"), ConfigError);
}

TEST(MockServer, TextAndCaseModerationOverHttp) {
  MockModerationServer server(banning({"stupid"}));
  server.start();
  HttpModerationProvider::Options o;
  o.send_manifest = true;
  HttpModerationProvider client(server.url(), o);
  EXPECT_TRUE(is_toxic(client.moderate_text("monkeys are stupid")));
  EXPECT_EQ(client.moderate_text("monkeys are fine"), ModerationVerdict{NonToxic{}});

  const auto m = image_case("c1", "are stupid", "monkeys");
  testing::TempDir dir;
  write_file(dir / "artifact.png", "png bytes");
  // The mock judges image requests from the manifest header.
  EXPECT_TRUE(is_toxic(client.moderate_case(m, dir.path())));
  HttpModerationProvider::Options no_header;
  HttpModerationProvider blind(server.url(), no_header);
  EXPECT_FALSE(is_toxic(blind.moderate_case(m, dir.path())));
  // A missing artifact is a failed call, not a verdict.
  EXPECT_TRUE(is_failure(client.moderate_case(m, dir / "missing")));
  EXPECT_EQ(server.requests(), 4u);
}

TEST(MockServer, PolicyEndpointTogglesBlindSpot) {
  MockModerationServer server(banning({"stupid"}));
  server.start();
  httplib::Client raw(server.url());
  auto put = raw.Put("/policy", R"({"reads_plain_text": false})", "application/json");
  ASSERT_TRUE(put);
  EXPECT_EQ(put->status, 200);
  auto got = raw.Get("/policy");
  ASSERT_TRUE(got);
  EXPECT_EQ(json::parse(got->body).at("reads_plain_text"), false);
  EXPECT_EQ(json::parse(got->body).at("banned"), json::array({"stupid"}));
  HttpModerationProvider client(server.url(), {});
  EXPECT_FALSE(is_toxic(client.moderate_text("stupid")));
  auto bad = raw.Put("/policy", "{nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
}

TEST(HttpModeration, LabelMappingAndFailures) {
  httplib::Server fake;
  fake.Post("/moderate/text", [](const httplib::Request& req, httplib::Response& res) {
    if (req.body.find("boom") != std::string::npos) {
      res.status = 503;
      return;
    }
    if (req.body.find("garbled") != std::string::npos) {
      res.set_content("<html>", "text/html");
      return;
    }
    res.set_content(R"({"verdict": "clean", "labels": ["hate_speech"], "confidence": 0.9})", "application/json");
  });
  const int port = fake.bind_to_any_port("127.0.0.1");
  std::thread t([&] { fake.listen_after_bind(); });
  fake.wait_until_ready();
  const std::string url = "http://127.0.0.1:" + std::to_string(port);

  HttpModerationProvider::Options plain;
  plain.http.retries = 1;
  HttpModerationProvider by_verdict(url, plain);
  EXPECT_FALSE(is_toxic(by_verdict.moderate_text("x")));
  auto mapped_opts = plain;
  mapped_opts.toxic_labels = {"hate_speech"};
  HttpModerationProvider by_label(url, mapped_opts);
  const auto v = by_label.moderate_text("x");
  ASSERT_TRUE(is_toxic(v));
  EXPECT_EQ(std::get<Toxic>(v).confidence, 0.9);
  EXPECT_TRUE(is_failure(by_verdict.moderate_text("boom")));
  EXPECT_TRUE(is_failure(by_verdict.moderate_text("garbled")));
  fake.stop();
  t.join();

  HttpModerationProvider::Options fast;
  fast.http.retries = 0;
  fast.http.timeout_seconds = 1;
  HttpModerationProvider unreachable("http://127.0.0.1:1", fast);
  EXPECT_TRUE(is_failure(unreachable.moderate_text("stupid")));
}

}  // namespace
}  // namespace mmtox
