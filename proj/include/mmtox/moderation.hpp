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
#include <cctype>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mmtox/core.hpp"
#include "mmtox/manifest.hpp"

namespace mmtox {

struct Toxic {
  std::vector<std::string> labels;
  std::optional<double> confidence;

  bool operator==(const Toxic&) const = default;
};

struct NonToxic {
  bool operator==(const NonToxic&) const = default;
};

/// A failed moderation call. Named apart from the ProviderError exception.
struct ProviderFailure {
  std::string reason;

  bool operator==(const ProviderFailure&) const = default;
};

using ModerationVerdict = std::variant<Toxic, NonToxic, ProviderFailure>;

inline bool is_toxic(const ModerationVerdict& v) { return std::holds_alternative<Toxic>(v); }
inline bool is_failure(const ModerationVerdict& v) { return std::holds_alternative<ProviderFailure>(v); }

inline json to_json(const ModerationVerdict& v) {
  if (const auto* t = std::get_if<Toxic>(&v)) {
    json j = {{"verdict", "toxic"}, {"labels", t->labels}};
    j["confidence"] = t->confidence ? json(*t->confidence) : json(nullptr);
    return j;
  }
  if (const auto* f = std::get_if<ProviderFailure>(&v)) return {{"verdict", "error"}, {"reason", f->reason}};
  return {{"verdict", "clean"}};
}

inline ModerationVerdict verdict_from_json(const json& j) {
  const auto v = j.at("verdict").get<std::string>();
  if (v == "toxic") {
    Toxic t;
    if (j.contains("labels")) t.labels = j.at("labels").get<std::vector<std::string>>();
    if (j.contains("confidence") && !j.at("confidence").is_null()) {
      t.confidence = j.at("confidence").get<double>();
      if (*t.confidence < 0.0 || *t.confidence > 1.0) throw FormatError("confidence outside [0, 1]");
    }
    return t;
  }
  if (v == "clean") return NonToxic{};
  if (v == "error") return ProviderFailure{j.value("reason", std::string("unknown"))};
  throw FormatError("unknown verdict: " + v);
}

inline std::string verdict_name(const ModerationVerdict& v) {
  if (is_toxic(v)) return "toxic";
  if (is_failure(v)) return "error";
  return "clean";
}

// ---------------------------------------------------------------------------
// Provider interface
// ---------------------------------------------------------------------------

class ModerationProvider {
 public:
  virtual ~ModerationProvider() = default;
  virtual std::string id() const = 0;
  virtual ModerationVerdict moderate_text(std::string_view text) const = 0;
  /// case_dir holds the artifact named by the manifest.
  virtual ModerationVerdict moderate_case(const TestCaseManifest& manifest,
                                          const std::filesystem::path& case_dir) const = 0;
};

// ---------------------------------------------------------------------------
// Mock moderator
// ---------------------------------------------------------------------------

/// Banned words plus the perception channels the mock can read.
struct MockPolicy {
  std::vector<std::string> banned;
  bool reads_plain_text = true;
  bool reads_image_text = true;
  bool reads_audio_transcript = true;
  bool reads_image_salient_label = true;

  bool operator==(const MockPolicy&) const = default;

  static MockPolicy from_file(const std::filesystem::path& banned_list) {
    MockPolicy p;
    for (auto& line : read_lines(banned_list)) {
      auto w = trim(line);
      if (!w.empty() && w.front() != '#') p.banned.push_back(std::move(w));
    }
    return p;
  }
  static MockPolicy bundled(const std::filesystem::path& data_dir = default_data_dir()) {
    return from_file(data_dir / "mock" / "banned.txt");
  }
};

inline json to_json(const MockPolicy& p) {
  return {{"banned", p.banned},
          {"reads_plain_text", p.reads_plain_text},
          {"reads_image_text", p.reads_image_text},
          {"reads_audio_transcript", p.reads_audio_transcript},
          {"reads_image_salient_label", p.reads_image_salient_label}};
}

/// Missing fields keep the values of base.
inline MockPolicy policy_from_json(const json& j, MockPolicy base = {}) {
  try {
    if (j.contains("banned")) base.banned = j.at("banned").get<std::vector<std::string>>();
    base.reads_plain_text = j.value("reads_plain_text", base.reads_plain_text);
    base.reads_image_text = j.value("reads_image_text", base.reads_image_text);
    base.reads_audio_transcript = j.value("reads_audio_transcript", base.reads_audio_transcript);
    base.reads_image_salient_label = j.value("reads_image_salient_label", base.reads_image_salient_label);
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad policy: ") + e.what());
  }
  return base;
}

/// Everything a moderator could perceive in a piece of content, per channel.
struct ModerationContent {
  std::vector<std::string> plain_text;
  std::vector<std::string> image_text;  // text drawn in images or frames
  std::vector<std::string> audio_transcripts;
  std::vector<std::string> image_labels;  // salient objects of images
};

inline ModerationContent plain_text_content(std::string text) {
  ModerationContent c;
  c.plain_text.push_back(std::move(text));
  return c;
}

/// What a case exposes to the mock, read from its manifest. Rendered image
/// text stands in for OCR output.
inline ModerationContent content_of(const TestCaseManifest& m) {
  ModerationContent c;
  if (m.artifact_kind == ArtifactKind::Text) {
    c.plain_text.push_back(m.seed_sentence);
    return c;
  }
  if (m.placement) c.image_text.push_back(m.placement->text);
  if (m.plan) {
    for (const auto& s : m.plan->segments) {
      if (s.visual == "text") c.image_text.push_back(s.visual_text);
      if (s.visual == "image") c.image_labels.push_back(s.visual_text);
      if (s.audio == "speech") c.audio_transcripts.push_back(s.transcript);
    }
  } else {
    for (const auto& a : m.assets)
      if (a.modality == "vision") c.image_labels.push_back(a.content);
  }
  return c;
}

namespace detail {

inline bool is_word_byte(unsigned char c) { return c < 0x80 && (std::isalnum(c) || c == '_'); }

/// ASCII words match case-insensitively on word boundaries; anything with
/// non-ASCII bytes matches as a substring (no segmentation for CJK).
inline bool contains_banned(std::string_view haystack, std::string_view word) {
  if (word.empty()) return false;
  if (!is_ascii(word)) return haystack.find(word) != std::string_view::npos;
  const auto h = ascii_lower(haystack);
  const auto w = ascii_lower(word);
  for (std::size_t pos = h.find(w); pos != std::string::npos; pos = h.find(w, pos + 1)) {
    const bool left = pos == 0 || !is_word_byte(static_cast<unsigned char>(h[pos - 1]));
    const std::size_t end = pos + w.size();
    const bool right = end >= h.size() || !is_word_byte(static_cast<unsigned char>(h[end]));
    if (left && right) return true;
  }
  return false;
}

}  // namespace detail

/// Toxic iff some channel the policy can read contains a banned word. Labels
/// are "<channel>:<word>", sorted.
inline ModerationVerdict mock_moderate(const ModerationContent& content, const MockPolicy& policy) {
  std::set<std::string> hits;
  auto scan = [&](bool enabled, const std::vector<std::string>& texts, const char* channel) {
    if (!enabled) return;
    for (const auto& t : texts)
      for (const auto& w : policy.banned)
        if (detail::contains_banned(t, w)) hits.insert(std::string(channel) + ":" + w);
  };
  scan(policy.reads_plain_text, content.plain_text, "text");
  scan(policy.reads_image_text, content.image_text, "image_text");
  scan(policy.reads_audio_transcript, content.audio_transcripts, "audio");
  scan(policy.reads_image_salient_label, content.image_labels, "image_label");
  if (hits.empty()) return NonToxic{};
  return Toxic{{hits.begin(), hits.end()}, 1.0};
}

inline ModerationVerdict mock_moderate(std::string_view text, const MockPolicy& policy) {
  return mock_moderate(plain_text_content(std::string(text)), policy);
}

/// In-process mock. The policy may be swapped while calls are in flight.
class MockModerator final : public ModerationProvider {
 public:
  explicit MockModerator(MockPolicy policy) : policy_(std::make_shared<const MockPolicy>(std::move(policy))) {}

  std::string id() const override { return "mock"; }

  ModerationVerdict moderate_text(std::string_view text) const override { return mock_moderate(text, *policy()); }

  ModerationVerdict moderate_case(const TestCaseManifest& manifest,
                                  const std::filesystem::path&) const override {
    return mock_moderate(content_of(manifest), *policy());
  }

  std::shared_ptr<const MockPolicy> policy() const {
    std::shared_lock lock(mu_);
    return policy_;
  }
  void set_policy(MockPolicy p) {
    auto next = std::make_shared<const MockPolicy>(std::move(p));
    std::unique_lock lock(mu_);
    policy_ = std::move(next);
  }

 private:
  mutable std::shared_mutex mu_;
  std::shared_ptr<const MockPolicy> policy_;
};

}  // namespace mmtox
