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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "mmtox/core.hpp"
#include "mmtox/geometry.hpp"
#include "mmtox/layout.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/raster.hpp"
#include "mmtox/templates.hpp"
#include "mmtox/video.hpp"

namespace mmtox {

using nlohmann::json;

enum class ArtifactKind { Text, Image, Video };

inline std::string to_string(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Text: return "text";
    case ArtifactKind::Image: return "image";
    case ArtifactKind::Video: return "video";
  }
  return "text";
}

inline ArtifactKind parse_artifact_kind(std::string_view s) {
  if (s == "text") return ArtifactKind::Text;
  if (s == "image") return ArtifactKind::Image;
  if (s == "video") return ArtifactKind::Video;
  throw FormatError("unknown artifact kind: " + std::string(s));
}

/// Campaign combinations. VideoText and VideoAudio are the single-modality
/// videos of the modality-sensitivity experiment.
enum class Combo { ImageVT, VideoVT, VideoVA, VideoAT, VideoVAT, VideoText, VideoAudio };

inline constexpr std::array<Combo, 5> kCampaignCombos = {Combo::ImageVT, Combo::VideoVT, Combo::VideoVA,
                                                         Combo::VideoAT, Combo::VideoVAT};

inline std::string to_string(Combo c) {
  switch (c) {
    case Combo::ImageVT: return "Image-VT";
    case Combo::VideoVT: return "Video-VT";
    case Combo::VideoVA: return "Video-VA";
    case Combo::VideoAT: return "Video-AT";
    case Combo::VideoVAT: return "Video-VAT";
    case Combo::VideoText: return "Video-T";
    case Combo::VideoAudio: return "Video-A";
  }
  return "Image-VT";
}

inline Combo parse_combo(std::string_view s) {
  for (Combo c : {Combo::ImageVT, Combo::VideoVT, Combo::VideoVA, Combo::VideoAT, Combo::VideoVAT,
                  Combo::VideoText, Combo::VideoAudio})
    if (iequals(s, to_string(c))) return c;
  throw ConfigError("unknown combo: " + std::string(s));
}

inline ArtifactKind kind_of(Combo c) { return c == Combo::ImageVT ? ArtifactKind::Image : ArtifactKind::Video; }

inline std::optional<VideoCombo> video_combo_of(Combo c) {
  switch (c) {
    case Combo::VideoVT: return VideoCombo::VT;
    case Combo::VideoVA: return VideoCombo::VA;
    case Combo::VideoAT: return VideoCombo::AT;
    case Combo::VideoVAT: return VideoCombo::VAT;
    default: return std::nullopt;
  }
}

struct PlacementSummary {
  std::string cell;
  int row = 0;
  int col = 0;
  int font_size = 1;
  BoundingBox text_box;
  StrokeSpec stroke;
  std::vector<std::string> lines;
  std::string text;  // the inserted text as a single string
  Slot inserted = Slot::B;
  std::int64_t requested_area = 0;
  bool area_clamped = false;
  bool cell_clamped = false;

  bool operator==(const PlacementSummary&) const = default;
};

struct SegmentSummary {
  double duration = 0.0;
  std::string material;
  std::string visual;       // image | text | blank
  std::string visual_text;  // card text or image label
  std::string visual_source;
  std::string audio;  // speech | silence
  std::string transcript;
  std::string audio_file;

  bool operator==(const SegmentSummary&) const = default;
};

struct PlanSummary {
  std::vector<SegmentSummary> segments;
  std::string region = "full";
  int fps = 10;
  std::uint64_t frames = 0;
  double duration = 0.0;
  std::string frames_dir;
  std::string audio_track;
  std::string encoding = "unencoded";
  std::optional<int> encoder_exit;
  std::string encoded_file;

  bool operator==(const PlanSummary&) const = default;
};

/// Where a slot's asset came from.
struct AssetRecord {
  std::string slot;  // A | B | whole
  std::string modality;
  std::string content;  // text, transcript or recognized label
  std::string provenance;
  std::string file;  // case-relative, empty for text and fixtures
  std::optional<BoundingBox> salient;
  int width = 0;
  int height = 0;
  double duration = 0.0;

  bool operator==(const AssetRecord&) const = default;
};

struct TestCaseManifest {
  std::string case_id;
  std::string seed_id;
  std::string seed_sentence;
  std::string template_id;
  ToxicityCategory category = ToxicityCategory::Hate;
  Language language = Language::En;
  std::string keyword_a;
  std::string keyword_b;
  std::string middle;
  ModalityAssignment assignment;
  ArtifactKind artifact_kind = ArtifactKind::Image;
  Combo combo = Combo::ImageVT;
  std::uint64_t rng_seed = 0;
  std::string experiment;  // empty for campaign cases
  std::optional<PlacementSummary> placement;
  std::optional<PlanSummary> plan;
  std::vector<AssetRecord> assets;
  std::string artifact;  // case-relative path of the primary artifact

  bool operator==(const TestCaseManifest&) const = default;
};

// --- JSON --------------------------------------------------------------------

inline json box_json(const BoundingBox& b) { return json::array({b.x1, b.y1, b.x2, b.y2}); }
inline BoundingBox box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("bounding box must be [x1, y1, x2, y2]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}
inline json rgb_json(Rgb c) { return json::array({c.r, c.g, c.b}); }
inline Rgb rgb_from_json(const json& j) {
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(), j.at(2).get<std::uint8_t>()};
}

inline json to_json(const PlacementSummary& p) {
  return {{"cell", p.cell},
          {"row", p.row},
          {"col", p.col},
          {"font_size", p.font_size},
          {"text_box", box_json(p.text_box)},
          {"stroke", {{"fill", rgb_json(p.stroke.fill)}, {"stroke", rgb_json(p.stroke.stroke)}, {"width", p.stroke.width}}},
          {"lines", p.lines},
          {"text", p.text},
          {"inserted_slot", to_string(p.inserted)},
          {"requested_area", p.requested_area},
          {"area_clamped", p.area_clamped},
          {"cell_clamped", p.cell_clamped}};
}

inline PlacementSummary placement_from_json(const json& j) {
  PlacementSummary p;
  p.cell = j.at("cell").get<std::string>();
  p.row = j.at("row").get<int>();
  p.col = j.at("col").get<int>();
  p.font_size = j.at("font_size").get<int>();
  p.text_box = box_from_json(j.at("text_box"));
  p.stroke.fill = rgb_from_json(j.at("stroke").at("fill"));
  p.stroke.stroke = rgb_from_json(j.at("stroke").at("stroke"));
  p.stroke.width = j.at("stroke").at("width").get<int>();
  p.lines = j.at("lines").get<std::vector<std::string>>();
  p.text = j.at("text").get<std::string>();
  p.inserted = j.at("inserted_slot").get<std::string>() == "A" ? Slot::A : Slot::B;
  p.requested_area = j.at("requested_area").get<std::int64_t>();
  p.area_clamped = j.at("area_clamped").get<bool>();
  p.cell_clamped = j.at("cell_clamped").get<bool>();
  return p;
}

inline json to_json(const SegmentSummary& s) {
  return {{"duration", s.duration}, {"material", s.material},   {"visual", s.visual},
          {"visual_text", s.visual_text}, {"visual_source", s.visual_source}, {"audio", s.audio},
          {"transcript", s.transcript}, {"audio_file", s.audio_file}};
}

inline SegmentSummary segment_from_json(const json& j) {
  SegmentSummary s;
  s.duration = j.at("duration").get<double>();
  s.material = j.at("material").get<std::string>();
  s.visual = j.at("visual").get<std::string>();
  s.visual_text = j.at("visual_text").get<std::string>();
  s.visual_source = j.at("visual_source").get<std::string>();
  s.audio = j.at("audio").get<std::string>();
  s.transcript = j.at("transcript").get<std::string>();
  s.audio_file = j.at("audio_file").get<std::string>();
  return s;
}

inline json to_json(const PlanSummary& p) {
  json segs = json::array();
  for (const auto& s : p.segments) segs.push_back(to_json(s));
  json j = {{"segments", segs},       {"region", p.region},           {"fps", p.fps},
            {"frames", p.frames},     {"duration", p.duration},       {"frames_dir", p.frames_dir},
            {"audio_track", p.audio_track}, {"encoding", p.encoding}, {"encoded_file", p.encoded_file}};
  j["encoder_exit"] = p.encoder_exit ? json(*p.encoder_exit) : json(nullptr);
  return j;
}

inline PlanSummary plan_from_json(const json& j) {
  PlanSummary p;
  for (const auto& s : j.at("segments")) p.segments.push_back(segment_from_json(s));
  p.region = j.at("region").get<std::string>();
  p.fps = j.at("fps").get<int>();
  p.frames = j.at("frames").get<std::uint64_t>();
  p.duration = j.at("duration").get<double>();
  p.frames_dir = j.at("frames_dir").get<std::string>();
  p.audio_track = j.at("audio_track").get<std::string>();
  p.encoding = j.at("encoding").get<std::string>();
  p.encoded_file = j.at("encoded_file").get<std::string>();
  if (!j.at("encoder_exit").is_null()) p.encoder_exit = j.at("encoder_exit").get<int>();
  return p;
}

inline json to_json(const AssetRecord& a) {
  json j = {{"slot", a.slot},       {"modality", a.modality}, {"content", a.content},
            {"provenance", a.provenance}, {"file", a.file},   {"width", a.width},
            {"height", a.height},   {"duration", a.duration}};
  j["salient"] = a.salient ? box_json(*a.salient) : json(nullptr);
  return j;
}

inline AssetRecord asset_from_json(const json& j) {
  AssetRecord a;
  a.slot = j.at("slot").get<std::string>();
  a.modality = j.at("modality").get<std::string>();
  a.content = j.at("content").get<std::string>();
  a.provenance = j.at("provenance").get<std::string>();
  a.file = j.at("file").get<std::string>();
  a.width = j.at("width").get<int>();
  a.height = j.at("height").get<int>();
  a.duration = j.at("duration").get<double>();
  if (!j.at("salient").is_null()) a.salient = box_from_json(j.at("salient"));
  return a;
}

inline json to_json(const TestCaseManifest& m) {
  json assets = json::array();
  for (const auto& a : m.assets) assets.push_back(to_json(a));
  json j = {{"case_id", m.case_id},
            {"seed_id", m.seed_id},
            {"seed_sentence", m.seed_sentence},
            {"template_id", m.template_id},
            {"category", to_string(m.category)},
            {"language", to_string(m.language)},
            {"keyword_a", m.keyword_a},
            {"keyword_b", m.keyword_b},
            {"middle", m.middle},
            {"assignment", {{"slot_a", to_string(m.assignment.slot_a)}, {"slot_b", to_string(m.assignment.slot_b)}}},
            {"artifact_kind", to_string(m.artifact_kind)},
            {"combo", to_string(m.combo)},
            {"rng_seed", m.rng_seed},
            {"experiment", m.experiment},
            {"assets", assets},
            {"artifact", m.artifact}};
  j["placement"] = m.placement ? to_json(*m.placement) : json(nullptr);
  j["plan"] = m.plan ? to_json(*m.plan) : json(nullptr);
  return j;
}

inline TestCaseManifest manifest_from_json(const json& j) {
  try {
    TestCaseManifest m;
    m.case_id = j.at("case_id").get<std::string>();
    m.seed_id = j.at("seed_id").get<std::string>();
    m.seed_sentence = j.at("seed_sentence").get<std::string>();
    m.template_id = j.at("template_id").get<std::string>();
    m.category = parse_category(j.at("category").get<std::string>());
    m.language = parse_language(j.at("language").get<std::string>());
    m.keyword_a = j.at("keyword_a").get<std::string>();
    m.keyword_b = j.at("keyword_b").get<std::string>();
    m.middle = j.at("middle").get<std::string>();
    m.assignment.slot_a = parse_modality(j.at("assignment").at("slot_a").get<std::string>());
    m.assignment.slot_b = parse_modality(j.at("assignment").at("slot_b").get<std::string>());
    m.artifact_kind = parse_artifact_kind(j.at("artifact_kind").get<std::string>());
    m.combo = parse_combo(j.at("combo").get<std::string>());
    m.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    m.experiment = j.at("experiment").get<std::string>();
    for (const auto& a : j.at("assets")) m.assets.push_back(asset_from_json(a));
    m.artifact = j.at("artifact").get<std::string>();
    if (!j.at("placement").is_null()) m.placement = placement_from_json(j.at("placement"));
    if (!j.at("plan").is_null()) m.plan = plan_from_json(j.at("plan"));
    return m;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("malformed manifest: ") + e.what());
  }
}

/// Sorted keys, two-space indent, UTF-8 unescaped, trailing newline.
inline std::string canonical_json(const json& j) { return j.dump(2) + "\n"; }

inline std::string serialize_manifest(const TestCaseManifest& m) { return canonical_json(to_json(m)); }

inline TestCaseManifest parse_manifest(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest is not JSON: ") + e.what());
  }
  return manifest_from_json(j);
}

inline PlacementSummary summarize(const Placement& p, Slot inserted, std::string text) {
  PlacementSummary s;
  s.cell = cell_name(p.cell);
  s.row = p.cell.row;
  s.col = p.cell.col;
  s.font_size = p.font_size;
  s.text_box = p.text_box;
  s.stroke = p.stroke;
  s.lines = p.lines;
  s.text = std::move(text);
  s.inserted = inserted;
  s.requested_area = p.requested_area;
  s.area_clamped = p.area_clamped;
  s.cell_clamped = p.cell_clamped;
  return s;
}

/// Plan summary with file paths made relative to base.
inline PlanSummary summarize(const VideoPlan& plan, const std::filesystem::path& base, int fps) {
  PlanSummary s;
  auto rel = [&](const std::filesystem::path& p) {
    return p.empty() ? std::string() : p.lexically_relative(base).generic_string();
  };
  for (const auto& seg : plan.segments) {
    SegmentSummary ss;
    ss.duration = seg.duration;
    ss.material = to_string(seg.material);
    if (const auto* img = std::get_if<ImageRef>(&seg.visual)) {
      ss.visual = "image";
      ss.visual_text = img->label;
      ss.visual_source = img->provenance;
    } else if (const auto* card = std::get_if<TextCard>(&seg.visual)) {
      ss.visual = "text";
      ss.visual_text = card->text;
    } else {
      ss.visual = "blank";
    }
    if (const auto* a = std::get_if<AudioRef>(&seg.audio)) {
      ss.audio = "speech";
      ss.transcript = a->transcript;
      ss.audio_file = rel(a->path);
    } else {
      ss.audio = "silence";
    }
    s.segments.push_back(std::move(ss));
  }
  s.region = to_string(plan.region);
  s.fps = fps;
  s.frames = frame_count(plan, fps);
  s.duration = plan.total_duration();
  return s;
}

}  // namespace mmtox
