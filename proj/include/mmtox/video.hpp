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

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmtox/core.hpp"
#include "mmtox/font.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/raster.hpp"
#include "mmtox/wav.hpp"

namespace mmtox {

enum class VideoCombo { VT, VA, AT, VAT };

inline std::string to_string(VideoCombo c) {
  switch (c) {
    case VideoCombo::VT: return "VT";
    case VideoCombo::VA: return "VA";
    case VideoCombo::AT: return "AT";
    case VideoCombo::VAT: return "VAT";
  }
  return "VT";
}

/// What a segment carries from the seed sentence.
enum class Material { A, B, Middle, Whole };

inline std::string to_string(Material m) {
  switch (m) {
    case Material::A: return "A";
    case Material::B: return "B";
    case Material::Middle: return "middle";
    case Material::Whole: return "whole";
  }
  return "A";
}

/// Horizontal region of the frame that holds the content.
enum class ScreenRegion { Full, Left, Right };

inline std::string to_string(ScreenRegion r) {
  switch (r) {
    case ScreenRegion::Full: return "full";
    case ScreenRegion::Left: return "left";
    case ScreenRegion::Right: return "right";
  }
  return "full";
}

struct ImageRef {
  std::filesystem::path path;
  std::string label;
  std::string provenance;
};
struct TextCard {
  std::string text;
};
struct Blank {};
using Visual = std::variant<ImageRef, TextCard, Blank>;

struct AudioRef {
  std::filesystem::path path;
  double duration = 0.0;
  std::string transcript;
  bool resynthesize = false;  // transcript differs from the file's speech
};
struct Silence {};
using AudioTrack = std::variant<AudioRef, Silence>;

struct Segment {
  double duration = 0.0;
  Visual visual = Blank{};
  AudioTrack audio = Silence{};
  Material material = Material::A;
};

struct VideoTimings {
  double visual_seconds = 3.0;
  double middle_seconds = 1.0;
  int fps = 10;
  int width = 480;
  int height = 360;
};

struct VideoPlan {
  std::vector<Segment> segments;
  std::optional<VideoCombo> combo;  // empty for single-modality plans
  ScreenRegion region = ScreenRegion::Full;

  double total_duration() const {
    double t = 0;
    for (const auto& s : segments) t += s.duration;
    return t;
  }
  /// Index of the first segment carrying m, or -1.
  int index_of(Material m) const {
    for (std::size_t i = 0; i < segments.size(); ++i)
      if (segments[i].material == m) return static_cast<int>(i);
    return -1;
  }
};

namespace detail {

inline std::string join_words(std::string_view a, std::string_view b) {
  if (a.empty()) return std::string(b);
  if (b.empty()) return std::string(a);
  // The advertisement connective ":" binds to the preceding word.
  if (b.front() == ':') return std::string(a) + std::string(b);
  return std::string(a) + " " + std::string(b);
}

inline Segment visual_segment(const ModalityAsset& asset, Material m, double seconds) {
  Segment s;
  s.material = m;
  s.duration = seconds;
  if (const auto* img = std::get_if<ImageAsset>(&asset)) {
    s.visual = ImageRef{img->path, img->label, img->provenance};
  } else {
    s.visual = TextCard{std::get<TextAsset>(asset).content};
  }
  return s;
}

inline Segment audio_segment(const AudioAsset& audio, Material m, std::string transcript) {
  Segment s;
  s.material = m;
  s.duration = audio.duration;
  const bool changed = transcript != audio.transcript;
  s.audio = AudioRef{audio.path, audio.duration, std::move(transcript), changed};
  s.visual = Blank{};
  return s;
}

}  // namespace detail

/// Segment list for combining asset_a and asset_b under combo. Audio-bearing
/// segments whose spoken text gains the middle word are flagged for
/// re-synthesis (see materialize_audio); their duration is updated then.
inline VideoPlan plan_video(const ModalityAsset& asset_a, const ModalityAsset& asset_b, std::string_view middle,
                            VideoCombo combo, Rng& rng, const VideoTimings& timings = {}) {
  const Modality ma = modality_of(asset_a);
  const Modality mb = modality_of(asset_b);
  auto pair_is = [&](Modality x, Modality y) { return (ma == x && mb == y) || (ma == y && mb == x); };
  auto mismatch = [&]() {
    return ComboMismatchError("combo " + to_string(combo) + " cannot use assets " + to_string(ma) + " + " +
                              to_string(mb));
  };
  // Advertisement middle ":" attaches after A; the others sit between words.
  const bool middle_after_a = !middle.empty() && middle.front() == ':';
  auto with_middle_a = [&](const std::string& a) {
    return middle_after_a ? a + std::string(middle) : detail::join_words(a, middle);
  };
  auto with_middle_b = [&](const std::string& b) { return detail::join_words(middle, b); };
  auto text_of = [](const ModalityAsset& x) -> std::string {
    if (const auto* t = std::get_if<TextAsset>(&x)) return t->content;
    if (const auto* a = std::get_if<AudioAsset>(&x)) return a->transcript;
    return {};
  };

  VideoPlan plan;
  plan.combo = combo;
  switch (combo) {
    case VideoCombo::VT: {
      if (!pair_is(Modality::Vision, Modality::Text)) throw mismatch();
      auto a = asset_a;
      auto b = asset_b;
      if (auto* t = std::get_if<TextAsset>(&a)) t->content = with_middle_a(t->content);
      if (auto* t = std::get_if<TextAsset>(&b)) t->content = with_middle_b(t->content);
      plan.segments.push_back(detail::visual_segment(a, Material::A, timings.visual_seconds));
      plan.segments.push_back(detail::visual_segment(b, Material::B, timings.visual_seconds));
      break;
    }
    case VideoCombo::VA:
    case VideoCombo::VAT: {
      if (!pair_is(Modality::Vision, Modality::Audio)) throw mismatch();
      const bool vat = combo == VideoCombo::VAT;
      auto seg_for = [&](const ModalityAsset& x, Material m) {
        if (const auto* au = std::get_if<AudioAsset>(&x)) {
          std::string spoken = au->transcript;
          if (!vat) spoken = m == Material::A ? with_middle_a(spoken) : with_middle_b(spoken);
          return detail::audio_segment(*au, m, std::move(spoken));
        }
        return detail::visual_segment(x, m, timings.visual_seconds);
      };
      plan.segments.push_back(seg_for(asset_a, Material::A));
      if (vat) {
        Segment mid;
        mid.material = Material::Middle;
        mid.duration = timings.middle_seconds;
        mid.visual = TextCard{trim(middle)};
        plan.segments.push_back(std::move(mid));
      }
      plan.segments.push_back(seg_for(asset_b, Material::B));
      break;
    }
    case VideoCombo::AT: {
      if (!pair_is(Modality::Audio, Modality::Text)) throw mismatch();
      const bool middle_on_text = rng.coin();
      auto seg_for = [&](const ModalityAsset& x, Material m) {
        const bool is_text = std::holds_alternative<TextAsset>(x);
        std::string content = text_of(x);
        if (is_text == middle_on_text)
          content = m == Material::A ? with_middle_a(content) : with_middle_b(content);
        if (is_text) {
          Segment s;
          s.material = m;
          s.duration = timings.visual_seconds;
          s.visual = TextCard{std::move(content)};
          return s;
        }
        return detail::audio_segment(std::get<AudioAsset>(x), m, std::move(content));
      };
      plan.segments.push_back(seg_for(asset_a, Material::A));
      plan.segments.push_back(seg_for(asset_b, Material::B));
      break;
    }
  }
  return plan;
}

/// One-segment plan carrying the whole seed sentence in one modality: a text
/// card for a text asset, a blank screen with speech for an audio asset.
inline VideoPlan plan_single(const ModalityAsset& whole, const VideoTimings& timings = {}) {
  VideoPlan plan;
  if (const auto* au = std::get_if<AudioAsset>(&whole)) {
    plan.segments.push_back(detail::audio_segment(*au, Material::Whole, au->transcript));
  } else if (const auto* t = std::get_if<TextAsset>(&whole)) {
    Segment s;
    s.material = Material::Whole;
    s.duration = timings.visual_seconds;
    s.visual = TextCard{t->content};
    plan.segments.push_back(std::move(s));
  } else {
    plan.segments.push_back(detail::visual_segment(whole, Material::Whole, timings.visual_seconds));
  }
  return plan;
}

/// Structural checks: at least two segments (single-modality plans have one
/// Whole segment), positive duration, A before B, middle card between them.
inline bool plan_valid(const VideoPlan& plan) {
  if (plan.segments.empty() || !(plan.total_duration() > 0)) return false;
  for (const auto& s : plan.segments)
    if (!(s.duration > 0)) return false;
  if (!plan.combo) return plan.segments.size() == 1 && plan.segments[0].material == Material::Whole;
  if (plan.segments.size() < 2) return false;
  const int a = plan.index_of(Material::A);
  const int b = plan.index_of(Material::B);
  if (a < 0 || b < 0 || a >= b) return false;
  if (*plan.combo == VideoCombo::VAT) {
    const int m = plan.index_of(Material::Middle);
    return a < m && m < b;
  }
  return true;
}

/// Synthesizes speech for flagged segments into dir, updating paths and
/// durations.
inline void materialize_audio(VideoPlan& plan, const TtsProvider& tts, Language language,
                              const std::filesystem::path& dir) {
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    auto* ref = std::get_if<AudioRef>(&plan.segments[i].audio);
    if (!ref || !ref->resynthesize) continue;
    auto asset = to_audio(ref->transcript, tts, language, dir / ("segment_" + std::to_string(i) + ".wav"));
    ref->path = asset.path;
    ref->duration = asset.duration;
    ref->resynthesize = false;
    plan.segments[i].duration = asset.duration;
  }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

struct EncoderConfig {
  std::string executable;  // empty: frames and WAV only
  std::string command = "{encoder} -framerate {fps} -i {frames}/%06d.png -i {track} {out}";
  std::string output_name = "video.mp4";
};

struct RenderedVideo {
  std::filesystem::path frames_dir;
  std::filesystem::path audio_track;
  std::optional<std::filesystem::path> encoded;
  std::size_t frame_count = 0;
  std::string encoding = "unencoded";  // unencoded | encoded | failed
  std::optional<int> encoder_exit;
};

inline std::size_t frame_count(const VideoPlan& plan, int fps) {
  return static_cast<std::size_t>(std::llround(plan.total_duration() * fps));
}

/// Segment shown at time t, by cumulative duration.
inline std::size_t segment_at(const VideoPlan& plan, double t) {
  double end = 0;
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    end += plan.segments[i].duration;
    if (t < end) return i;
  }
  return plan.segments.empty() ? 0 : plan.segments.size() - 1;
}

namespace detail {

inline BoundingBox content_region(const VideoTimings& t, ScreenRegion r) {
  switch (r) {
    case ScreenRegion::Full: return {0, 0, t.width, t.height};
    case ScreenRegion::Left: return {0, 0, t.width / 2, t.height};
    case ScreenRegion::Right: return {t.width / 2, 0, t.width, t.height};
  }
  return {0, 0, t.width, t.height};
}

inline void draw_card(RgbImage& frame, const BoundingBox& region, std::string_view text, const BitmapFont& font) {
  if (text.empty()) return;
  const auto cps = utf8_decode(text);
  const int margin = std::max(2, region.width() / 20);
  const int max_w = region.width() - 2 * margin;
  const int max_h = region.height() - 2 * margin;
  TextLayout layout;
  for (int size = std::min(32, std::max(1, max_h / 2)); size >= 1; --size) {
    layout = layout_text(cps, size, max_w, font);
    if (layout.extent.width <= max_w && layout.extent.height <= max_h) break;
  }
  const int x = region.x1 + (region.width() - layout.extent.width) / 2;
  const int y = region.y1 + (region.height() - layout.extent.height) / 2;
  draw_text(frame, font, layout, x, y, kWhite, kBlack, std::max(1, layout.font_size / 12));
}

/// Aspect-preserving fit of src into region.
inline BoundingBox fit_rect(int sw, int sh, const BoundingBox& region) {
  const double scale = std::min(static_cast<double>(region.width()) / sw, static_cast<double>(region.height()) / sh);
  const int w = std::max(1, static_cast<int>(std::floor(sw * scale)));
  const int h = std::max(1, static_cast<int>(std::floor(sh * scale)));
  const int x = region.x1 + (region.width() - w) / 2;
  const int y = region.y1 + (region.height() - h) / 2;
  return {x, y, x + w, y + h};
}

inline std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
    s.replace(pos, from.size(), to);
  return s;
}

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

}  // namespace detail

/// Renders one image per segment (black background, content in the plan's
/// region), writes frames as %06d.png at fps, concatenates the audio into a
/// PCM16 track padded with silence, and runs the encoder when configured.
/// Throws EncoderError on a non-zero encoder exit; frames stay on disk.
inline RenderedVideo render_video(const VideoPlan& plan, const std::filesystem::path& out_dir,
                                  const BitmapFont& font, const VideoTimings& timings = {},
                                  const EncoderConfig& encoder = {}) {
  if (!plan_valid(plan)) throw RenderError("invalid video plan");
  require(timings.fps > 0 && timings.width >= 2 && timings.height >= 2, "render_video: bad timings");
  namespace fs = std::filesystem;
  RenderedVideo out;
  out.frames_dir = out_dir / "frames";
  fs::create_directories(out.frames_dir);

  const auto region = detail::content_region(timings, plan.region);
  std::vector<std::string> segment_png(plan.segments.size());
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    RgbImage frame(timings.width, timings.height, kBlack);
    const auto& visual = plan.segments[i].visual;
    if (const auto* img = std::get_if<ImageRef>(&visual)) {
      RgbImage src;
      try {
        src = load_png(img->path);
      } catch (const Error& e) {
        throw RenderError("cannot load " + img->path.string() + ": " + e.what());
      }
      frame.blit_scaled(src, detail::fit_rect(src.width(), src.height(), region));
    } else if (const auto* card = std::get_if<TextCard>(&visual)) {
      detail::draw_card(frame, region, card->text, font);
    }
    segment_png[i] = png_encode(frame);
  }

  out.frame_count = frame_count(plan, timings.fps);
  std::map<std::size_t, fs::path> first_frame;  // segment -> first file written
  for (std::size_t f = 0; f < out.frame_count; ++f) {
    const double t = (static_cast<double>(f) + 0.5) / timings.fps;
    const auto seg = segment_at(plan, t);
    char name[16];
    std::snprintf(name, sizeof name, "%06zu.png", f);
    const auto path = out.frames_dir / name;
    fs::remove(path);
    std::error_code ec;
    if (auto it = first_frame.find(seg); it != first_frame.end()) fs::create_hard_link(it->second, path, ec);
    if (first_frame.count(seg) == 0 || ec) {
      write_file(path, segment_png[seg]);
      first_frame.emplace(seg, path);
    }
  }

  PcmAudio track;
  for (const auto& s : plan.segments) {
    const auto start = track.samples.size();
    if (const auto* a = std::get_if<AudioRef>(&s.audio)) {
      auto pcm = wav_decode(read_file(a->path));
      if (pcm.sample_rate != track.sample_rate)
        throw RenderError("audio " + a->path.string() + " is not " + std::to_string(track.sample_rate) + " Hz");
      track.samples.insert(track.samples.end(), pcm.samples.begin(), pcm.samples.end());
    }
    const auto want = start + static_cast<std::size_t>(std::llround(s.duration * track.sample_rate));
    if (track.samples.size() < want) track.samples.resize(want, 0);
  }
  out.audio_track = out_dir / "track.wav";
  write_file(out.audio_track, wav_encode(track));

  if (encoder.executable.empty()) return out;
  const auto target = out_dir / encoder.output_name;
  std::string cmd = encoder.command;
  cmd = detail::replace_all(cmd, "{encoder}", detail::shell_quote(encoder.executable));
  cmd = detail::replace_all(cmd, "{fps}", std::to_string(timings.fps));
  cmd = detail::replace_all(cmd, "{frames}", detail::shell_quote(out.frames_dir.string()));
  cmd = detail::replace_all(cmd, "{track}", detail::shell_quote(out.audio_track.string()));
  cmd = detail::replace_all(cmd, "{out}", detail::shell_quote(target.string()));
  cmd += " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  const int status = raw == -1 ? -1 : (WIFEXITED(raw) ? WEXITSTATUS(raw) : 128 + WTERMSIG(raw));
  out.encoder_exit = status;
  if (status != 0) {
    out.encoding = "failed";
    throw EncoderError("encoder exited with status " + std::to_string(status), status);
  }
  out.encoding = "encoded";
  out.encoded = target;
  return out;
}

}  // namespace mmtox
