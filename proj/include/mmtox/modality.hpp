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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "mmtox/core.hpp"
#include "mmtox/font.hpp"
#include "mmtox/geometry.hpp"
#include "mmtox/raster.hpp"
#include "mmtox/wav.hpp"

namespace mmtox {

inline constexpr std::size_t kDefaultImageCandidates = 5;
inline constexpr double kStubSecondsPerCharacter = 0.25;

enum class Modality { Vision, Text, Audio };

inline std::string to_string(Modality m) {
  switch (m) {
    case Modality::Vision: return "vision";
    case Modality::Text: return "text";
    case Modality::Audio: return "audio";
  }
  return "text";
}

inline Modality parse_modality(std::string_view s) {
  if (s == "vision") return Modality::Vision;
  if (s == "text") return Modality::Text;
  if (s == "audio") return Modality::Audio;
  throw FormatError("unknown modality: " + std::string(s));
}

struct TextAsset {
  std::string content;
};

struct ImageAsset {
  std::filesystem::path path;
  int width = 0;
  int height = 0;
  BoundingBox salient;
  std::string label;
  std::string provenance;
};

struct AudioAsset {
  std::filesystem::path path;
  double duration = 0.0;
  std::string transcript;
  std::string provenance;
};

using ModalityAsset = std::variant<TextAsset, ImageAsset, AudioAsset>;

inline Modality modality_of(const ModalityAsset& a) {
  if (std::holds_alternative<ImageAsset>(a)) return Modality::Vision;
  if (std::holds_alternative<AudioAsset>(a)) return Modality::Audio;
  return Modality::Text;
}

struct ModalityAssignment {
  Modality slot_a = Modality::Vision;
  Modality slot_b = Modality::Text;

  bool operator==(const ModalityAssignment&) const = default;
};

// ---------------------------------------------------------------------------
// Provider interfaces
// ---------------------------------------------------------------------------

/// A retrieved image available as a local file.
struct ImageCandidate {
  std::filesystem::path path;
  std::string source;
};

class ImageProvider {
 public:
  virtual ~ImageProvider() = default;
  /// Up to count candidates for the query. Throws ProviderError.
  virtual std::vector<ImageCandidate> search(std::string_view query, std::size_t count) const = 0;
};

struct Recognition {
  std::string label;
  BoundingBox box;
};

class RecognizerProvider {
 public:
  virtual ~RecognizerProvider() = default;
  /// Salient object of the image. Throws ProviderError.
  virtual Recognition recognize(const ImageCandidate& image) const = 0;
};

class TtsProvider {
 public:
  virtual ~TtsProvider() = default;
  /// Writes speech for text to out_wav. Throws ProviderError.
  virtual AudioAsset synthesize(std::string_view text, Language language,
                                const std::filesystem::path& out_wav) const = 0;
};

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

struct Rejected {
  std::string reason;
};

inline TextAsset to_text(std::string_view keyword) {
  require(!keyword.empty(), "to_text: empty keyword");
  return TextAsset{std::string(keyword)};
}

/// Searches candidates for keyword and accepts the first whose recognized
/// salient label equals the keyword (ASCII case-insensitive) and whose box
/// lies inside the image.
inline std::variant<ImageAsset, Rejected> to_image(std::string_view keyword, const ImageProvider& provider,
                                                   const RecognizerProvider& recognizer,
                                                   std::size_t candidates = kDefaultImageCandidates) {
  require(!keyword.empty(), "to_image: empty keyword");
  std::vector<ImageCandidate> found;
  try {
    found = provider.search(keyword, candidates);
  } catch (const ProviderError& e) {
    return Rejected{std::string("image search failed: ") + e.what()};
  }
  if (found.empty()) return Rejected{"no image candidates for '" + std::string(keyword) + "'"};
  if (found.size() > candidates) found.resize(candidates);
  std::string labels;
  for (const auto& c : found) {
    Recognition rec;
    RgbImage img;
    try {
      rec = recognizer.recognize(c);
      img = load_png(c.path);
    } catch (const Error&) {
      labels += (labels.empty() ? "" : ", ") + std::string("error");
      continue;
    }
    labels += (labels.empty() ? "" : ", ") + rec.label;
    if (!iequals(rec.label, keyword)) continue;
    if (!rec.box.within(img.width(), img.height())) continue;
    return ImageAsset{c.path, img.width(), img.height(), rec.box, rec.label, c.source};
  }
  return Rejected{"no candidate recognized as '" + std::string(keyword) + "' (saw: " + labels + ")"};
}

inline AudioAsset to_audio(std::string_view text, const TtsProvider& tts, Language language,
                           const std::filesystem::path& out_wav) {
  require(!text.empty(), "to_audio: empty text");
  auto asset = tts.synthesize(text, language, out_wav);
  if (!(asset.duration > 0.0)) throw ProviderError("TTS produced empty audio");
  asset.transcript = std::string(text);
  return asset;
}

// ---------------------------------------------------------------------------
// Offline stubs
// ---------------------------------------------------------------------------

/// Fixture-backed image search and recognition.
///
/// The fixture directory holds PNGs and an index.json mapping keyword to
/// {file, box: [x1, y1, x2, y2], label} (or a list of them). Keywords without
/// fixtures get one synthesized image: flat background, centred rectangle as
/// the salient object, labelled with the keyword. Synthesized images are a
/// pure function of (keyword, seed) and are cached under synth_dir with a
/// JSON sidecar that the recognizer reads back.
class StubImageLibrary final : public ImageProvider, public RecognizerProvider {
 public:
  struct Options {
    std::filesystem::path fixture_dir;
    std::filesystem::path synth_dir;
    std::uint64_t seed = 0;
    bool synthesize_unknown = true;
    std::shared_ptr<const BitmapFont> font;  // optional, draws the label
  };

  explicit StubImageLibrary(Options options) : options_(std::move(options)) {
    const auto index_path = options_.fixture_dir / "index.json";
    if (options_.fixture_dir.empty() || !std::filesystem::exists(index_path)) return;
    nlohmann::json index;
    try {
      index = nlohmann::json::parse(read_file(index_path));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("bad fixture index " + index_path.string() + ": " + e.what());
    }
    for (auto& [keyword, value] : index.items()) {
      auto add = [&](const nlohmann::json& e) {
        Entry entry;
        entry.path = options_.fixture_dir / e.at("file").get<std::string>();
        entry.file = e.at("file").get<std::string>();
        const auto& b = e.at("box");
        entry.rec.box = {b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(), b.at(3).get<int>()};
        entry.rec.label = e.value("label", keyword);
        by_keyword_[ascii_lower(keyword)].push_back(entry);
        by_path_[entry.path.lexically_normal().string()] = entry.rec;
      };
      if (value.is_array()) {
        for (const auto& e : value) add(e);
      } else {
        add(value);
      }
    }
  }

  std::vector<ImageCandidate> search(std::string_view query, std::size_t count) const override {
    std::vector<ImageCandidate> out;
    if (auto it = by_keyword_.find(ascii_lower(query)); it != by_keyword_.end()) {
      for (const auto& e : it->second) {
        if (out.size() >= count) break;
        out.push_back({e.path, "fixture:" + e.file});
      }
      return out;
    }
    if (!options_.synthesize_unknown || count == 0) return out;
    out.push_back(synthesize(query));
    return out;
  }

  Recognition recognize(const ImageCandidate& image) const override {
    if (auto it = by_path_.find(image.path.lexically_normal().string()); it != by_path_.end())
      return it->second;
    auto sidecar = image.path;
    sidecar += ".json";
    if (!std::filesystem::exists(sidecar))
      throw ProviderError("stub recognizer knows nothing about " + image.path.string());
    auto j = nlohmann::json::parse(read_file(sidecar));
    const auto& b = j.at("box");
    return {j.at("label").get<std::string>(),
            {b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(), b.at(3).get<int>()}};
  }

 private:
  struct Entry {
    std::filesystem::path path;
    std::string file;
    Recognition rec;
  };

  ImageCandidate synthesize(std::string_view keyword) const {
    const auto h = derive_seed(options_.seed, "image:" + std::string(keyword));
    char name[32];
    std::snprintf(name, sizeof name, "%016llx", static_cast<unsigned long long>(h));
    const auto png_path = options_.synth_dir / (std::string(name) + ".png");
    auto sidecar = png_path;
    sidecar += ".json";

    Rng rng(h);
    const int w = 320 + static_cast<int>(rng.uniform_index(161));  // 320..480
    const int hgt = 240 + static_cast<int>(rng.uniform_index(121));  // 240..360
    const int bw = w * (20 + static_cast<int>(rng.uniform_index(16))) / 100;
    const int bh = hgt * (20 + static_cast<int>(rng.uniform_index(16))) / 100;
    const BoundingBox box{(w - bw) / 2, (hgt - bh) / 2, (w - bw) / 2 + bw, (hgt - bh) / 2 + bh};
    const Rgb bg{static_cast<std::uint8_t>(rng.uniform_index(256)), static_cast<std::uint8_t>(rng.uniform_index(256)),
                 static_cast<std::uint8_t>(rng.uniform_index(256))};
    const Rgb fg = luminance(bg) < 128 ? Rgb{230, 200, 60} : Rgb{40, 60, 150};

    if (!std::filesystem::exists(png_path) || !std::filesystem::exists(sidecar)) {
      RgbImage img(w, hgt, bg);
      img.fill_rect(box, fg);
      if (options_.font) {
        const auto cps = utf8_decode(keyword);
        int size = std::max(1, bh / 4);
        TextLayout layout;
        for (; size > 1; --size) {
          layout = layout_text(cps, size, bw - 4, *options_.font);
          if (layout.extent.width <= bw - 4 && layout.extent.height <= bh - 4) break;
        }
        if (size == 1) layout = layout_text(cps, 1, bw - 4, *options_.font);
        const Rgb ink = luminance(fg) < 128 ? kWhite : kBlack;
        draw_text(img, *options_.font, layout, box.x1 + (bw - layout.extent.width) / 2,
                  box.y1 + (bh - layout.extent.height) / 2, ink, fg, 0);
      }
      std::filesystem::create_directories(options_.synth_dir);
      write_file_atomic(png_path, png_encode(img));
      nlohmann::json j = {{"label", std::string(keyword)}, {"box", {box.x1, box.y1, box.x2, box.y2}}};
      write_file_atomic(sidecar, j.dump());
    }
    return {png_path, "synth:" + std::string(keyword)};
  }

  Options options_;
  std::map<std::string, std::vector<Entry>> by_keyword_;
  std::map<std::string, Recognition> by_path_;
};

/// Sine-tone speech stand-in: one 0.25 s tone per code point, 16 kHz mono
/// PCM16, with the transcript in a "<file>.json" sidecar.
class StubTts final : public TtsProvider {
 public:
  AudioAsset synthesize(std::string_view text, Language language,
                        const std::filesystem::path& out_wav) const override {
    const auto cps = utf8_decode(text);
    PcmAudio audio;
    const auto per_char = static_cast<std::size_t>(kStubSecondsPerCharacter * audio.sample_rate);
    audio.samples.reserve(per_char * cps.size());
    for (char32_t cp : cps) {
      const double freq = cp == U' ' ? 0.0 : 200.0 + static_cast<double>(cp % 40) * 15.0;
      for (std::size_t i = 0; i < per_char; ++i) {
        // Short fade at both ends of every tone avoids clicks.
        const double env = std::min({1.0, static_cast<double>(i) / 160.0,
                                     static_cast<double>(per_char - i) / 160.0});
        const double v = std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / audio.sample_rate);
        audio.samples.push_back(static_cast<std::int16_t>(std::lround(v * env * 9000.0)));
      }
    }
    write_file_atomic(out_wav, wav_encode(audio));
    auto sidecar = out_wav;
    sidecar += ".json";
    nlohmann::json meta = {{"transcript", std::string(text)}, {"language", to_string(language)},
                           {"provider", "stub"}};
    write_file_atomic(sidecar, meta.dump());
    return AudioAsset{out_wav, audio.duration(), std::string(text), "stub-tts"};
  }
};

}  // namespace mmtox
