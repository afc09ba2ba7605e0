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
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mmtox/annotate.hpp"
#include "mmtox/compose.hpp"
#include "mmtox/config.hpp"
#include "mmtox/corpus.hpp"
#include "mmtox/font.hpp"
#include "mmtox/harness.hpp"
#include "mmtox/http.hpp"
#include "mmtox/layout.hpp"
#include "mmtox/manifest.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/moderation.hpp"
#include "mmtox/templates.hpp"
#include "mmtox/tfidf.hpp"
#include "mmtox/tokenize.hpp"
#include "mmtox/video.hpp"

namespace mmtox {

/// Runs fn(0..n-1) on up to jobs threads. The first exception is rethrown
/// after all workers stop.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : workers) t.join();
  if (first) std::rethrow_exception(first);
}

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

inline json to_json(const WordAnnotation& w) {
  return {{"token", w.token},
          {"pos", to_string(w.pos)},
          {"ner", to_string(w.ner)},
          {"sentiment", to_string(w.sentiment)},
          {"score", w.score}};
}

inline WordAnnotation annotation_from_json(const json& j) {
  WordAnnotation w;
  w.token = j.at("token").get<std::string>();
  w.pos = parse_pos(j.at("pos").get<std::string>());
  w.ner = parse_ner(j.at("ner").get<std::string>());
  w.sentiment = parse_sentiment(j.at("sentiment").get<std::string>());
  w.score = j.at("score").get<double>();
  return w;
}

inline json to_json(const KeywordPair& p) {
  json b;
  if (const auto* c = std::get_if<ContactInfo>(&p.b)) {
    b = {{"prefix", to_string(c->prefix)}, {"value", c->value}};
  } else {
    b = to_json(std::get<WordAnnotation>(p.b));
  }
  return {{"a", to_json(p.a)},
          {"b", b},
          {"category", to_string(p.category)},
          {"language", to_string(p.language)},
          {"middle", p.middle}};
}

inline KeywordPair pair_from_json(const json& j) {
  KeywordPair p;
  p.a = annotation_from_json(j.at("a"));
  const auto& b = j.at("b");
  if (b.contains("prefix")) {
    p.b = ContactInfo{parse_contact_prefix(b.at("prefix").get<std::string>()), b.at("value").get<std::string>()};
  } else {
    p.b = annotation_from_json(b);
  }
  p.category = parse_category(j.at("category").get<std::string>());
  p.language = parse_language(j.at("language").get<std::string>());
  p.middle = j.at("middle").get<std::string>();
  return p;
}

inline json to_json(const SeedRecord& s) {
  return {{"seed_id", s.seed_id},
          {"pair_index", s.pair_index},
          {"text", s.seed.text},
          {"template_id", s.seed.template_id},
          {"pair", to_json(s.seed.pair)}};
}

inline SeedRecord seed_from_json(const json& j) {
  SeedRecord s;
  s.seed_id = j.at("seed_id").get<std::string>();
  s.pair_index = j.at("pair_index").get<std::size_t>();
  s.seed.text = j.at("text").get<std::string>();
  s.seed.template_id = j.at("template_id").get<std::string>();
  s.seed.pair = pair_from_json(j.at("pair"));
  return s;
}

struct DiscardRecord {
  std::string case_id;  // empty for seeds dropped before case generation
  std::string seed_id;
  std::string seed_sentence;
  ToxicityCategory category = ToxicityCategory::Hate;
  Language language = Language::En;
  std::string combo;
  std::string stage;  // collection | image | layout | render | provider
  std::string reason;
};

inline json to_json(const DiscardRecord& d) {
  return {{"case_id", d.case_id},   {"seed_id", d.seed_id},
          {"seed_sentence", d.seed_sentence}, {"category", to_string(d.category)},
          {"language", to_string(d.language)}, {"combo", d.combo},
          {"stage", d.stage},       {"reason", d.reason}};
}

inline DiscardRecord discard_from_json(const json& j) {
  DiscardRecord d;
  d.case_id = j.at("case_id").get<std::string>();
  d.seed_id = j.at("seed_id").get<std::string>();
  d.seed_sentence = j.at("seed_sentence").get<std::string>();
  d.category = parse_category(j.at("category").get<std::string>());
  d.language = parse_language(j.at("language").get<std::string>());
  d.combo = j.at("combo").get<std::string>();
  d.stage = j.at("stage").get<std::string>();
  d.reason = j.at("reason").get<std::string>();
  return d;
}

inline std::vector<json> read_jsonl(const std::filesystem::path& path) {
  std::vector<json> out;
  if (!std::filesystem::exists(path)) return out;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw FormatError(path.string() + ": " + e.what());
    }
  }
  return out;
}

inline void write_jsonl(const std::filesystem::path& path, const std::vector<json>& lines) {
  std::string out;
  for (const auto& j : lines) out += j.dump() + "\n";
  write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// Run layout and providers
// ---------------------------------------------------------------------------

struct RunPaths {
  std::filesystem::path root;

  explicit RunPaths(std::filesystem::path r) : root(std::move(r)) {}
  std::filesystem::path candidates(Language l, ToxicityCategory c) const {
    return root / "candidates" / (to_string(l) + "-" + to_string(c) + ".json");
  }
  std::filesystem::path pairs(Language l, ToxicityCategory c) const {
    return root / "pairs" / (to_string(l) + "-" + to_string(c) + ".json");
  }
  std::filesystem::path seeds() const { return root / "seeds.json"; }
  std::filesystem::path collection() const { return root / "collection.json"; }
  std::filesystem::path cases() const { return root / "cases"; }
  std::filesystem::path case_dir(const std::string& id) const { return cases() / id; }
  std::filesystem::path discard_dir() const { return root / "discarded"; }
  std::filesystem::path discarded_log() const { return root / "discarded.jsonl"; }
  std::filesystem::path outcomes() const { return root / "outcomes.jsonl"; }
  std::filesystem::path error_reports() const { return root / "error_reports.jsonl"; }
  std::filesystem::path report_json() const { return root / "report.json"; }
  std::filesystem::path report_csv() const { return root / "report.csv"; }
  std::filesystem::path assets() const { return root / "assets"; }
};

struct Providers {
  std::shared_ptr<const AnnotatorProvider> annotator;
  std::shared_ptr<const ImageProvider> images;
  std::shared_ptr<const RecognizerProvider> recognizer;
  std::shared_ptr<const TtsProvider> tts;
  std::shared_ptr<const ModerationProvider> moderator;
  std::shared_ptr<const BitmapFont> font;
};

inline MockPolicy mock_policy(const CampaignConfig& c) {
  MockPolicy p = c.mock.banned.empty() ? MockPolicy::bundled(c.effective_data_dir()) : MockPolicy::from_file(c.mock.banned);
  p.reads_plain_text = c.mock.reads_plain_text;
  p.reads_image_text = c.mock.reads_image_text;
  p.reads_audio_transcript = c.mock.reads_audio_transcript;
  p.reads_image_salient_label = c.mock.reads_image_salient_label;
  return p;
}

inline Providers make_providers(const CampaignConfig& c, const RunPaths& paths) {
  Providers p;
  const auto data = c.effective_data_dir();
  try {
    p.font = BitmapFont::bundled(data);
  } catch (const Error& e) {
    throw IoError(std::string("cannot load the bundled font: ") + e.what());
  }
  if (c.providers.annotator == "stub") {
    p.annotator = std::make_shared<LexiconAnnotator>(data / "lexicon");
  } else {
    p.annotator = std::make_shared<HttpAnnotator>(c.providers.annotator, c.http);
  }
  if (c.providers.image == "stub" || c.providers.recognizer == "stub") {
    StubImageLibrary::Options o;
    o.fixture_dir = data / "fixtures" / "images";
    o.synth_dir = paths.assets() / "images";
    o.seed = c.seed.value_or(0);
    o.font = p.font;
    auto lib = std::make_shared<StubImageLibrary>(std::move(o));
    if (c.providers.image == "stub") p.images = lib;
    if (c.providers.recognizer == "stub") p.recognizer = lib;
  }
  if (c.providers.image != "stub")
    p.images = std::make_shared<HttpImageProvider>(c.providers.image, paths.assets() / "downloads", c.http);
  if (c.providers.recognizer != "stub") p.recognizer = std::make_shared<HttpRecognizer>(c.providers.recognizer, c.http);
  if (c.providers.tts == "stub") {
    p.tts = std::make_shared<StubTts>();
  } else {
    p.tts = std::make_shared<HttpTts>(c.providers.tts, c.http);
  }
  if (c.providers.moderator == "mock") {
    p.moderator = std::make_shared<MockModerator>(mock_policy(c));
  } else {
    HttpModerationProvider::Options o;
    o.http = c.http;
    o.toxic_labels = {c.toxic_labels.begin(), c.toxic_labels.end()};
    o.send_manifest = c.send_manifest;
    p.moderator = std::make_shared<HttpModerationProvider>(c.providers.moderator, o);
  }
  return p;
}

// ---------------------------------------------------------------------------
// Stages: mine -> pairs -> seeds
// ---------------------------------------------------------------------------

inline Corpus load_configured_corpus(const CampaignConfig& c, Language l, ToxicityCategory cat) {
  const auto key = CampaignConfig::corpus_key(l, cat);
  auto it = c.corpora.find(key);
  if (it == c.corpora.end()) throw ConfigError("no corpus configured for " + key);
  if (!std::filesystem::exists(it->second)) throw ConfigError("corpus for " + key + " not found: " + it->second.string());
  CorpusFormat fmt = PlainLines{};
  if (ascii_lower(it->second.extension().string()) == ".csv") fmt = Csv{c.csv_column};
  return load_corpus(it->second, fmt, l, cat);
}

struct MinedCandidates {
  Language language = Language::En;
  ToxicityCategory category = ToxicityCategory::Hate;
  std::vector<KeywordCandidate> candidates;
  std::vector<WordAnnotation> annotations;
};

/// Mines and annotates top-k keywords per (language, category) and writes
/// candidates/<lang>-<cat>.json. Existing files are reused unless force.
inline std::vector<MinedCandidates> stage_mine(const CampaignConfig& c, const Providers& p, const RunPaths& paths,
                                               bool force = false) {
  std::vector<std::pair<Language, ToxicityCategory>> jobs;
  for (auto l : c.languages)
    for (auto cat : c.categories) jobs.emplace_back(l, cat);
  std::vector<MinedCandidates> out(jobs.size());
  // Corpora are checked up front so a missing file fails before any work.
  for (auto [l, cat] : jobs) {
    const auto key = CampaignConfig::corpus_key(l, cat);
    auto it = c.corpora.find(key);
    if (it == c.corpora.end() || !std::filesystem::exists(it->second))
      throw ConfigError("missing corpus for " + key);
  }
  parallel_for(jobs.size(), c.jobs, [&](std::size_t i) {
    auto [l, cat] = jobs[i];
    MinedCandidates& m = out[i];
    m.language = l;
    m.category = cat;
    const auto file = paths.candidates(l, cat);
    if (!force && std::filesystem::exists(file)) {
      for (const auto& j : json::parse(read_file(file))) {
        KeywordCandidate k;
        k.token = j.at("token").get<std::string>();
        k.score = j.at("score").get<double>();
        k.support = j.at("support").get<std::vector<std::string>>();
        m.candidates.push_back(std::move(k));
        m.annotations.push_back(annotation_from_json(j.at("annotation")));
      }
      return;
    }
    const auto corpus = load_configured_corpus(c, l, cat);
    const auto tokenizer = Tokenizer::bundled(l, c.effective_data_dir());
    m.candidates = mine_keywords(corpus, tokenizer, c.top_k, c.support_sentences);
    json arr = json::array();
    for (const auto& k : m.candidates) {
      m.annotations.push_back(annotate(k, *p.annotator, l));
      arr.push_back({{"token", k.token}, {"score", k.score}, {"support", k.support},
                     {"annotation", to_json(m.annotations.back())}});
    }
    write_file_atomic(file, canonical_json(arr));
  });
  return out;
}

struct PairSet {
  Language language = Language::En;
  ToxicityCategory category = ToxicityCategory::Hate;
  std::vector<KeywordPair> pairs;
};

inline std::vector<PairSet> stage_pairs(const CampaignConfig& c, const std::vector<MinedCandidates>& mined,
                                        const RunPaths& paths, bool force = false) {
  std::vector<PairSet> out;
  for (const auto& m : mined) {
    PairSet ps{m.language, m.category, {}};
    const auto file = paths.pairs(m.language, m.category);
    if (!force && std::filesystem::exists(file)) {
      for (const auto& j : json::parse(read_file(file))) ps.pairs.push_back(pair_from_json(j.at("pair")));
      out.push_back(std::move(ps));
      continue;
    }
    if (m.category == ToxicityCategory::Advertisement) {
      const auto corpus = load_configured_corpus(c, m.language, m.category);
      Rng rng(derive_seed(c.seed.value_or(0), "contacts/" + to_string(m.language)));
      const auto contacts = contact_candidates(corpus, c.contacts_per_prefix, rng);
      ps.pairs = extract_pairs(m.category, m.language, m.annotations, contacts, c.pairs_per_category,
                               c.template_options());
    } else {
      ps.pairs = extract_pairs(m.category, m.language, std::span<const WordAnnotation>(m.annotations),
                               c.pairs_per_category, c.template_options());
    }
    json arr = json::array();
    for (std::size_t i = 0; i < ps.pairs.size(); ++i)
      arr.push_back({{"index", i}, {"pair", to_json(ps.pairs[i])}, {"seed", render_seed(ps.pairs[i]).text}});
    write_file_atomic(file, canonical_json(arr));
    out.push_back(std::move(ps));
  }
  return out;
}

inline std::string seed_id_of(Language l, ToxicityCategory c, std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", index);
  return to_string(l) + "-" + to_string(c) + "-" + buf;
}

inline std::vector<SeedRecord> stage_seeds(const std::vector<PairSet>& pairs, const RunPaths& paths) {
  std::vector<SeedRecord> seeds;
  for (const auto& ps : pairs)
    for (std::size_t i = 0; i < ps.pairs.size(); ++i)
      seeds.push_back({seed_id_of(ps.language, ps.category, i), i, render_seed(ps.pairs[i])});
  json arr = json::array();
  for (const auto& s : seeds) arr.push_back(to_json(s));
  write_file_atomic(paths.seeds(), canonical_json(arr));
  return seeds;
}

inline std::vector<SeedRecord> load_seeds(const RunPaths& paths) {
  if (!std::filesystem::exists(paths.seeds())) throw IoError("no seeds at " + paths.seeds().string());
  std::vector<SeedRecord> out;
  for (const auto& j : json::parse(read_file(paths.seeds()))) out.push_back(seed_from_json(j));
  return out;
}

/// Filters seeds by the text moderator and persists the result.
inline CollectionResult stage_collect(const std::vector<SeedRecord>& seeds, const Providers& p,
                                      const RunPaths& paths, std::size_t jobs) {
  std::vector<ModerationVerdict> verdicts(seeds.size());
  parallel_for(seeds.size(), jobs, [&](std::size_t i) {
    auto r = collect_toxic_seeds(std::span<const SeedRecord>(&seeds[i], 1), *p.moderator);
    verdicts[i] = r.kept.empty() ? r.dropped.front().verdict : ModerationVerdict{Toxic{}};
  });
  CollectionResult out;
  json kept = json::array();
  json dropped = json::array();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    if (is_toxic(verdicts[i])) {
      out.kept.push_back(seeds[i]);
      kept.push_back(seeds[i].seed_id);
    } else {
      out.dropped.push_back({seeds[i], verdicts[i]});
      dropped.push_back({{"seed_id", seeds[i].seed_id}, {"text", seeds[i].seed.text}, {"verdict", to_json(verdicts[i])}});
    }
  }
  write_file_atomic(paths.collection(), canonical_json({{"kept", kept}, {"dropped", dropped},
                                                        {"provider_id", p.moderator->id()}}));
  return out;
}

// ---------------------------------------------------------------------------
// Case generation
// ---------------------------------------------------------------------------

inline std::string case_id_of(const std::string& seed_id, Combo combo) {
  return seed_id + "-" + ascii_lower(to_string(combo));
}

struct CaseJob {
  SeedRecord seed;
  Combo combo = Combo::ImageVT;
  std::string case_id;
  std::string experiment;
  ScreenRegion region = ScreenRegion::Full;
  std::uint64_t rng_seed = 0;
  std::optional<Slot> vision_slot;  // forces the assignment when set
};

using CaseResult = std::variant<TestCaseManifest, DiscardRecord>;

namespace detail {

inline std::string rel(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty()) return {};
  return std::filesystem::absolute(p).lexically_normal().lexically_relative(std::filesystem::absolute(base).lexically_normal())
      .generic_string();
}

inline AssetRecord record_of(const ModalityAsset& a, const std::string& slot, const std::filesystem::path& case_dir,
                             const std::filesystem::path& run_dir) {
  AssetRecord r;
  r.slot = slot;
  r.modality = to_string(modality_of(a));
  // Files outside the run (fixtures) are identified by provenance alone.
  auto inside = [&](const std::filesystem::path& p) {
    const auto rp = std::filesystem::absolute(p).lexically_normal().lexically_relative(
        std::filesystem::absolute(run_dir).lexically_normal());
    return !rp.empty() && *rp.begin() != "..";
  };
  if (const auto* t = std::get_if<TextAsset>(&a)) {
    r.content = t->content;
    r.provenance = "template";
  } else if (const auto* i = std::get_if<ImageAsset>(&a)) {
    r.content = i->label;
    r.provenance = i->provenance;
    if (inside(i->path)) r.file = rel(i->path, case_dir);
    r.salient = i->salient;
    r.width = i->width;
    r.height = i->height;
  } else if (const auto* au = std::get_if<AudioAsset>(&a)) {
    r.content = au->transcript;
    r.provenance = au->provenance;
    if (inside(au->path)) r.file = rel(au->path, case_dir);
    r.duration = au->duration;
  }
  return r;
}

}  // namespace detail

/// Builds one test case: assets, fusion, artifact and manifest under
/// cases/<case_id>/. Recoverable problems become DiscardRecords.
inline CaseResult generate_case(const CampaignConfig& c, const Providers& p, const RunPaths& paths,
                                const CaseJob& job) {
  namespace fs = std::filesystem;
  const auto& pair = job.seed.seed.pair;
  DiscardRecord discard{job.case_id, job.seed.seed_id, job.seed.seed.text, pair.category, pair.language,
                        to_string(job.combo), "", ""};
  auto discarded = [&](std::string stage, std::string reason) {
    discard.stage = std::move(stage);
    discard.reason = std::move(reason);
    return CaseResult{discard};
  };

  Rng rng(job.rng_seed);
  TestCaseManifest m;
  m.case_id = job.case_id;
  m.seed_id = job.seed.seed_id;
  m.seed_sentence = job.seed.seed.text;
  m.template_id = job.seed.seed.template_id;
  m.category = pair.category;
  m.language = pair.language;
  m.keyword_a = pair.a.token;
  m.keyword_b = pair.b_text();
  m.middle = pair.middle;
  m.artifact_kind = kind_of(job.combo);
  m.combo = job.combo;
  m.rng_seed = job.rng_seed;
  m.experiment = job.experiment;

  const fs::path case_dir = paths.case_dir(job.case_id);
  fs::create_directories(case_dir);

  // Slot holding the vision (or, for AT, the audio) modality. Contact
  // details have no image, so advertisement pictures always show A.
  auto pick_slot = [&]() {
    if (job.vision_slot) return *job.vision_slot;
    const bool coin = rng.coin();
    if (pair.category == ToxicityCategory::Advertisement) return Slot::A;
    switch (c.image_assignment) {
      case ImageAssignment::AVision: return Slot::A;
      case ImageAssignment::BVision: return Slot::B;
      case ImageAssignment::Random: break;
    }
    return coin ? Slot::A : Slot::B;
  };
  auto keyword = [&](Slot s) { return s == Slot::A ? pair.a.token : pair.b_text(); };
  auto fetch_image = [&](Slot s) -> std::variant<ImageAsset, Rejected> {
    return to_image(keyword(s), *p.images, *p.recognizer, c.image_candidates);
  };

  try {
    if (job.combo == Combo::ImageVT) {
      const Slot vision = pick_slot();
      const Slot inserted = vision == Slot::A ? Slot::B : Slot::A;
      m.assignment = {vision == Slot::A ? Modality::Vision : Modality::Text,
                      vision == Slot::B ? Modality::Vision : Modality::Text};
      auto img = fetch_image(vision);
      if (auto* r = std::get_if<Rejected>(&img)) return discarded("image", r->reason);
      const auto& asset = std::get<ImageAsset>(img);
      const auto base = load_png(asset.path);
      const auto text = inserted == Slot::B ? b_with_middle(pair) : a_with_middle(pair);
      auto planned = plan_layout(base, asset.salient, text, inserted, *p.font, rng, c.layout_params());
      if (auto* d = std::get_if<Discard>(&planned)) return discarded("layout", d->reason);
      const auto& placement = std::get<Placement>(planned);
      const auto composed = compose_image(base, placement, *p.font);
      write_file_atomic(case_dir / "artifact.png", png_encode(composed));
      m.placement = summarize(placement, inserted, text);
      const ModalityAsset a_asset = vision == Slot::A ? ModalityAsset{asset} : ModalityAsset{TextAsset{text}};
      const ModalityAsset b_asset = vision == Slot::B ? ModalityAsset{asset} : ModalityAsset{TextAsset{text}};
      m.assets = {detail::record_of(a_asset, "A", case_dir, paths.root),
                  detail::record_of(b_asset, "B", case_dir, paths.root)};
      m.artifact = "artifact.png";
    } else {
      VideoPlan plan;
      if (job.combo == Combo::VideoText || job.combo == Combo::VideoAudio) {
        ModalityAsset whole = TextAsset{job.seed.seed.text};
        if (job.combo == Combo::VideoAudio)
          whole = to_audio(job.seed.seed.text, *p.tts, pair.language, case_dir / "audio_whole.wav");
        m.assignment = job.combo == Combo::VideoText ? ModalityAssignment{Modality::Text, Modality::Text}
                                                     : ModalityAssignment{Modality::Audio, Modality::Audio};
        plan = plan_single(whole, c.video);
        m.assets = {detail::record_of(whole, "whole", case_dir, paths.root)};
      } else {
        const auto vc = *video_combo_of(job.combo);
        const Slot first = pick_slot();
        const Modality primary = vc == VideoCombo::AT ? Modality::Audio : Modality::Vision;
        const Modality secondary = (vc == VideoCombo::VT || vc == VideoCombo::AT) ? Modality::Text : Modality::Audio;
        m.assignment = {first == Slot::A ? primary : secondary, first == Slot::B ? primary : secondary};
        auto make = [&](Slot s, Modality mod) -> std::optional<ModalityAsset> {
          if (mod == Modality::Text) return TextAsset{keyword(s)};
          if (mod == Modality::Audio)
            return to_audio(keyword(s), *p.tts, pair.language, case_dir / (s == Slot::A ? "audio_a.wav" : "audio_b.wav"));
          auto img = fetch_image(s);
          if (auto* r = std::get_if<Rejected>(&img)) {
            discard.reason = r->reason;
            return std::nullopt;
          }
          return std::get<ImageAsset>(img);
        };
        auto a = make(Slot::A, m.assignment.slot_a);
        if (!a) return discarded("image", discard.reason);
        auto b = make(Slot::B, m.assignment.slot_b);
        if (!b) return discarded("image", discard.reason);
        plan = plan_video(*a, *b, pair.middle, vc, rng, c.video);
        materialize_audio(plan, *p.tts, pair.language, case_dir);
        m.assets = {detail::record_of(*a, "A", case_dir, paths.root), detail::record_of(*b, "B", case_dir, paths.root)};
      }
      plan.region = job.region;
      std::optional<RenderedVideo> rendered;
      PlanSummary summary = summarize(plan, case_dir, c.video.fps);
      try {
        rendered = render_video(plan, case_dir, *p.font, c.video, c.encoder);
      } catch (const EncoderError& e) {
        summary.encoding = "failed";
        summary.encoder_exit = e.exit_status();
      }
      // Audio paths in the summary must be case-relative.
      for (std::size_t i = 0; i < plan.segments.size(); ++i)
        if (const auto* ar = std::get_if<AudioRef>(&plan.segments[i].audio))
          summary.segments[i].audio_file = detail::rel(ar->path, case_dir);
      summary.frames_dir = "frames";
      summary.audio_track = "track.wav";
      if (rendered) {
        summary.encoding = rendered->encoding;
        summary.encoder_exit = rendered->encoder_exit;
        if (rendered->encoded) summary.encoded_file = detail::rel(*rendered->encoded, case_dir);
      }
      m.plan = std::move(summary);
      m.artifact = m.plan->encoded_file.empty() ? "frames" : m.plan->encoded_file;
    }
  } catch (const ComboMismatchError& e) {
    return discarded("plan", e.what());
  } catch (const ProviderError& e) {
    return discarded("provider", e.what());
  } catch (const TooSmallError& e) {
    return discarded("layout", e.what());
  } catch (const RenderError& e) {
    return discarded("render", e.what());
  } catch (const FormatError& e) {
    return discarded("provider", e.what());
  }
  write_file_atomic(case_dir / "manifest.json", serialize_manifest(m));
  return m;
}

struct GenerateResult {
  CollectionResult collection;
  std::vector<std::string> case_ids;  // generated, sorted
  std::vector<DiscardRecord> discarded;
  std::map<std::string, std::size_t> discards_by_group;  // "<lang>-<cat>" -> count
  std::map<std::string, std::size_t> cases_by_group;
};

inline std::vector<CaseJob> campaign_jobs(const CampaignConfig& c, const std::vector<SeedRecord>& kept) {
  std::vector<CaseJob> jobs;
  for (const auto& s : kept)
    for (Combo combo : c.combos) {
      CaseJob j;
      j.seed = s;
      j.combo = combo;
      j.case_id = case_id_of(s.seed_id, combo);
      j.rng_seed = derive_seed(*c.seed, j.case_id);
      jobs.push_back(std::move(j));
    }
  return jobs;
}

/// Runs jobs, skipping any case that already has a manifest or a discard
/// record (resume).
inline void run_case_jobs(const CampaignConfig& c, const Providers& p, const RunPaths& paths,
                          const std::vector<CaseJob>& jobs, GenerateResult& out, bool force) {
  namespace fs = std::filesystem;
  std::vector<std::optional<CaseResult>> results(jobs.size());
  parallel_for(jobs.size(), c.jobs, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto manifest = paths.case_dir(job.case_id) / "manifest.json";
    const auto discard = paths.discard_dir() / (job.case_id + ".json");
    if (!force && fs::exists(manifest)) {
      results[i] = parse_manifest(read_file(manifest));
      return;
    }
    if (!force && fs::exists(discard)) {
      results[i] = discard_from_json(json::parse(read_file(discard)));
      return;
    }
    fs::remove(discard);
    auto r = generate_case(c, p, paths, job);
    if (auto* d = std::get_if<DiscardRecord>(&r)) {
      fs::remove_all(paths.case_dir(job.case_id));
      write_file_atomic(discard, to_json(*d).dump() + "\n");
    }
    results[i] = std::move(r);
  });
  for (auto& r : results) {
    if (auto* m = std::get_if<TestCaseManifest>(&*r)) {
      out.case_ids.push_back(m->case_id);
      ++out.cases_by_group[to_string(m->language) + "-" + to_string(m->category)];
    } else {
      auto& d = std::get<DiscardRecord>(*r);
      ++out.discards_by_group[to_string(d.language) + "-" + to_string(d.category)];
      out.discarded.push_back(std::move(d));
    }
  }
  std::sort(out.case_ids.begin(), out.case_ids.end());
}

/// collect -> transform -> fuse for every kept seed and combo.
inline GenerateResult stage_generate(const CampaignConfig& c, const Providers& p, const RunPaths& paths,
                                     const std::vector<SeedRecord>& seeds, bool force = false) {
  GenerateResult out;
  out.collection = stage_collect(seeds, p, paths, c.jobs);
  for (const auto& d : out.collection.dropped) {
    const auto& pair = d.seed.seed.pair;
    DiscardRecord r{"", d.seed.seed_id, d.seed.seed.text, pair.category, pair.language, "", "collection",
                    is_failure(d.verdict) ? "seed_provider_error: " + std::get<ProviderFailure>(d.verdict).reason
                                          : "seed_non_toxic"};
    ++out.discards_by_group[to_string(pair.language) + "-" + to_string(pair.category)];
    out.discarded.push_back(std::move(r));
  }
  run_case_jobs(c, p, paths, campaign_jobs(c, out.collection.kept), out, force);
  std::vector<json> lines;
  for (const auto& d : out.discarded) lines.push_back(to_json(d));
  write_jsonl(paths.discarded_log(), lines);
  return out;
}

// ---------------------------------------------------------------------------
// Testing and reports
// ---------------------------------------------------------------------------

struct TestResult {
  std::vector<CaseOutcome> outcomes;
  std::vector<ErrorReport> reports;
  EfrSummary efr;
  std::size_t skipped_unkept = 0;  // cases whose seed was not kept
  bool total_provider_failure() const { return !outcomes.empty() && efr.provider_errors == outcomes.size(); }
};

inline std::set<std::string> kept_seed_ids(const RunPaths& paths) {
  std::set<std::string> out;
  if (!std::filesystem::exists(paths.collection())) return out;
  const auto col = json::parse(read_file(paths.collection()));
  for (const auto& id : col.at("kept")) out.insert(id.get<std::string>());
  return out;
}

inline std::vector<std::string> list_cases(const std::filesystem::path& cases_dir) {
  std::vector<std::string> ids;
  if (!std::filesystem::exists(cases_dir)) return ids;
  for (const auto& e : std::filesystem::directory_iterator(cases_dir))
    if (e.is_directory() && std::filesystem::exists(e.path() / "manifest.json")) ids.push_back(e.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

inline json report_json(const std::string& run_id, const EfrSummary& efr, std::size_t reports, std::size_t kept,
                        std::size_t dropped, const std::string& provider) {
  return {{"run_id", run_id},
          {"provider_id", provider},
          {"efr", to_json(efr)},
          {"error_reports", reports},
          {"seeds", {{"kept", kept}, {"dropped", dropped}}}};
}

inline void write_reports(const CampaignConfig& c, const RunPaths& paths, const EfrSummary& efr,
                          std::size_t error_reports, const std::string& provider) {
  std::size_t kept = 0;
  std::size_t dropped = 0;
  if (std::filesystem::exists(paths.collection())) {
    const auto col = json::parse(read_file(paths.collection()));
    kept = col.at("kept").size();
    dropped = col.at("dropped").size();
  }
  write_file_atomic(paths.report_json(),
                    canonical_json(report_json(c.effective_run_id(), efr, error_reports, kept, dropped, provider)));
  write_file_atomic(paths.report_csv(), efr_csv(efr));
}

/// Moderates every generated case, applies the metamorphic relation and
/// writes verdicts, outcomes.jsonl, error_reports.jsonl and the reports.
/// Cases that already have a verdict are not re-sent unless force.
inline TestResult stage_test(const CampaignConfig& c, const Providers& p, const RunPaths& paths, bool force = false) {
  const auto kept = kept_seed_ids(paths);
  const auto ids = list_cases(paths.cases());
  std::vector<std::optional<CaseOutcome>> slots(ids.size());
  std::vector<std::optional<ErrorReport>> reports(ids.size());
  std::atomic<std::size_t> unkept{0};
  parallel_for(ids.size(), c.jobs, [&](std::size_t i) {
    const auto dir = paths.case_dir(ids[i]);
    const auto m = parse_manifest(read_file(dir / "manifest.json"));
    if (!kept.count(m.seed_id)) {
      ++unkept;
      return;
    }
    const auto verdict_file = dir / "verdict.json";
    ModerationVerdict v;
    std::string provider = p.moderator->id();
    if (!force && std::filesystem::exists(verdict_file)) {
      const auto j = json::parse(read_file(verdict_file));
      v = verdict_from_json(j.at("verdict"));
      provider = j.value("provider_id", provider);
    } else {
      v = p.moderator->moderate_case(m, dir);
      write_file_atomic(verdict_file, canonical_json({{"verdict", to_json(v)}, {"provider_id", provider}}));
    }
    auto mr = check_mr(m, v, provider);
    if (auto* r = std::get_if<ErrorReport>(&mr)) reports[i] = std::move(*r);
    slots[i] = outcome_of(m, std::move(v), provider);
  });
  TestResult out;
  out.skipped_unkept = unkept;
  std::vector<json> outcome_lines;
  std::vector<json> report_lines;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!slots[i]) continue;
    outcome_lines.push_back(to_json(*slots[i]));
    out.outcomes.push_back(std::move(*slots[i]));
    if (reports[i]) {
      report_lines.push_back(to_json(*reports[i]));
      out.reports.push_back(std::move(*reports[i]));
    }
  }
  write_jsonl(paths.outcomes(), outcome_lines);
  write_jsonl(paths.error_reports(), report_lines);
  out.efr = compute_efr(out.outcomes);
  write_reports(c, paths, out.efr, out.reports.size(), p.moderator->id());
  return out;
}

/// Recount of the EFR table from the persisted outcome log.
inline EfrSummary stage_report(const CampaignConfig& c, const RunPaths& paths) {
  if (!std::filesystem::exists(paths.outcomes())) throw IoError("no outcomes at " + paths.outcomes().string());
  std::vector<CaseOutcome> outcomes;
  for (const auto& j : read_jsonl(paths.outcomes())) outcomes.push_back(outcome_from_json(j));
  const auto efr = compute_efr(outcomes);
  std::size_t reports = 0;
  for (const auto& o : outcomes) reports += o.misclassified() ? 1 : 0;
  write_reports(c, paths, efr, reports, outcomes.empty() ? std::string() : outcomes.front().provider_id);
  return efr;
}

// ---------------------------------------------------------------------------
// Full campaign
// ---------------------------------------------------------------------------

struct CampaignResult {
  std::vector<SeedRecord> seeds;
  GenerateResult generated;
  TestResult tested;
};

inline std::vector<SeedRecord> prepare_seeds(const CampaignConfig& c, const Providers& p, const RunPaths& paths,
                                             bool force = false) {
  const auto mined = stage_mine(c, p, paths, force);
  const auto pairs = stage_pairs(c, mined, paths, force);
  return stage_seeds(pairs, paths);
}

/// mine -> pairs -> seeds -> collect -> transform -> fuse -> moderate -> MR
/// -> EFR. Config errors fail before any output is written.
inline CampaignResult run_campaign(const CampaignConfig& c, bool force = false) {
  c.validate();
  const RunPaths paths(c.run_dir());
  const auto providers = make_providers(c, paths);
  CampaignResult r;
  r.seeds = prepare_seeds(c, providers, paths, force);
  r.generated = stage_generate(c, providers, paths, r.seeds, force);
  r.tested = stage_test(c, providers, paths, force);
  return r;
}

// ---------------------------------------------------------------------------
// Variant experiments
// ---------------------------------------------------------------------------

enum class VariantKind { PositionLeftRight, TextVsAudio };

inline std::string to_string(VariantKind v) {
  return v == VariantKind::PositionLeftRight ? "position" : "modality";
}

inline VariantKind parse_variant(std::string_view s) {
  if (s == "position" || s == "PositionLeftRight") return VariantKind::PositionLeftRight;
  if (s == "modality" || s == "TextVsAudio") return VariantKind::TextVsAudio;
  throw ConfigError("variant must be position or modality, not " + std::string(s));
}

struct VariantArm {
  std::uint64_t generated = 0;  // definite verdicts
  std::uint64_t detected = 0;
  std::uint64_t provider_errors = 0;
  std::string rate() const { return percent_2dp(detected, generated); }
  double rate_value() const { return generated ? static_cast<double>(detected) / static_cast<double>(generated) : 0.0; }
};

struct VariantRow {
  Language language = Language::En;
  ToxicityCategory category = ToxicityCategory::Hate;
  VariantArm first;   // left, or pure text
  VariantArm second;  // right, or pure audio
  /// first - second in percentage points, two decimals.
  std::string delta() const {
    const double d = 100.0 * (first.rate_value() - second.rate_value());
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", d == 0.0 ? 0.0 : d);
    return buf;
  }
};

struct VariantReport {
  VariantKind kind = VariantKind::PositionLeftRight;
  std::string first_name;
  std::string second_name;
  std::vector<VariantRow> rows;
  VariantRow total;
  std::vector<DiscardRecord> discarded;
};

inline json to_json(const VariantReport& r) {
  auto arm = [](const VariantArm& a) {
    return json{{"generated", a.generated}, {"detected", a.detected}, {"provider_errors", a.provider_errors},
                {"detection_rate", a.rate()}};
  };
  auto row = [&](const VariantRow& x) {
    return json{{r.first_name, arm(x.first)}, {r.second_name, arm(x.second)}, {"delta", x.delta()}};
  };
  json rows = json::array();
  for (const auto& x : r.rows) {
    auto j = row(x);
    j["language"] = to_string(x.language);
    j["category"] = to_string(x.category);
    rows.push_back(std::move(j));
  }
  return {{"variant", to_string(r.kind)}, {"rows", rows}, {"total", row(r.total)}, {"discarded", r.discarded.size()}};
}

inline std::string variant_csv(const VariantReport& r) {
  std::string out = "category,language," + r.first_name + "_rate," + r.second_name + "_rate,delta\n";
  auto line = [&](const std::string& cat, const std::string& lang, const VariantRow& x) {
    out += cat + "," + lang + "," + x.first.rate() + "%," + x.second.rate() + "%," + x.delta() + "\n";
  };
  for (const auto& x : r.rows) line(to_string(x.category), to_string(x.language), x);
  line("all", "all", r.total);
  return out;
}

/// Per (language, category), seeded choice of up to n kept seeds.
inline std::vector<SeedRecord> sample_seeds(const std::vector<SeedRecord>& kept, std::size_t n, std::uint64_t seed,
                                            const std::string& salt) {
  std::map<std::string, std::vector<SeedRecord>> groups;
  for (const auto& s : kept)
    groups[to_string(s.seed.pair.language) + "-" + to_string(s.seed.pair.category)].push_back(s);
  std::vector<SeedRecord> out;
  for (auto& [key, g] : groups) {
    Rng rng(derive_seed(seed, salt + "/" + key));
    for (std::size_t i = g.size(); i > 1; --i) std::swap(g[i - 1], g[rng.uniform_index(i)]);
    g.resize(std::min(n, g.size()));
    std::sort(g.begin(), g.end(), [](const SeedRecord& a, const SeedRecord& b) { return a.seed_id < b.seed_id; });
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

/// Paired cases from the same seeds: VT videos with content in the left or
/// right half of the frame, or a pure text video against a pure audio
/// video. Outputs live under <run>/variants/<name>/.
inline VariantReport run_variant_experiment(const CampaignConfig& c, VariantKind kind, bool force = false) {
  c.validate();
  const RunPaths run(c.run_dir());
  const auto providers = make_providers(c, run);
  std::vector<SeedRecord> seeds;
  if (!force && std::filesystem::exists(run.seeds())) {
    seeds = load_seeds(run);
  } else {
    seeds = prepare_seeds(c, providers, run, force);
  }
  const RunPaths paths(run.root / "variants" / to_string(kind));
  const auto collection = stage_collect(seeds, providers, paths, c.jobs);
  const auto chosen = sample_seeds(collection.kept, c.variant_seeds, *c.seed, "variant/" + to_string(kind));

  VariantReport report;
  report.kind = kind;
  report.first_name = kind == VariantKind::PositionLeftRight ? "left" : "text";
  report.second_name = kind == VariantKind::PositionLeftRight ? "right" : "audio";

  std::vector<CaseJob> jobs;
  for (const auto& s : chosen) {
    for (int arm = 0; arm < 2; ++arm) {
      CaseJob j;
      j.seed = s;
      if (kind == VariantKind::PositionLeftRight) {
        j.combo = Combo::VideoVT;
        j.region = arm == 0 ? ScreenRegion::Left : ScreenRegion::Right;
        j.experiment = std::string("position-") + (arm == 0 ? "left" : "right");
        // Both arms share the seed so only the region differs.
        j.rng_seed = derive_seed(*c.seed, "variant/position/" + s.seed_id);
      } else {
        j.combo = arm == 0 ? Combo::VideoText : Combo::VideoAudio;
        j.experiment = std::string("modality-") + (arm == 0 ? "text" : "audio");
        j.rng_seed = derive_seed(*c.seed, "variant/modality/" + s.seed_id);
      }
      j.case_id = s.seed_id + "-" + j.experiment;
      jobs.push_back(std::move(j));
    }
  }
  GenerateResult gen;
  gen.collection = collection;
  run_case_jobs(c, providers, paths, jobs, gen, force);
  report.discarded = gen.discarded;
  const auto tested = stage_test(c, providers, paths, force);

  std::map<std::pair<Language, ToxicityCategory>, VariantRow> rows;
  for (const auto& o : tested.outcomes) {
    const bool first = o.case_id.size() >= 5 && (o.case_id.ends_with("-left") || o.case_id.ends_with("-text"));
    auto& row = rows[{o.language, o.category}];
    row.language = o.language;
    row.category = o.category;
    for (VariantArm* arm : {first ? &row.first : &row.second, first ? &report.total.first : &report.total.second}) {
      if (o.provider_error()) {
        ++arm->provider_errors;
      } else {
        ++arm->generated;
        if (!o.misclassified()) ++arm->detected;
      }
    }
  }
  for (auto& [_, r] : rows) report.rows.push_back(r);
  write_file_atomic(paths.root / "variant_report.json", canonical_json(to_json(report)));
  write_file_atomic(paths.root / "variant_report.csv", variant_csv(report));
  return report;
}

}  // namespace mmtox
