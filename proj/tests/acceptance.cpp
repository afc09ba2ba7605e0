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


// One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mmtox/mmtox.hpp"

namespace fs = std::filesystem;
using namespace mmtox;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok || !out_.pass) {
      if (!ok) ++failures_;
      return;
    }
    out_.pass = false;
    out_.detail = what;
    ++failures_;
  }
  void note(std::string s) {
    if (out_.pass) out_.detail = std::move(s);
  }
  Outcome result() const { return out_; }

 private:
  Outcome out_;
  int failures_ = 0;
};

class ScratchDir {
 public:
  ScratchDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("mmtox-accept-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

fs::path source_dir() { return MMTOX_SOURCE_DIR; }

CampaignConfig sample_config(const fs::path& out) {
  auto c = load_config(source_dir() / "configs" / "sample.toml");
  c.output_dir = out;
  c.jobs = 1;
  return c;
}

// --- 1 --------------------------------------------------------------------

Outcome tfidf_oracle() {
  Check chk;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(1);
  for (int round = 0; round < 20; ++round) {
    const int vocab = 1 + static_cast<int>(gen() % 50);
    const int ndocs = 1 + static_cast<int>(gen() % 100);
    std::vector<std::vector<std::string>> docs(static_cast<std::size_t>(ndocs));
    for (auto& d : docs) {
      const int len = static_cast<int>(gen() % 16);
      for (int i = 0; i < len; ++i) d.push_back("t" + std::to_string(gen() % static_cast<unsigned>(vocab)));
    }
    // Brute force: per term, scan every document.
    std::set<std::string> terms;
    for (const auto& d : docs) terms.insert(d.begin(), d.end());
    std::map<std::string, double> expected;
    for (const auto& t : terms) {
      std::size_t count = 0;
      std::size_t df = 0;
      for (const auto& d : docs) {
        const auto n = static_cast<std::size_t>(std::count(d.begin(), d.end(), t));
        count += n;
        df += n > 0 ? 1 : 0;
      }
      const double idf = std::log((1.0 + static_cast<double>(docs.size())) / (1.0 + static_cast<double>(df))) + 1.0;
      expected[t] = static_cast<double>(count) * idf;
    }
    const auto got = compute_tfidf(std::span<const std::vector<std::string>>(docs));
    chk.expect(std::map<std::string, double>(got.begin(), got.end()) == expected,
               "scores differ on corpus " + std::to_string(round));

    std::vector<std::pair<std::string, double>> ranked(expected.begin(), expected.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    if (ranked.size() > 20) ranked.resize(20);
    const auto top = select_keywords(got, 20);
    std::vector<std::string> a;
    std::vector<std::string> b;
    for (const auto& r : ranked) a.push_back(r.first);
    for (const auto& k : top) b.push_back(k.token);
    chk.expect(a == b, "top-20 differs on corpus " + std::to_string(round));
  }
  const double s = seconds_since(t0);
  chk.expect(s < 5.0, "took " + fmt_seconds(s));
  chk.note("20 corpora exact, " + fmt_seconds(s));
  return chk.result();
}

// --- 2 --------------------------------------------------------------------

Outcome worked_example() {
  Check chk;
  const BoundingBox salient{120, 120, 180, 180};  // centre cell of a 300x300 image
  chk.expect(salient_cell(300, 300, salient) == std::pair<int, int>{1, 1}, "salient box not in the centre cell");
  std::set<std::string> got;
  for (const auto& c : filter_reading_order(candidate_cells(300, 300), {1, 1}, Slot::B)) got.insert(cell_name(c));
  const std::set<std::string> want = {"middle-right", "bottom-middle", "bottom-right"};
  chk.expect(got == want, "survivors differ");
  chk.note("{middle-right, bottom-middle, bottom-right}");
  return chk.result();
}

// --- 3 --------------------------------------------------------------------

struct Cell {
  int row, col;
  BoundingBox rect;
};

std::vector<Cell> brute_cells(int w, int h) {
  std::vector<Cell> out;
  const int cw = w / 3;
  const int ch = h / 3;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      BoundingBox b{c * cw, r * ch, c == 2 ? w : (c + 1) * cw, r == 2 ? h : (r + 1) * ch};
      out.push_back({r, c, b});
    }
  return out;
}

std::int64_t brute_intersection(const BoundingBox& a, const BoundingBox& b) {
  std::int64_t n = 0;
  const int x1 = std::max(a.x1, b.x1), x2 = std::min(a.x2, b.x2);
  const int y1 = std::max(a.y1, b.y1), y2 = std::min(a.y2, b.y2);
  if (x2 > x1 && y2 > y1) n = static_cast<std::int64_t>(x2 - x1) * (y2 - y1);
  return n;
}

std::set<std::pair<int, int>> brute_survivors(int w, int h, const BoundingBox& s, Slot slot) {
  const auto cells = brute_cells(w, h);
  const int cx = s.x1 + (s.x2 - s.x1) / 2;
  const int cy = s.y1 + (s.y2 - s.y1) / 2;
  int sr = -1, sc = -1;
  for (const auto& c : cells)
    if (cx >= c.rect.x1 && cx < c.rect.x2 && cy >= c.rect.y1 && cy < c.rect.y2) sr = c.row, sc = c.col;
  std::set<std::pair<int, int>> out;
  for (const auto& c : cells) {
    const auto area = static_cast<double>(c.rect.x2 - c.rect.x1) * (c.rect.y2 - c.rect.y1);
    if (static_cast<double>(brute_intersection(c.rect, s)) / area > 0.3) continue;
    if (c.row == sr && c.col == sc) continue;
    const bool ok = slot == Slot::B ? (c.row >= sr && c.col >= sc) : (c.row <= sr && c.col <= sc);
    if (ok) out.insert({c.row, c.col});
  }
  return out;
}

Outcome layout_properties() {
  Check chk;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(3);
  const MonospaceMetrics metrics;
  int placed = 0, discarded = 0, empty_sets = 0;
  for (int i = 0; i < 1000; ++i) {
    const int w = 60 + static_cast<int>(gen() % 500);
    const int h = 60 + static_cast<int>(gen() % 500);
    const int bw = 1 + static_cast<int>(gen() % static_cast<unsigned>(w));
    const int bh = 1 + static_cast<int>(gen() % static_cast<unsigned>(h));
    const int x = static_cast<int>(gen() % static_cast<unsigned>(w - bw + 1));
    const int y = static_cast<int>(gen() % static_cast<unsigned>(h - bh + 1));
    const BoundingBox salient{x, y, x + bw, y + bh};
    const Slot slot = gen() % 2 ? Slot::A : Slot::B;
    const auto want = brute_survivors(w, h, salient, slot);
    std::set<std::pair<int, int>> got;
    for (const auto& c : surviving_cells(w, h, salient, slot, 0.3)) got.insert({c.row, c.col});
    chk.expect(got == want, "survivor set differs on instance " + std::to_string(i));
    if (want.empty()) ++empty_sets;

    const std::string text(1 + gen() % 12, 'x');
    Rng rng(gen());
    const RgbImage image(w, h, Rgb{static_cast<std::uint8_t>(gen() % 256), 90, 90});
    const auto plan = plan_layout(image, salient, text, slot, metrics, rng);
    if (const auto* p = std::get_if<Placement>(&plan)) {
      ++placed;
      const auto& r = p->cell.rect;
      chk.expect(want.count({p->cell.row, p->cell.col}) == 1, "placement outside the survivors");
      chk.expect(static_cast<double>(brute_intersection(r, salient)) <= 0.3 * static_cast<double>(r.area()),
                 "placement overlaps the salient object by more than 30%");
      chk.expect(p->text_box.x1 >= r.x1 && p->text_box.x2 <= r.x2 && p->text_box.y1 >= r.y1 && p->text_box.y2 <= r.y2,
                 "text box leaves its cell");
    } else {
      ++discarded;
      // Only a cell too small for the text may discard a non-empty set.
      if (!want.empty())
        chk.expect(std::get<Discard>(plan).reason.find("does not fit") != std::string::npos,
                   "discard with survivors available");
    }
    if (want.empty()) chk.expect(std::holds_alternative<Discard>(plan), "zero survivors but placed");
  }
  const double s = seconds_since(t0);
  chk.expect(s < 30.0, "took " + fmt_seconds(s));
  chk.note(std::to_string(placed) + " placed, " + std::to_string(discarded) + " discarded (" +
           std::to_string(empty_sets) + " with no survivors), " + fmt_seconds(s));
  return chk.result();
}

// --- 4 --------------------------------------------------------------------

Outcome text_sizing() {
  Check chk;
  std::mt19937_64 gen(4);
  const MonospaceMetrics metrics;
  int clamped = 0;
  for (int i = 0; i < 200; ++i) {
    // Every fourth box is tiny, where even small sizes overshoot the window.
    const unsigned span = i % 4 == 0 ? 8 : 400;
    const int bw = 1 + static_cast<int>(gen() % span);
    const int bh = 1 + static_cast<int>(gen() % span);
    const BoundingBox salient{0, 0, bw, bh};
    const std::size_t len = 1 + gen() % 30;
    const std::string text(len, 'm');
    const double wh = static_cast<double>(bw) * bh;
    // Monospace glyphs: width s per character, height 2s.
    auto area = [&](int s) { return static_cast<double>(s) * static_cast<double>(len) * 2.0 * s; };
    int best = 0;
    for (int s = 1; area(s) <= 1.2 * wh; ++s) best = s;
    const auto got = resize_text(salient, text, metrics);
    chk.expect(got.font_size == std::max(best, 1), "size differs on instance " + std::to_string(i));
    const bool expect_clamped = best == 0 || area(best) < 0.8 * wh;
    chk.expect(got.clamped == expect_clamped, "clamp flag differs on instance " + std::to_string(i));
    if (got.clamped) {
      ++clamped;
    } else {
      const auto a = static_cast<double>(got.area);
      chk.expect(a >= 0.8 * wh && a <= 1.2 * wh, "area outside window on instance " + std::to_string(i));
    }
  }
  chk.note("200 instances exact, " + std::to_string(clamped) + " clamped");
  return chk.result();
}

// --- 5 --------------------------------------------------------------------

Outcome closed_loop() {
  Check chk;
  const auto t0 = std::chrono::steady_clock::now();
  ScratchDir dir;
  auto c = sample_config(dir.path());
  c.languages = {Language::En};
  c.categories = {ToxicityCategory::Hate};
  c.combos = {Combo::ImageVT};
  c.image_assignment = ImageAssignment::AVision;  // B is drawn as text into A's image
  c.pairs_per_category = 60;

  std::string percents[2];
  for (int arm = 0; arm < 2; ++arm) {
    const bool reads = arm == 1;
    const RunPaths paths(c.run_dir());
    const auto providers = make_providers(c, paths);
    const auto seeds = prepare_seeds(c, providers, paths);
    // Ban exactly the B keywords.
    std::set<std::string> b_words;
    for (const auto& s : seeds) b_words.insert(s.seed.pair.b_text());
    std::string list;
    for (const auto& w : b_words) list += w + "\n";
    write_file(dir.path() / "b_words.txt", list);
    c.mock.banned = dir.path() / "b_words.txt";
    c.mock.reads_image_text = reads;
    c.run_id = reads ? "reads" : "blind";
    const RunPaths run(c.run_dir());
    const auto r = run_campaign(c);
    chk.expect(r.generated.case_ids.size() >= 50, "only " + std::to_string(r.generated.case_ids.size()) + " cases");
    chk.expect(r.tested.efr.rows.size() == 1, "expected one EFR row");
    if (r.tested.efr.rows.empty()) return chk.result();
    percents[arm] = r.tested.efr.rows[0].efr_percent();
    for (const auto& id : r.generated.case_ids) {
      const auto m = parse_manifest(read_file(run.case_dir(id) / "manifest.json"));
      chk.expect(m.assignment.slot_a == Modality::Vision, id + " does not put A in the image");
    }
    if (!reads) {
      chk.expect(r.tested.reports.size() == r.generated.case_ids.size(), "not every case produced an error report");
      chk.expect(percents[0] == "100.00", "blind EFR " + percents[0]);
    } else {
      chk.expect(r.tested.reports.empty(), "error reports with OCR enabled");
      chk.expect(percents[1] == "0.00", "reading EFR " + percents[1]);
    }
    c.mock.banned.clear();
    c.run_id.clear();
  }
  const double s = seconds_since(t0);
  chk.expect(s < 120.0, "took " + fmt_seconds(s));
  chk.note("blind " + percents[0] + "%, reading " + percents[1] + "%, " + fmt_seconds(s));
  return chk.result();
}

// --- 6 --------------------------------------------------------------------

Outcome seed_filtering() {
  Check chk;
  ScratchDir dir;
  auto c = sample_config(dir.path());
  c.languages = {Language::En};
  c.categories = {ToxicityCategory::Hate};
  c.combos = {Combo::ImageVT, Combo::VideoAT};
  c.pairs_per_category = 20;

  // Drop three words from the bundled list so some seeds read as clean.
  const auto bundled = MockPolicy::bundled(c.effective_data_dir()).banned;
  std::vector<std::string> kept(bundled.begin() + 3, bundled.end());
  std::string list;
  for (const auto& w : kept) list += w + "\n";
  write_file(dir.path() / "banned.txt", list);
  c.mock.banned = dir.path() / "banned.txt";

  const auto r = run_campaign(c);
  const RunPaths paths(c.run_dir());

  std::set<std::string> clean;  // oracle: no banned word anywhere in the seed
  for (const auto& s : r.seeds) {
    bool hit = false;
    for (const auto& t : tokenize(s.seed.text, Language::En))
      hit |= std::find(kept.begin(), kept.end(), t) != kept.end();
    if (!hit) clean.insert(s.seed_id);
  }
  std::set<std::string> logged;
  for (const auto& j : read_jsonl(paths.discarded_log()))
    if (j.at("stage") == "collection" && j.at("reason") == "seed_non_toxic") logged.insert(j.at("seed_id"));
  chk.expect(!clean.empty(), "the policy left no clean seeds");
  chk.expect(logged == clean, "discarded log differs from the clean seeds");
  for (const auto& id : list_cases(paths.cases())) {
    const auto m = parse_manifest(read_file(paths.case_dir(id) / "manifest.json"));
    chk.expect(!clean.count(m.seed_id), "case " + id + " built from a clean seed");
  }
  for (const auto& j : read_jsonl(paths.error_reports())) {
    const auto id = j.at("case_id").get<std::string>();
    for (const auto& s : clean) chk.expect(!id.starts_with(s + "-"), "error report for clean seed " + s);
  }
  chk.note(std::to_string(clean.size()) + "/" + std::to_string(r.seeds.size()) +
           " seeds clean, no cases or reports for them");
  return chk.result();
}

// --- 7 --------------------------------------------------------------------

Outcome efr_arithmetic() {
  Check chk;
  ScratchDir dir;
  auto c = sample_config(dir.path());
  const RunPaths paths(c.run_dir());
  auto row = [](std::string id, ModerationVerdict v) {
    return CaseOutcome{std::move(id), "en-hate-000", ToxicityCategory::Hate, Language::En, ArtifactKind::Image,
                       Combo::ImageVT, std::move(v), "injected"};
  };
  const std::vector<CaseOutcome> log = {row("c1", NonToxic{}), row("c2", NonToxic{}), row("c3", NonToxic{}),
                                        row("c4", Toxic{{"hate"}, 0.9}), row("c5", ProviderFailure{"timeout"}),
                                        row("c6", ProviderFailure{"503"})};
  std::vector<json> lines;
  for (const auto& o : log) lines.push_back(to_json(o));
  write_jsonl(paths.outcomes(), lines);
  const auto s = stage_report(c, paths);
  chk.expect(s.rows.size() == 1, "expected one row");
  if (s.rows.empty()) return chk.result();
  chk.expect(s.rows[0].generated == 4 && s.rows[0].misclassified == 3, "counts include provider errors");
  chk.expect(s.rows[0].provider_errors == 2, "provider errors not tallied separately");
  chk.expect(s.rows[0].efr_percent() == "75.00", "EFR " + s.rows[0].efr_percent());
  const auto report = json::parse(read_file(paths.report_json()));
  chk.expect(report.dump().find("75.00") != std::string::npos, "report.json lacks 75.00");
  chk.note("3/4 = " + s.rows[0].efr_percent() + "%, 2 provider errors excluded");
  return chk.result();
}

// --- 8 --------------------------------------------------------------------

Outcome video_ordering() {
  Check chk;
  std::mt19937_64 gen(8);
  auto word = [&] {
    std::string w;
    for (std::size_t i = 1 + gen() % 8; i > 0; --i) w += static_cast<char>('a' + gen() % 26);
    return w;
  };
  auto image = [&](const std::string& w) {
    return ImageAsset{w + ".png", 100, 100, {10, 10, 50, 50}, w, "fixture"};
  };
  auto audio = [&](const std::string& w) {
    return AudioAsset{w + ".wav", 0.25 * static_cast<double>(w.size()), w, "stub"};
  };
  const std::vector<std::string> middles = {"are", ":", "your"};
  std::size_t checked = 0;
  for (int i = 0; i < 100; ++i) {
    const auto a = word();
    const auto b = word();
    const auto middle = middles[gen() % 3];
    const bool swap = gen() % 2;
    for (VideoCombo combo : {VideoCombo::VT, VideoCombo::VA, VideoCombo::AT, VideoCombo::VAT}) {
      ModalityAsset first, second;
      switch (combo) {
        case VideoCombo::VT:
          first = image(a), second = TextAsset{b};
          break;
        case VideoCombo::VA:
        case VideoCombo::VAT:
          first = image(a), second = audio(b);
          break;
        case VideoCombo::AT:
          first = audio(a), second = TextAsset{b};
          break;
      }
      if (swap) {
        // Same modalities on the other slots.
        if (combo == VideoCombo::VT) first = TextAsset{a}, second = image(b);
        if (combo == VideoCombo::VA || combo == VideoCombo::VAT) first = audio(a), second = image(b);
        if (combo == VideoCombo::AT) first = TextAsset{a}, second = audio(b);
      }
      Rng rng(gen());
      const auto plan = plan_video(first, second, middle, combo, rng);
      ++checked;
      int ia = -1, ib = -1, im = -1;
      for (std::size_t k = 0; k < plan.segments.size(); ++k) {
        const auto m = plan.segments[k].material;
        if (m == Material::A && ia < 0) ia = static_cast<int>(k);
        if (m == Material::B && ib < 0) ib = static_cast<int>(k);
        if (m == Material::Middle && im < 0) im = static_cast<int>(k);
      }
      const std::string tag = to_string(combo) + " case " + std::to_string(i);
      chk.expect(ia >= 0 && ib >= 0 && ia < ib, tag + ": A does not precede B");
      if (combo == VideoCombo::VA && std::holds_alternative<AudioAsset>(first) && ia >= 0) {
        const auto& s = plan.segments[static_cast<std::size_t>(ia)];
        chk.expect(std::holds_alternative<Blank>(s.visual) && std::holds_alternative<AudioRef>(s.audio),
                   tag + ": A's audio is not over a blank screen");
      }
      if (combo == VideoCombo::VAT) {
        chk.expect(ia < im && im < ib, tag + ": middle card not between A and B");
        if (im >= 0) {
          const auto* card = std::get_if<TextCard>(&plan.segments[static_cast<std::size_t>(im)].visual);
          chk.expect(card && card->text == trim(middle), tag + ": middle card text");
        }
      }
    }
  }
  chk.note(std::to_string(checked) + " plans checked");
  return chk.result();
}

// --- 9 --------------------------------------------------------------------

std::map<std::string, std::string> manifest_set(const RunPaths& paths) {
  std::map<std::string, std::string> out;
  for (const auto& id : list_cases(paths.cases())) out[id] = read_file(paths.case_dir(id) / "manifest.json");
  return out;
}

Outcome determinism() {
  Check chk;
  ScratchDir d1, d2;
  std::map<std::string, std::string> sets[2];
  for (int i = 0; i < 2; ++i) {
    auto c = sample_config(i == 0 ? d1.path() : d2.path());
    c.languages = {Language::En, Language::Zh};
    c.pairs_per_category = 2;
    c.video.width = 96;
    c.video.height = 72;
    c.video.fps = 4;
    c.jobs = i == 0 ? 1 : 4;
    const RunPaths paths(c.run_dir());
    const auto providers = make_providers(c, paths);
    stage_generate(c, providers, paths, prepare_seeds(c, providers, paths));
    sets[i] = manifest_set(paths);
  }
  chk.expect(!sets[0].empty(), "no manifests generated");
  chk.expect(sets[0] == sets[1], "manifest sets differ");
  chk.note(std::to_string(sets[0].size()) + " manifests byte-identical");
  return chk.result();
}

// --- 10 -------------------------------------------------------------------

Outcome scale_parity() {
  Check chk;
  ScratchDir dir;
  const auto c = sample_config(dir.path());
  const RunPaths paths(c.run_dir());
  const auto providers = make_providers(c, paths);
  const auto seeds = prepare_seeds(c, providers, paths);
  std::map<std::string, std::size_t> per_group;
  std::set<std::string> texts;
  for (const auto& s : seeds) {
    const auto& p = s.seed.pair;
    ++per_group[to_string(p.language) + "/" + to_string(p.category)];
    std::string want;
    if (p.category == ToxicityCategory::Advertisement) {
      const auto& ci = std::get<ContactInfo>(p.b);
      want = p.a.token + ": " + to_string(ci.prefix) + ": " + ci.value;
    } else {
      const auto& b = std::get<WordAnnotation>(p.b).token;
      want = p.a.token + (p.category == ToxicityCategory::Hate ? " are " : " your ") + b;
    }
    chk.expect(s.seed.text == want, "seed " + s.seed_id + " reads '" + s.seed.text + "'");
    texts.insert(s.seed.text);
  }
  chk.expect(per_group.size() == 6, "expected 6 groups, got " + std::to_string(per_group.size()));
  for (const auto& [g, n] : per_group) chk.expect(n == 100, g + " has " + std::to_string(n) + " pairs");
  chk.expect(seeds.size() == 600, "total " + std::to_string(seeds.size()));
  chk.expect(texts.size() == seeds.size(), "duplicate seed sentences");
  chk.note(std::to_string(seeds.size()) + " seeds, 100 per group, all byte-exact");
  return chk.result();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"TF-IDF matches brute force", tfidf_oracle},
      {"centred salient object, slot B survivors", worked_example},
      {"layout properties on 1000 instances", layout_properties},
      {"text sizing equals exhaustive scan", text_sizing},
      {"closed-loop EFR 100% / 0%", closed_loop},
      {"non-toxic seeds yield no cases", seed_filtering},
      {"EFR arithmetic 3/4", efr_arithmetic},
      {"video plan ordering", video_ordering},
      {"generate is deterministic", determinism},
      {"600 seeds from the default config", scale_parity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
