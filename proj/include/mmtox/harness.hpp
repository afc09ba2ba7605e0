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

#include <chrono>
#include <cstdint>
#include <ctime>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "json.hpp"
#include "mmtox/core.hpp"
#include "mmtox/manifest.hpp"
#include "mmtox/moderation.hpp"
#include "mmtox/templates.hpp"

namespace mmtox {

/// A rendered seed with a stable id ("en-hate-007").
struct SeedRecord {
  std::string seed_id;
  std::size_t pair_index = 0;
  SeedSentence seed;
};

struct DroppedSeed {
  SeedRecord seed;
  ModerationVerdict verdict;
};

struct CollectionResult {
  std::vector<SeedRecord> kept;
  std::vector<DroppedSeed> dropped;
};

/// Keeps the seeds the text moderator already flags as toxic.
inline CollectionResult collect_toxic_seeds(std::span<const SeedRecord> seeds, const ModerationProvider& text_provider) {
  CollectionResult out;
  for (const auto& s : seeds) {
    ModerationVerdict v;
    try {
      v = text_provider.moderate_text(s.seed.text);
    } catch (const Error& e) {
      v = ProviderFailure{e.what()};
    }
    if (is_toxic(v)) {
      out.kept.push_back(s);
    } else {
      out.dropped.push_back({s, std::move(v)});
    }
  }
  return out;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ErrorReport {
  std::string case_id;
  ToxicityCategory category = ToxicityCategory::Hate;
  Language language = Language::En;
  ArtifactKind artifact_kind = ArtifactKind::Image;
  Combo combo = Combo::ImageVT;
  ModalityAssignment assignment;
  std::string seed_sentence;
  ModerationVerdict verdict;
  std::string provider_id;
  std::string timestamp;
};

struct Pass {};
struct Excluded {
  std::string reason;
};

using MrResult = std::variant<ErrorReport, Pass, Excluded>;

/// Toxicity must survive the modality transformation: a clean verdict on a
/// case built from a toxic seed is an error.
inline MrResult check_mr(const TestCaseManifest& m, const ModerationVerdict& verdict, std::string provider_id,
                         std::string timestamp = utc_timestamp()) {
  if (const auto* f = std::get_if<ProviderFailure>(&verdict)) return Excluded{f->reason};
  if (is_toxic(verdict)) return Pass{};
  return ErrorReport{m.case_id,       m.category, m.language,  m.artifact_kind,          m.combo,
                     m.assignment,    m.seed_sentence, verdict, std::move(provider_id), std::move(timestamp)};
}

inline json to_json(const ErrorReport& r) {
  return {{"case_id", r.case_id},
          {"category", to_string(r.category)},
          {"language", to_string(r.language)},
          {"artifact_kind", to_string(r.artifact_kind)},
          {"combo", to_string(r.combo)},
          {"assignment", {{"slot_a", to_string(r.assignment.slot_a)}, {"slot_b", to_string(r.assignment.slot_b)}}},
          {"seed_sentence", r.seed_sentence},
          {"verdict", to_json(r.verdict)},
          {"provider_id", r.provider_id},
          {"timestamp", r.timestamp}};
}

/// One line of outcomes.jsonl.
struct CaseOutcome {
  std::string case_id;
  std::string seed_id;
  ToxicityCategory category = ToxicityCategory::Hate;
  Language language = Language::En;
  ArtifactKind artifact_kind = ArtifactKind::Image;
  Combo combo = Combo::ImageVT;
  ModerationVerdict verdict;
  std::string provider_id;

  bool misclassified() const { return std::holds_alternative<NonToxic>(verdict); }
  bool provider_error() const { return is_failure(verdict); }
};

inline json to_json(const CaseOutcome& o) {
  return {{"case_id", o.case_id},
          {"seed_id", o.seed_id},
          {"category", to_string(o.category)},
          {"language", to_string(o.language)},
          {"artifact_kind", to_string(o.artifact_kind)},
          {"combo", to_string(o.combo)},
          {"verdict", to_json(o.verdict)},
          {"outcome", o.provider_error() ? "excluded" : (o.misclassified() ? "error_report" : "pass")},
          {"provider_id", o.provider_id}};
}

inline CaseOutcome outcome_from_json(const json& j) {
  try {
    CaseOutcome o;
    o.case_id = j.at("case_id").get<std::string>();
    o.seed_id = j.value("seed_id", std::string());
    o.category = parse_category(j.at("category").get<std::string>());
    o.language = parse_language(j.at("language").get<std::string>());
    o.artifact_kind = parse_artifact_kind(j.at("artifact_kind").get<std::string>());
    o.combo = parse_combo(j.at("combo").get<std::string>());
    o.verdict = verdict_from_json(j.at("verdict"));
    o.provider_id = j.value("provider_id", std::string());
    return o;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed outcome: ") + e.what());
  } catch (const ConfigError& e) {
    throw FormatError(std::string("malformed outcome: ") + e.what());
  }
}

inline CaseOutcome outcome_of(const TestCaseManifest& m, ModerationVerdict v, std::string provider_id) {
  return {m.case_id, m.seed_id, m.category, m.language, m.artifact_kind, m.combo, std::move(v), std::move(provider_id)};
}

/// Exact percentage of num/den rounded half-up to two places ("75.00").
inline std::string percent_2dp(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return "n/a";
  const auto scaled = (num * 20000 + den) / (2 * den);  // round(num * 10000 / den)
  std::ostringstream os;
  os << scaled / 100 << '.' << (scaled % 100 < 10 ? "0" : "") << scaled % 100;
  return os.str();
}

struct EfrRow {
  ToxicityCategory category = ToxicityCategory::Hate;
  Language language = Language::En;
  ArtifactKind artifact_kind = ArtifactKind::Image;
  Combo combo = Combo::ImageVT;
  std::uint64_t generated = 0;  // cases with a definite verdict
  std::uint64_t misclassified = 0;
  std::uint64_t provider_errors = 0;

  double efr() const { return generated ? static_cast<double>(misclassified) / static_cast<double>(generated) : 0.0; }
  std::string efr_percent() const { return percent_2dp(misclassified, generated); }
  std::string efr_rational() const { return std::to_string(misclassified) + "/" + std::to_string(generated); }
};

struct EfrSummary {
  std::vector<EfrRow> rows;  // generated > 0 only
  std::uint64_t generated = 0;
  std::uint64_t misclassified = 0;
  std::uint64_t provider_errors = 0;  // all groups, including omitted ones

  std::string efr_percent() const { return percent_2dp(misclassified, generated); }
};

inline EfrSummary compute_efr(std::span<const CaseOutcome> outcomes) {
  using Key = std::tuple<ToxicityCategory, Language, ArtifactKind, Combo>;
  std::map<Key, EfrRow> groups;
  EfrSummary s;
  for (const auto& o : outcomes) {
    auto& row = groups[{o.category, o.language, o.artifact_kind, o.combo}];
    row.category = o.category;
    row.language = o.language;
    row.artifact_kind = o.artifact_kind;
    row.combo = o.combo;
    if (o.provider_error()) {
      ++row.provider_errors;
      ++s.provider_errors;
      continue;
    }
    ++row.generated;
    ++s.generated;
    if (o.misclassified()) {
      ++row.misclassified;
      ++s.misclassified;
    }
  }
  for (auto& [_, row] : groups)
    if (row.generated > 0) s.rows.push_back(row);
  return s;
}

inline json to_json(const EfrRow& r) {
  return {{"category", to_string(r.category)},
          {"language", to_string(r.language)},
          {"kind", to_string(r.artifact_kind)},
          {"combo", to_string(r.combo)},
          {"generated", r.generated},
          {"misclassified", r.misclassified},
          {"provider_errors", r.provider_errors},
          {"efr", r.efr_rational()},
          {"efr_percent", r.efr_percent()}};
}

inline json to_json(const EfrSummary& s) {
  json rows = json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  return {{"rows", rows},
          {"generated", s.generated},
          {"misclassified", s.misclassified},
          {"provider_errors", s.provider_errors},
          {"efr_percent", s.efr_percent()}};
}

/// EFR table as CSV: category,language,kind,combo,generated,misclassified,efr.
inline std::string efr_csv(const EfrSummary& s) {
  std::string out = "category,language,kind,combo,generated,misclassified,efr\n";
  for (const auto& r : s.rows)
    out += to_string(r.category) + "," + to_string(r.language) + "," + to_string(r.artifact_kind) + "," +
           to_string(r.combo) + "," + std::to_string(r.generated) + "," + std::to_string(r.misclassified) + "," +
           r.efr_percent() + "%\n";
  return out;
}

}  // namespace mmtox
