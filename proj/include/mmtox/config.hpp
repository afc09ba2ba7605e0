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

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

#include "mmtox/core.hpp"
#include "mmtox/http.hpp"
#include "mmtox/layout.hpp"
#include "mmtox/manifest.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/templates.hpp"
#include "mmtox/tfidf.hpp"
#include "mmtox/video.hpp"

namespace mmtox {

// ---------------------------------------------------------------------------
// TOML subset: [tables], dotted and quoted keys, basic strings, integers,
// floats, booleans and single- or multi-line arrays of strings. Keys are
// flattened to their full dotted path.
// ---------------------------------------------------------------------------

using TomlValue = std::variant<bool, std::int64_t, double, std::string, std::vector<std::string>>;
using TomlTable = std::map<std::string, TomlValue>;

namespace toml {

struct Cursor {
  std::string_view s;
  std::size_t i = 0;
  int line = 1;

  bool done() const { return i >= s.size(); }
  char peek() const { return done() ? '\0' : s[i]; }
  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line) + ": " + what);
  }
  void skip_ws() {
    while (!done() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  void skip_comment() {
    skip_ws();
    if (peek() == '#')
      while (!done() && s[i] != '\n') ++i;
  }
  /// Whitespace, comments and newlines.
  void skip_blank() {
    for (;;) {
      skip_comment();
      if (peek() == '\n') {
        ++i;
        ++line;
        continue;
      }
      if (peek() == '\r') {
        ++i;
        continue;
      }
      return;
    }
  }
  void end_of_line() {
    skip_comment();
    if (peek() == '\r') ++i;
    if (done()) return;
    if (peek() != '\n') fail("unexpected text after value");
    ++i;
    ++line;
  }
};

inline std::string parse_string(Cursor& c) {
  if (c.peek() == '\'') {  // literal string, no escapes
    const auto end = c.s.find_first_of("'\n", c.i + 1);
    if (end == std::string_view::npos || c.s[end] != '\'') c.fail("unterminated string");
    std::string out(c.s.substr(c.i + 1, end - c.i - 1));
    c.i = end + 1;
    return out;
  }
  if (c.peek() != '"') c.fail("expected '\"'");
  ++c.i;
  std::string out;
  while (!c.done() && c.peek() != '"') {
    char ch = c.s[c.i++];
    if (ch == '\n') c.fail("unterminated string");
    if (ch != '\\') {
      out.push_back(ch);
      continue;
    }
    if (c.done()) c.fail("unterminated escape");
    ch = c.s[c.i++];
    switch (ch) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      case 'r': out.push_back('\r'); break;
      case 'u': {
        if (c.i + 4 > c.s.size()) c.fail("short \\u escape");
        unsigned cp = 0;
        auto [p, ec] = std::from_chars(c.s.data() + c.i, c.s.data() + c.i + 4, cp, 16);
        if (ec != std::errc() || p != c.s.data() + c.i + 4) c.fail("bad \\u escape");
        c.i += 4;
        utf8_append(out, static_cast<char32_t>(cp));
        break;
      }
      default: c.fail(std::string("unknown escape \\") + ch);
    }
  }
  if (c.done()) c.fail("unterminated string");
  ++c.i;
  return out;
}

inline std::string parse_key_part(Cursor& c) {
  c.skip_ws();
  if (c.peek() == '"' || c.peek() == '\'') return parse_string(c);
  std::string k;
  while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) || c.peek() == '_' || c.peek() == '-'))
    k.push_back(c.s[c.i++]);
  if (k.empty()) c.fail("expected a key");
  return k;
}

inline std::string parse_key(Cursor& c) {
  std::string key = parse_key_part(c);
  for (;;) {
    c.skip_ws();
    if (c.peek() != '.') return key;
    ++c.i;
    key += "." + parse_key_part(c);
  }
}

inline TomlValue parse_value(Cursor& c) {
  c.skip_ws();
  const char ch = c.peek();
  if (ch == '"' || ch == '\'') return parse_string(c);
  if (ch == '[') {
    ++c.i;
    std::vector<std::string> items;
    for (;;) {
      c.skip_blank();
      if (c.peek() == ']') {
        ++c.i;
        return items;
      }
      if (c.peek() != '"' && c.peek() != '\'') c.fail("arrays may only hold strings");
      items.push_back(parse_string(c));
      c.skip_blank();
      if (c.peek() == ',') {
        ++c.i;
        continue;
      }
      if (c.peek() != ']') c.fail("expected ',' or ']' in array");
    }
  }
  std::string tok;
  while (!c.done() && c.peek() != '\n' && c.peek() != '\r' && c.peek() != '#' && c.peek() != ' ' &&
         c.peek() != '\t')
    tok.push_back(c.s[c.i++]);
  if (tok == "true") return true;
  if (tok == "false") return false;
  std::string digits;
  for (char d : tok)
    if (d != '_') digits.push_back(d);
  if (digits.empty()) c.fail("missing value");
  const bool is_float = digits.find_first_of(".eE") != std::string::npos || digits == "inf" || digits == "nan";
  if (is_float) {
    try {
      std::size_t used = 0;
      const double v = std::stod(digits, &used);
      if (used == digits.size()) return v;
    } catch (const std::exception&) {
    }
    c.fail("bad number '" + tok + "'");
  }
  std::int64_t v = 0;
  const char* b = digits.data();
  const char* e = b + digits.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) c.fail("bad value '" + tok + "'");
  return v;
}

}  // namespace toml

inline TomlTable parse_toml(std::string_view text) {
  TomlTable out;
  toml::Cursor c{text};
  std::string table;
  for (;;) {
    c.skip_blank();
    if (c.done()) return out;
    if (c.peek() == '[') {
      ++c.i;
      if (c.peek() == '[') c.fail("arrays of tables are not supported");
      table = toml::parse_key(c);
      c.skip_ws();
      if (c.peek() != ']') c.fail("expected ']'");
      ++c.i;
      c.end_of_line();
      continue;
    }
    const int line = c.line;
    auto key = toml::parse_key(c);
    c.skip_ws();
    if (c.peek() != '=') c.fail("expected '='");
    ++c.i;
    auto value = toml::parse_value(c);
    c.end_of_line();
    const auto full = table.empty() ? key : table + "." + key;
    if (!out.emplace(full, std::move(value)).second)
      throw ConfigError("config line " + std::to_string(line) + ": duplicate key " + full);
  }
}

namespace toml {

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(ch);
    }
  }
  return out + "\"";
}

inline std::string format_value(const TomlValue& v) {
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    std::string s;
    for (int precision = 15; precision <= 17; ++precision) {
      std::ostringstream os;
      os << std::setprecision(precision) << *d;
      s = os.str();
      if (std::stod(s) == *d) break;
    }
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
  }
  if (const auto* s = std::get_if<std::string>(&v)) return quote(*s);
  std::string out = "[";
  const auto& arr = std::get<std::vector<std::string>>(v);
  for (std::size_t k = 0; k < arr.size(); ++k) out += (k ? ", " : "") + quote(arr[k]);
  return out + "]";
}

}  // namespace toml

/// Writes root keys first, then one [table] per first key segment, keys sorted.
inline std::string serialize_toml(const TomlTable& table) {
  std::map<std::string, std::vector<std::pair<std::string, const TomlValue*>>> sections;
  for (const auto& [k, v] : table) {
    const auto dot = k.find('.');
    if (dot == std::string::npos) {
      sections[""].emplace_back(k, &v);
    } else {
      sections[k.substr(0, dot)].emplace_back(k.substr(dot + 1), &v);
    }
  }
  std::string out;
  for (const auto& [name, entries] : sections) {
    if (!name.empty()) out += (out.empty() ? "" : "\n") + std::string("[") + name + "]\n";
    for (const auto& [k, v] : entries) out += k + " = " + toml::format_value(*v) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Campaign configuration
// ---------------------------------------------------------------------------

enum class ImageAssignment { Random, AVision, BVision };

inline std::string to_string(ImageAssignment a) {
  switch (a) {
    case ImageAssignment::Random: return "random";
    case ImageAssignment::AVision: return "a_vision";
    case ImageAssignment::BVision: return "b_vision";
  }
  return "random";
}

inline ImageAssignment parse_image_assignment(std::string_view s) {
  if (s == "random") return ImageAssignment::Random;
  if (s == "a_vision") return ImageAssignment::AVision;
  if (s == "b_vision") return ImageAssignment::BVision;
  throw ConfigError("image_assignment must be random, a_vision or b_vision, not " + std::string(s));
}

struct ProviderSelection {
  std::string image = "stub";
  std::string recognizer = "stub";
  std::string tts = "stub";
  std::string annotator = "stub";
  std::string moderator = "mock";

  bool operator==(const ProviderSelection&) const = default;

  /// Sets one provider from "name=value"; throws ConfigError.
  void assign(std::string_view spec) {
    const auto eq = spec.find('=');
    if (eq == std::string_view::npos) throw ConfigError("--provider expects name=url|stub, got " + std::string(spec));
    const auto name = trim(spec.substr(0, eq));
    auto value = trim(spec.substr(eq + 1));
    if (value.empty()) throw ConfigError("empty provider value for " + name);
    if (name == "image") {
      image = value;
    } else if (name == "recognizer") {
      recognizer = value;
    } else if (name == "tts") {
      tts = value;
    } else if (name == "annotator") {
      annotator = value;
    } else if (name == "moderator") {
      moderator = value;
    } else {
      throw ConfigError("unknown provider '" + name + "'");
    }
  }
};

struct MockSettings {
  std::filesystem::path banned;  // empty: bundled list
  bool reads_plain_text = true;
  bool reads_image_text = true;
  bool reads_audio_transcript = true;
  bool reads_image_salient_label = true;

  bool operator==(const MockSettings&) const = default;
};

struct CampaignConfig {
  std::optional<std::uint64_t> seed;
  std::string run_id;  // empty: "seed-<seed>"
  std::filesystem::path output_dir = "runs";
  std::filesystem::path data_dir;  // empty: the bundled data directory
  std::size_t jobs = 1;

  std::vector<Language> languages{kAllLanguages.begin(), kAllLanguages.end()};
  std::vector<ToxicityCategory> categories{kAllCategories.begin(), kAllCategories.end()};
  std::map<std::string, std::filesystem::path> corpora;  // "en.hate" -> file
  std::string csv_column = "text";

  std::size_t top_k = kDefaultTopKeywords;
  std::size_t support_sentences = kDefaultSupportSentences;
  std::size_t pairs_per_category = kDefaultPairsPerCategory;
  std::size_t contacts_per_prefix = 5;
  std::string hate_middle = "are";
  std::string porn_middle = "your";

  std::vector<Combo> combos{kCampaignCombos.begin(), kCampaignCombos.end()};
  ImageAssignment image_assignment = ImageAssignment::Random;
  std::size_t image_candidates = kDefaultImageCandidates;
  double area_low = kDefaultAreaLow;
  double area_high = kDefaultAreaHigh;
  double overlap = kDefaultOverlapThreshold;

  VideoTimings video;
  EncoderConfig encoder;

  ProviderSelection providers;
  HttpOptions http;
  std::vector<std::string> toxic_labels;
  bool send_manifest = false;
  MockSettings mock;

  std::size_t variant_seeds = 20;

  bool operator==(const CampaignConfig& o) const {
    auto tie = [](const CampaignConfig& c) {
      return std::tie(c.seed, c.run_id, c.output_dir, c.data_dir, c.jobs, c.languages, c.categories, c.corpora,
                      c.csv_column, c.top_k, c.support_sentences, c.pairs_per_category, c.contacts_per_prefix,
                      c.hate_middle, c.porn_middle, c.combos, c.image_assignment, c.image_candidates, c.area_low,
                      c.area_high, c.overlap, c.providers, c.toxic_labels, c.send_manifest, c.mock,
                      c.variant_seeds);
    };
    const auto& v = video;
    const auto& w = o.video;
    return tie(*this) == tie(o) && v.visual_seconds == w.visual_seconds && v.middle_seconds == w.middle_seconds &&
           v.fps == w.fps && v.width == w.width && v.height == w.height &&
           encoder.executable == o.encoder.executable && encoder.command == o.encoder.command &&
           encoder.output_name == o.encoder.output_name && http.timeout_seconds == o.http.timeout_seconds &&
           http.retries == o.http.retries && http.requests_per_second == o.http.requests_per_second;
  }

  std::filesystem::path effective_data_dir() const { return data_dir.empty() ? default_data_dir() : data_dir; }
  std::string effective_run_id() const {
    if (!run_id.empty()) return run_id;
    return seed ? "seed-" + std::to_string(*seed) : "unseeded";
  }
  std::filesystem::path run_dir() const { return output_dir / effective_run_id(); }
  TemplateOptions template_options() const { return {hate_middle, porn_middle}; }
  LayoutParams layout_params() const { return {area_low, area_high, overlap}; }

  static std::string corpus_key(Language l, ToxicityCategory c) { return to_string(l) + "." + to_string(c); }

  /// Fail-fast checks; throws ConfigError.
  void validate(bool require_seed = true) const {
    if (require_seed && !seed) throw ConfigError("a campaign seed is required (--seed or seed = ...)");
    if (languages.empty()) throw ConfigError("no languages selected");
    if (categories.empty()) throw ConfigError("no categories selected");
    if (combos.empty()) throw ConfigError("no combos selected");
    for (Combo c : combos)
      if (c == Combo::VideoText || c == Combo::VideoAudio)
        throw ConfigError(to_string(c) + " is only available through the variant experiment");
    for (Language l : languages)
      for (ToxicityCategory c : categories) {
        const auto key = corpus_key(l, c);
        auto it = corpora.find(key);
        if (it == corpora.end()) throw ConfigError("no corpus configured for " + key);
        if (!std::filesystem::is_regular_file(it->second))
          throw ConfigError("corpus for " + key + " not found: " + it->second.string());
      }
    if (overlap < 0 || overlap > 1) throw ConfigError("overlap threshold must lie in [0, 1]");
    if (!(area_low > 0) || area_low > area_high) throw ConfigError("need 0 < area_low <= area_high");
    if (top_k == 0 || support_sentences == 0 || image_candidates == 0)
      throw ConfigError("top_k, support_sentences and image_candidates must be positive");
    if (jobs == 0) throw ConfigError("jobs must be positive");
    if (video.fps <= 0 || !(video.visual_seconds > 0) || !(video.middle_seconds > 0))
      throw ConfigError("video timings must be positive");
    if (video.width < 16 || video.height < 16) throw ConfigError("video frames must be at least 16x16");
    if (http.retries < 0 || !(http.timeout_seconds > 0) || http.requests_per_second < 0)
      throw ConfigError("bad HTTP settings");
  }
};

namespace detail {

class TomlReader {
 public:
  TomlReader(const TomlTable& t, std::filesystem::path base) : t_(t), base_(std::move(base)) {}

  template <typename T>
  const T* find(const std::string& key) {
    auto it = t_.find(key);
    if (it == t_.end()) return nullptr;
    used_.insert(key);
    const T* v = std::get_if<T>(&it->second);
    if (!v) throw ConfigError("config key " + key + " has the wrong type");
    return v;
  }
  void str(const std::string& key, std::string& out) {
    if (auto* v = find<std::string>(key)) out = *v;
  }
  void path(const std::string& key, std::filesystem::path& out) {
    if (auto* v = find<std::string>(key)) out = resolve(*v);
  }
  void boolean(const std::string& key, bool& out) {
    if (auto* v = find<bool>(key)) out = *v;
  }
  template <typename I>
  void integer(const std::string& key, I& out) {
    if (auto* v = find<std::int64_t>(key)) {
      if (*v < 0) throw ConfigError("config key " + key + " must not be negative");
      out = static_cast<I>(*v);
    }
  }
  void real(const std::string& key, double& out) {
    auto it = t_.find(key);
    if (it == t_.end()) return;
    used_.insert(key);
    if (const auto* d = std::get_if<double>(&it->second)) {
      out = *d;
    } else if (const auto* i = std::get_if<std::int64_t>(&it->second)) {
      out = static_cast<double>(*i);
    } else {
      throw ConfigError("config key " + key + " must be a number");
    }
  }
  void list(const std::string& key, std::vector<std::string>& out) {
    if (auto* v = find<std::vector<std::string>>(key)) out = *v;
  }
  std::filesystem::path resolve(const std::string& p) const {
    if (p.empty()) return {};
    std::filesystem::path path(p);
    return path.is_absolute() || base_.empty() ? path : (base_ / path).lexically_normal();
  }
  void mark(const std::string& key) { used_.insert(key); }
  void reject_unknown() const {
    for (const auto& [k, _] : t_)
      if (!used_.count(k)) throw ConfigError("unknown config key " + k);
  }

 private:
  const TomlTable& t_;
  std::filesystem::path base_;
  std::set<std::string> used_;
};

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace detail

inline std::vector<Language> parse_languages(const std::vector<std::string>& names) {
  std::vector<Language> out;
  for (const auto& n : names) {
    try {
      out.push_back(parse_language(n));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

inline std::vector<ToxicityCategory> parse_categories(const std::vector<std::string>& names) {
  std::vector<ToxicityCategory> out;
  for (const auto& n : names) out.push_back(parse_category(n));
  return out;
}

inline std::vector<Combo> parse_combos(const std::vector<std::string>& names) {
  std::vector<Combo> out;
  for (const auto& n : names) out.push_back(parse_combo(n));
  return out;
}

/// Relative paths resolve against base_dir (the config file's directory).
inline CampaignConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {}) {
  const auto table = parse_toml(text);
  detail::TomlReader r(table, base_dir);
  CampaignConfig c;
  if (auto* s = r.find<std::int64_t>("seed")) {
    if (*s < 0) throw ConfigError("seed must not be negative");
    c.seed = static_cast<std::uint64_t>(*s);
  } else if (auto it = table.find("seed"); it != table.end()) {
    throw ConfigError("seed must be an integer");
  }
  r.str("run_id", c.run_id);
  r.path("output_dir", c.output_dir);
  r.path("data_dir", c.data_dir);
  r.integer("jobs", c.jobs);
  if (auto* v = r.find<std::vector<std::string>>("languages")) c.languages = parse_languages(*v);
  if (auto* v = r.find<std::vector<std::string>>("categories")) c.categories = parse_categories(*v);
  if (auto* v = r.find<std::vector<std::string>>("combos")) c.combos = parse_combos(*v);
  std::string assignment = to_string(c.image_assignment);
  r.str("image_assignment", assignment);
  c.image_assignment = parse_image_assignment(assignment);

  for (const auto& [key, value] : table) {
    if (key.rfind("corpora.", 0) != 0 || key == "corpora.csv_column") continue;
    const auto* p = std::get_if<std::string>(&value);
    if (!p) throw ConfigError("corpus path " + key + " must be a string");
    r.mark(key);
    c.corpora[key.substr(8)] = r.resolve(*p);
  }
  r.str("corpora.csv_column", c.csv_column);

  r.integer("mining.top_k", c.top_k);
  r.integer("mining.support_sentences", c.support_sentences);
  r.integer("pairs.per_category", c.pairs_per_category);
  r.integer("pairs.contacts_per_prefix", c.contacts_per_prefix);
  r.str("pairs.hate_middle", c.hate_middle);
  r.str("pairs.porn_middle", c.porn_middle);

  r.integer("layout.image_candidates", c.image_candidates);
  r.real("layout.area_low", c.area_low);
  r.real("layout.area_high", c.area_high);
  r.real("layout.overlap", c.overlap);

  r.real("video.visual_seconds", c.video.visual_seconds);
  r.real("video.middle_seconds", c.video.middle_seconds);
  r.integer("video.fps", c.video.fps);
  r.integer("video.width", c.video.width);
  r.integer("video.height", c.video.height);
  r.str("video.encoder", c.encoder.executable);
  r.str("video.encoder_command", c.encoder.command);
  r.str("video.encoder_output", c.encoder.output_name);

  r.str("providers.image", c.providers.image);
  r.str("providers.recognizer", c.providers.recognizer);
  r.str("providers.tts", c.providers.tts);
  r.str("providers.annotator", c.providers.annotator);
  r.str("providers.moderator", c.providers.moderator);
  r.real("providers.timeout", c.http.timeout_seconds);
  r.integer("providers.retries", c.http.retries);
  r.real("providers.rate_limit", c.http.requests_per_second);
  r.list("providers.toxic_labels", c.toxic_labels);
  r.boolean("providers.send_manifest", c.send_manifest);

  r.path("mock.banned", c.mock.banned);
  r.boolean("mock.reads_plain_text", c.mock.reads_plain_text);
  r.boolean("mock.reads_image_text", c.mock.reads_image_text);
  r.boolean("mock.reads_audio_transcript", c.mock.reads_audio_transcript);
  r.boolean("mock.reads_image_salient_label", c.mock.reads_image_salient_label);

  r.integer("variant.seeds_per_category", c.variant_seeds);
  r.reject_unknown();
  return c;
}

inline CampaignConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  return parse_config(text, path.parent_path());
}

inline std::string serialize_config(const CampaignConfig& c) {
  TomlTable t;
  auto str = [](const std::filesystem::path& p) { return p.string(); };
  if (c.seed) t["seed"] = static_cast<std::int64_t>(*c.seed);
  t["run_id"] = c.run_id;
  t["output_dir"] = str(c.output_dir);
  t["data_dir"] = str(c.data_dir);
  t["jobs"] = static_cast<std::int64_t>(c.jobs);
  std::vector<std::string> v;
  for (auto l : c.languages) v.push_back(to_string(l));
  t["languages"] = v;
  v.clear();
  for (auto x : c.categories) v.push_back(to_string(x));
  t["categories"] = v;
  v.clear();
  for (auto x : c.combos) v.push_back(to_string(x));
  t["combos"] = v;
  t["image_assignment"] = to_string(c.image_assignment);
  for (const auto& [k, p] : c.corpora) t["corpora." + k] = str(p);
  t["corpora.csv_column"] = c.csv_column;
  t["mining.top_k"] = static_cast<std::int64_t>(c.top_k);
  t["mining.support_sentences"] = static_cast<std::int64_t>(c.support_sentences);
  t["pairs.per_category"] = static_cast<std::int64_t>(c.pairs_per_category);
  t["pairs.contacts_per_prefix"] = static_cast<std::int64_t>(c.contacts_per_prefix);
  t["pairs.hate_middle"] = c.hate_middle;
  t["pairs.porn_middle"] = c.porn_middle;
  t["layout.image_candidates"] = static_cast<std::int64_t>(c.image_candidates);
  t["layout.area_low"] = c.area_low;
  t["layout.area_high"] = c.area_high;
  t["layout.overlap"] = c.overlap;
  t["video.visual_seconds"] = c.video.visual_seconds;
  t["video.middle_seconds"] = c.video.middle_seconds;
  t["video.fps"] = static_cast<std::int64_t>(c.video.fps);
  t["video.width"] = static_cast<std::int64_t>(c.video.width);
  t["video.height"] = static_cast<std::int64_t>(c.video.height);
  t["video.encoder"] = c.encoder.executable;
  t["video.encoder_command"] = c.encoder.command;
  t["video.encoder_output"] = c.encoder.output_name;
  t["providers.image"] = c.providers.image;
  t["providers.recognizer"] = c.providers.recognizer;
  t["providers.tts"] = c.providers.tts;
  t["providers.annotator"] = c.providers.annotator;
  t["providers.moderator"] = c.providers.moderator;
  t["providers.timeout"] = c.http.timeout_seconds;
  t["providers.retries"] = static_cast<std::int64_t>(c.http.retries);
  t["providers.rate_limit"] = c.http.requests_per_second;
  t["providers.toxic_labels"] = c.toxic_labels;
  t["providers.send_manifest"] = c.send_manifest;
  t["mock.banned"] = str(c.mock.banned);
  t["mock.reads_plain_text"] = c.mock.reads_plain_text;
  t["mock.reads_image_text"] = c.mock.reads_image_text;
  t["mock.reads_audio_transcript"] = c.mock.reads_audio_transcript;
  t["mock.reads_image_salient_label"] = c.mock.reads_image_salient_label;
  t["variant.seeds_per_category"] = static_cast<std::int64_t>(c.variant_seeds);
  return serialize_toml(t);
}

}  // namespace mmtox
