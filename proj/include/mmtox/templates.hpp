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

#include <array>
#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <variant>
#include <vector>

#include "mmtox/annotate.hpp"
#include "mmtox/corpus.hpp"

namespace mmtox {

inline constexpr std::size_t kDefaultPairsPerCategory = 100;

enum class ContactPrefix { Tel, Email, WhatsApp, Ins };

inline constexpr std::array<ContactPrefix, 4> kAllContactPrefixes = {
    ContactPrefix::Tel, ContactPrefix::Email, ContactPrefix::WhatsApp, ContactPrefix::Ins};

inline std::string to_string(ContactPrefix p) {
  switch (p) {
    case ContactPrefix::Tel: return "Tel";
    case ContactPrefix::Email: return "Email";
    case ContactPrefix::WhatsApp: return "WhatsApp";
    case ContactPrefix::Ins: return "Ins";
  }
  return "Tel";
}

/// Maps a keyword to the contact way it names, if any ("tel", "phone",
/// "电话" -> Tel, ...).
inline std::optional<ContactPrefix> contact_prefix_of(std::string_view token) {
  static const std::map<std::string, ContactPrefix, std::less<>> names = {
      {"tel", ContactPrefix::Tel},           {"phone", ContactPrefix::Tel},
      {"telephone", ContactPrefix::Tel},     {"电话", ContactPrefix::Tel},
      {"email", ContactPrefix::Email},       {"e-mail", ContactPrefix::Email},
      {"邮箱", ContactPrefix::Email},        {"whatsapp", ContactPrefix::WhatsApp},
      {"ins", ContactPrefix::Ins},           {"instagram", ContactPrefix::Ins}};
  auto it = names.find(ascii_lower(token));
  if (it == names.end()) return std::nullopt;
  return it->second;
}

inline ContactPrefix parse_contact_prefix(std::string_view s) {
  if (auto p = contact_prefix_of(s)) return *p;
  throw FormatError("unknown contact prefix: " + std::string(s));
}

struct ContactInfo {
  ContactPrefix prefix = ContactPrefix::Tel;
  std::string value;

  bool operator==(const ContactInfo&) const = default;
};

using SlotB = std::variant<WordAnnotation, ContactInfo>;

struct KeywordPair {
  WordAnnotation a;
  SlotB b;
  ToxicityCategory category = ToxicityCategory::Hate;
  std::string middle;
  Language language = Language::En;

  std::string b_text() const {
    if (const auto* c = std::get_if<ContactInfo>(&b)) return to_string(c->prefix) + ": " + c->value;
    return std::get<WordAnnotation>(b).token;
  }

  bool operator==(const KeywordPair&) const = default;
};

struct SeedSentence {
  std::string text;
  KeywordPair pair;
  std::string template_id;
};

/// Connective choices. The defaults resolve "is/are" to "are" and "your/my"
/// to "your".
struct TemplateOptions {
  std::string hate_middle = "are";
  std::string porn_middle = "your";
};

inline std::string middle_word(ToxicityCategory category, const TemplateOptions& options = {}) {
  switch (category) {
    case ToxicityCategory::Hate: return options.hate_middle;
    case ToxicityCategory::Advertisement: return ":";
    case ToxicityCategory::Pornography: return options.porn_middle;
  }
  return {};
}

inline std::string middle_word(const KeywordPair& pair) { return pair.middle; }

inline std::string template_id(ToxicityCategory category) {
  switch (category) {
    case ToxicityCategory::Hate: return "hate/A-are-B";
    case ToxicityCategory::Advertisement: return "advertisement/A:B";
    case ToxicityCategory::Pornography: return "pornography/A-your-B";
  }
  return {};
}

// --- slot rules ------------------------------------------------------------

inline bool fits_slot_a(ToxicityCategory category, const WordAnnotation& a) {
  switch (category) {
    case ToxicityCategory::Hate: return a.pos == Pos::Noun && a.ner == Ner::GroupName;
    case ToxicityCategory::Advertisement:
      return a.pos == Pos::Noun && !contact_prefix_of(a.token).has_value();
    case ToxicityCategory::Pornography: return a.pos == Pos::Verb;
  }
  return false;
}

inline bool fits_slot_b(ToxicityCategory category, const SlotB& b) {
  switch (category) {
    case ToxicityCategory::Hate: {
      const auto* w = std::get_if<WordAnnotation>(&b);
      return w && (w->pos == Pos::Noun || w->pos == Pos::Adjective) &&
             w->sentiment == Sentiment::Negative;
    }
    case ToxicityCategory::Advertisement: {
      const auto* c = std::get_if<ContactInfo>(&b);
      return c && !c->value.empty();
    }
    case ToxicityCategory::Pornography: {
      const auto* w = std::get_if<WordAnnotation>(&b);
      return w && w->pos == Pos::Noun;
    }
  }
  return false;
}

/// The category's pair predicate, including the A != B requirement.
inline bool satisfies_rule(const KeywordPair& pair) {
  if (!fits_slot_a(pair.category, pair.a) || !fits_slot_b(pair.category, pair.b)) return false;
  if (const auto* w = std::get_if<WordAnnotation>(&pair.b))
    if (w->token == pair.a.token) return false;
  return true;
}

/// Filters the A x B product by the category rules. A-major order, each side
/// kept in the order given (callers pass candidates by descending score);
/// truncated to limit.
inline std::vector<KeywordPair> extract_pairs(ToxicityCategory category, Language language,
                                              std::span<const WordAnnotation> candidates_a,
                                              std::span<const SlotB> candidates_b,
                                              std::size_t limit = kDefaultPairsPerCategory,
                                              const TemplateOptions& options = {}) {
  std::vector<KeywordPair> out;
  const auto middle = middle_word(category, options);
  for (const auto& a : candidates_a) {
    if (out.size() >= limit) break;
    if (!fits_slot_a(category, a)) continue;
    for (const auto& b : candidates_b) {
      if (out.size() >= limit) break;
      KeywordPair pair{a, b, category, middle, language};
      if (satisfies_rule(pair)) out.push_back(std::move(pair));
    }
  }
  return out;
}

/// Word-slot convenience: both slots drawn from the same annotated list.
inline std::vector<KeywordPair> extract_pairs(ToxicityCategory category, Language language,
                                              std::span<const WordAnnotation> candidates,
                                              std::size_t limit = kDefaultPairsPerCategory,
                                              const TemplateOptions& options = {}) {
  std::vector<SlotB> b(candidates.begin(), candidates.end());
  return extract_pairs(category, language, candidates, b, limit, options);
}

inline SeedSentence render_seed(const KeywordPair& pair) {
  require(satisfies_rule(pair), "render_seed: pair violates its category rule");
  SeedSentence seed;
  seed.pair = pair;
  seed.template_id = template_id(pair.category);
  switch (pair.category) {
    case ToxicityCategory::Hate:
    case ToxicityCategory::Pornography:
      seed.text = pair.a.token + " " + pair.middle + " " + pair.b_text();
      break;
    case ToxicityCategory::Advertisement:
      seed.text = pair.a.token + pair.middle + " " + pair.b_text();
      break;
  }
  return seed;
}

/// Slot A text with the connective attached ("monkeys are", "tobacco:").
inline std::string a_with_middle(const KeywordPair& pair) {
  if (pair.category == ToxicityCategory::Advertisement) return pair.a.token + pair.middle;
  return pair.a.token + " " + pair.middle;
}

/// Slot B text with the connective attached ("are stupid", ": Tel: 123").
inline std::string b_with_middle(const KeywordPair& pair) {
  return pair.middle + " " + pair.b_text();
}

// --- contact information -----------------------------------------------------

/// Contact strings of the form "<prefix>: <value>" found in the corpus, in
/// corpus order, at most per_prefix distinct values per prefix.
inline std::vector<ContactInfo> harvest_contacts(const Corpus& corpus, std::size_t per_prefix) {
  static const std::regex pattern(
      R"(\b(tel|phone|email|whatsapp|ins|instagram)\s*(?::|\xEF\xBC\x9A)\s*([^\s,;\xEF\xBC\x8C\xE3\x80\x82]+))",
      std::regex::icase | std::regex::ECMAScript);
  std::map<ContactPrefix, std::vector<std::string>> found;
  for (const auto& d : corpus.documents) {
    for (auto it = std::sregex_iterator(d.text.begin(), d.text.end(), pattern);
         it != std::sregex_iterator(); ++it) {
      auto prefix = contact_prefix_of((*it)[1].str());
      if (!prefix) continue;
      auto value = (*it)[2].str();
      while (!value.empty() && (value.back() == '.' || value.back() == '!')) value.pop_back();
      if (value.empty()) continue;
      auto& vals = found[*prefix];
      if (vals.size() < per_prefix && std::find(vals.begin(), vals.end(), value) == vals.end())
        vals.push_back(value);
    }
  }
  std::vector<ContactInfo> out;
  for (ContactPrefix p : kAllContactPrefixes)
    for (auto& v : found[p]) out.push_back({p, v});
  return out;
}

/// Pattern-table contact value for a prefix.
inline std::string synthesize_contact_value(ContactPrefix prefix, Rng& rng) {
  static constexpr std::array<std::string_view, 8> names = {
      "deals", "shop", "vip", "promo", "sales", "offer", "best", "club"};
  static constexpr std::array<std::string_view, 4> domains = {
      "mail.example", "shop.example", "post.example", "inbox.example"};
  auto digits = [&](std::size_t n) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.uniform_index(10)));
    return s;
  };
  switch (prefix) {
    case ContactPrefix::Tel: return digits(8);
    case ContactPrefix::Email:
      return std::string(names[rng.uniform_index(names.size())]) + digits(3) + "@" +
             std::string(domains[rng.uniform_index(domains.size())]);
    case ContactPrefix::WhatsApp: return "+" + digits(11);
    case ContactPrefix::Ins:
      return "@" + std::string(names[rng.uniform_index(names.size())]) + "_" + digits(4);
  }
  return digits(8);
}

/// Candidate list for the advertisement B slot: for every prefix, harvested
/// values first, then synthesized ones up to per_prefix.
inline std::vector<SlotB> contact_candidates(const Corpus& corpus, std::size_t per_prefix, Rng& rng) {
  auto harvested = harvest_contacts(corpus, per_prefix);
  std::vector<SlotB> out;
  for (ContactPrefix p : kAllContactPrefixes) {
    std::size_t n = 0;
    std::unordered_set<std::string> seen;
    for (const auto& c : harvested) {
      if (c.prefix != p) continue;
      out.push_back(c);
      seen.insert(c.value);
      ++n;
    }
    for (int guard = 0; n < per_prefix && guard < 1000; ++guard) {
      auto v = synthesize_contact_value(p, rng);
      if (!seen.insert(v).second) continue;
      out.push_back(ContactInfo{p, std::move(v)});
      ++n;
    }
  }
  return out;
}

}  // namespace mmtox
