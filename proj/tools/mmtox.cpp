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

// mmtox: command-line front end for multimodal moderation test campaigns.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmtox/mmtox.hpp"

namespace {

using namespace mmtox;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitProvider = 4;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out;
  std::string run_id;
  std::string languages;
  std::string categories;
  std::string combos;
  std::vector<std::string> providers;
  std::optional<std::size_t> top_k;
  std::optional<std::size_t> pairs;
  std::string image_assignment;
  bool force = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "Campaign config file (TOML)");
  cmd->add_option("--seed", f.seed, "Campaign seed (required unless set in the config)");
  cmd->add_option("--jobs", f.jobs, "Worker threads");
  cmd->add_option("--out", f.out, "Output directory (runs are created under it)");
  cmd->add_option("--run-id", f.run_id, "Run directory name (default seed-<seed>)");
  cmd->add_option("--languages", f.languages, "Comma list: en,zh");
  cmd->add_option("--categories", f.categories, "Comma list: hate,advertisement,pornography");
  cmd->add_option("--combos", f.combos, "Comma list: Image-VT,Video-VT,Video-VA,Video-AT,Video-VAT");
  cmd->add_option("--provider", f.providers, "name=url|stub for image, recognizer, tts, annotator, moderator");
  cmd->add_option("--top-k", f.top_k, "Keywords mined per corpus");
  cmd->add_option("--pairs", f.pairs, "Keyword pairs per (language, category)");
  cmd->add_option("--image-assignment", f.image_assignment, "random, a_vision or b_vision");
  cmd->add_flag("--force", f.force, "Recompute stages whose outputs already exist");
}

CampaignConfig build_config(const Flags& f) {
  CampaignConfig c;
  if (!f.config.empty()) {
    c = load_config(f.config);
  } else {
    // Without a config file the bundled sample corpora are used.
    for (Language l : kAllLanguages)
      for (ToxicityCategory cat : kAllCategories)
        c.corpora[CampaignConfig::corpus_key(l, cat)] =
            c.effective_data_dir() / "sample" / to_string(l) / (to_string(cat) + ".txt");
  }
  if (f.seed) c.seed = *f.seed;
  if (f.jobs) c.jobs = *f.jobs;
  if (!f.out.empty()) c.output_dir = f.out;
  if (!f.run_id.empty()) c.run_id = f.run_id;
  if (!f.languages.empty()) c.languages = parse_languages(detail::split_list(f.languages));
  if (!f.categories.empty()) c.categories = parse_categories(detail::split_list(f.categories));
  if (!f.combos.empty()) c.combos = parse_combos(detail::split_list(f.combos));
  for (const auto& p : f.providers) c.providers.assign(p);
  if (f.top_k) c.top_k = *f.top_k;
  if (f.pairs) c.pairs_per_category = *f.pairs;
  if (!f.image_assignment.empty()) c.image_assignment = parse_image_assignment(f.image_assignment);
  c.validate();
  return c;
}

void print_efr(const EfrSummary& s) {
  std::printf("%-14s %-3s %-6s %-10s %9s %13s %8s\n", "category", "lng", "kind", "combo", "generated",
              "misclassified", "EFR");
  for (const auto& r : s.rows)
    std::printf("%-14s %-3s %-6s %-10s %9llu %13llu %7s%%\n", to_string(r.category).c_str(),
                to_string(r.language).c_str(), to_string(r.artifact_kind).c_str(), to_string(r.combo).c_str(),
                static_cast<unsigned long long>(r.generated), static_cast<unsigned long long>(r.misclassified),
                r.efr_percent().c_str());
  std::printf("total: %llu generated, %llu misclassified, EFR %s%%, %llu provider errors excluded\n",
              static_cast<unsigned long long>(s.generated), static_cast<unsigned long long>(s.misclassified),
              s.efr_percent().c_str(), static_cast<unsigned long long>(s.provider_errors));
}

int cmd_mine(const Flags& f) {
  const auto c = build_config(f);
  const RunPaths paths(c.run_dir());
  const auto providers = make_providers(c, paths);
  for (const auto& m : stage_mine(c, providers, paths, f.force))
    std::printf("%s: %zu candidates\n", paths.candidates(m.language, m.category).string().c_str(),
                m.candidates.size());
  return kExitOk;
}

int cmd_pairs(const Flags& f) {
  const auto c = build_config(f);
  const RunPaths paths(c.run_dir());
  const auto providers = make_providers(c, paths);
  const auto pairs = stage_pairs(c, stage_mine(c, providers, paths, false), paths, f.force);
  const auto seeds = stage_seeds(pairs, paths);
  for (const auto& ps : pairs) {
    std::printf("%s: %zu pairs\n", paths.pairs(ps.language, ps.category).string().c_str(), ps.pairs.size());
    if (ps.pairs.empty())
      std::fprintf(stderr, "warning: no valid pairs for %s-%s\n", to_string(ps.language).c_str(),
                   to_string(ps.category).c_str());
  }
  std::printf("%zu seed sentences\n", seeds.size());
  return kExitOk;
}

int cmd_generate(const Flags& f) {
  const auto c = build_config(f);
  const RunPaths paths(c.run_dir());
  const auto providers = make_providers(c, paths);
  const auto seeds = prepare_seeds(c, providers, paths, f.force);
  if (seeds.empty()) std::fprintf(stderr, "warning: no valid keyword pairs; no test cases generated\n");
  const auto r = stage_generate(c, providers, paths, seeds, f.force);
  std::printf("seeds: %zu kept, %zu dropped by the toxicity collection\n", r.collection.kept.size(),
              r.collection.dropped.size());
  std::set<std::string> groups;
  for (const auto& [g, _] : r.cases_by_group) groups.insert(g);
  for (const auto& [g, _] : r.discards_by_group) groups.insert(g);
  for (const auto& g : groups) {
    auto count = [&](const std::map<std::string, std::size_t>& m) {
      auto it = m.find(g);
      return it == m.end() ? std::size_t{0} : it->second;
    };
    std::printf("%-18s %5zu cases %5zu discarded\n", g.c_str(), count(r.cases_by_group), count(r.discards_by_group));
  }
  std::printf("%zu cases under %s\n", r.case_ids.size(), paths.cases().string().c_str());
  const bool all_failed = !r.collection.dropped.empty() && r.collection.kept.empty() &&
                          std::all_of(r.collection.dropped.begin(), r.collection.dropped.end(),
                                      [](const DroppedSeed& d) { return is_failure(d.verdict); });
  if (all_failed) {
    std::fprintf(stderr, "error: every moderation call failed during seed collection\n");
    return kExitProvider;
  }
  return kExitOk;
}

int cmd_test(const Flags& f) {
  const auto c = build_config(f);
  const RunPaths paths(c.run_dir());
  if (!std::filesystem::exists(paths.cases())) throw IoError("no cases under " + paths.cases().string());
  const auto providers = make_providers(c, paths);
  const auto r = stage_test(c, providers, paths, f.force);
  print_efr(r.efr);
  std::printf("%zu error reports in %s\n", r.reports.size(), paths.error_reports().string().c_str());
  if (r.total_provider_failure()) {
    std::fprintf(stderr, "error: every moderation call failed\n");
    return kExitProvider;
  }
  return kExitOk;
}

int cmd_report(const Flags& f) {
  const auto c = build_config(f);
  print_efr(stage_report(c, RunPaths(c.run_dir())));
  return kExitOk;
}

int cmd_run(const Flags& f) {
  if (int rc = cmd_generate(f); rc != kExitOk) return rc;
  return cmd_test(f);
}

int cmd_variant(const Flags& f, const std::string& name) {
  const auto c = build_config(f);
  const auto r = run_variant_experiment(c, parse_variant(name), f.force);
  std::fputs(variant_csv(r).c_str(), stdout);
  const auto& t = r.total;
  if (t.first.generated + t.second.generated == 0 && t.first.provider_errors + t.second.provider_errors > 0) {
    std::fprintf(stderr, "error: every moderation call failed\n");
    return kExitProvider;
  }
  return kExitOk;
}

MockModerationServer* g_server = nullptr;

int cmd_serve(const std::string& host, int port, const std::string& banned, const std::vector<std::string>& blind) {
  auto policy = banned.empty() ? MockPolicy::bundled() : MockPolicy::from_file(banned);
  for (const auto& ch : blind) {
    if (ch == "text") {
      policy.reads_plain_text = false;
    } else if (ch == "image_text") {
      policy.reads_image_text = false;
    } else if (ch == "audio") {
      policy.reads_audio_transcript = false;
    } else if (ch == "image_label") {
      policy.reads_image_salient_label = false;
    } else {
      throw ConfigError("unknown channel '" + ch + "' (text, image_text, audio, image_label)");
    }
  }
  MockModerationServer server(policy);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::printf("mock moderation service on http://%s:%d\n", host.c_str(), port);
  std::fflush(stdout);
  server.serve(host, port);
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multimodal toxicity test generation for content moderation services"};
  app.require_subcommand(1);
  Flags f;
  std::string variant_name;
  std::string host = "127.0.0.1";
  int port = 8089;
  std::string banned;
  std::vector<std::string> blind;

  auto* mine = app.add_subcommand("mine", "Mine and annotate keyword candidates");
  auto* pairs = app.add_subcommand("pairs", "Build keyword pairs and seed sentences");
  auto* generate = app.add_subcommand("generate", "Collect toxic seeds and generate test cases");
  auto* test = app.add_subcommand("test", "Moderate generated cases and report errors");
  auto* report = app.add_subcommand("report", "Recompute the EFR tables from the outcome log");
  auto* run = app.add_subcommand("run", "generate followed by test");
  auto* variant = app.add_subcommand("variant", "Run a variant experiment (position or modality)");
  variant->add_option("name", variant_name, "position | modality")->required();
  for (auto* cmd : {mine, pairs, generate, test, report, run, variant}) add_common(cmd, f);
  auto* serve = app.add_subcommand("serve-mock", "Serve the mock moderator over HTTP");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port");
  serve->add_option("--banned", banned, "Banned word list (default: bundled)");
  serve->add_option("--blind", blind, "Channels the mock cannot read: text, image_text, audio, image_label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (*mine) return cmd_mine(f);
    if (*pairs) return cmd_pairs(f);
    if (*generate) return cmd_generate(f);
    if (*test) return cmd_test(f);
    if (*report) return cmd_report(f);
    if (*run) return cmd_run(f);
    if (*variant) return cmd_variant(f, variant_name);
    if (*serve) return cmd_serve(host, port, banned, blind);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const EmptyCorpusError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const ProviderError& e) {
    std::fprintf(stderr, "provider error: %s\n", e.what());
    return kExitProvider;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
