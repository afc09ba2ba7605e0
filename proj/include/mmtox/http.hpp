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
#include <filesystem>
#include <memory>
#include <mutex>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "mmtox/annotate.hpp"
#include "mmtox/core.hpp"
#include "mmtox/manifest.hpp"
#include "mmtox/modality.hpp"
#include "mmtox/moderation.hpp"
#include "mmtox/wav.hpp"

namespace mmtox {

/// Token bucket. rate <= 0 disables limiting.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateLimiter(double rate_per_second = 0.0, double burst = 1.0)
      : rate_(rate_per_second), burst_(std::max(1.0, burst)), tokens_(burst_), last_(Clock::now()) {}

  double rate() const { return rate_; }

  /// Blocks until a token is available.
  void acquire() {
    if (rate_ <= 0) return;
    std::unique_lock lock(mu_);
    for (;;) {
      refill();
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
  }

  bool try_acquire() {
    if (rate_ <= 0) return true;
    std::lock_guard lock(mu_);
    refill();
    if (tokens_ < 1.0) return false;
    tokens_ -= 1.0;
    return true;
  }

 private:
  void refill() {
    const auto now = Clock::now();
    tokens_ = std::min(burst_, tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
    last_ = now;
  }

  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

struct HttpOptions {
  double timeout_seconds = 10.0;
  int retries = 2;
  double requests_per_second = 0.0;
};

/// "http://host:port/base" split into the client origin and a path prefix.
struct HttpEndpoint {
  std::string origin;
  std::string base_path;

  static HttpEndpoint parse(std::string_view url) {
    const auto scheme = url.find("://");
    if (scheme == std::string_view::npos) throw ConfigError("endpoint needs a scheme: " + std::string(url));
    const auto slash = url.find('/', scheme + 3);
    HttpEndpoint e;
    e.origin = std::string(url.substr(0, slash));
    e.base_path = slash == std::string_view::npos ? "" : std::string(url.substr(slash));
    while (!e.base_path.empty() && e.base_path.back() == '/') e.base_path.pop_back();
    return e;
  }
  std::string path(std::string_view p) const { return base_path + std::string(p); }
};

namespace detail {

inline std::string base64_encode(std::string_view in) {
  static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < in.size(); i += 3) {
    const auto n = (static_cast<unsigned char>(in[i]) << 16) | (static_cast<unsigned char>(in[i + 1]) << 8) |
                   static_cast<unsigned char>(in[i + 2]);
    out += {table[(n >> 18) & 63], table[(n >> 12) & 63], table[(n >> 6) & 63], table[n & 63]};
  }
  if (i + 1 == in.size()) {
    const auto n = static_cast<unsigned char>(in[i]) << 16;
    out += {table[(n >> 18) & 63], table[(n >> 12) & 63], '=', '='};
  } else if (i + 2 == in.size()) {
    const auto n = (static_cast<unsigned char>(in[i]) << 16) | (static_cast<unsigned char>(in[i + 1]) << 8);
    out += {table[(n >> 18) & 63], table[(n >> 12) & 63], table[(n >> 6) & 63], '='};
  }
  return out;
}

inline std::string base64_decode(std::string_view in) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::string out;
  int bits = 0;
  unsigned buf = 0;
  for (char c : in) {
    if (c == '=') break;
    const int v = value(c);
    if (v < 0) {
      if (c == '\n' || c == '\r' || c == ' ') continue;
      throw FormatError("invalid base64");
    }
    buf = (buf << 6) | static_cast<unsigned>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((buf >> bits) & 0xFF));
    }
  }
  return out;
}

inline std::string url_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out += {'%', hex[c >> 4], hex[c & 15]};
    }
  }
  return out;
}

}  // namespace detail

/// Shared request plumbing: per-call client, timeout, retry on transport
/// errors and 5xx, and the rate limiter. Throws ProviderError.
class HttpTransport {
 public:
  HttpTransport(HttpEndpoint endpoint, HttpOptions options)
      : endpoint_(std::move(endpoint)),
        options_(options),
        limiter_(std::make_shared<RateLimiter>(options.requests_per_second)) {}

  const HttpEndpoint& endpoint() const { return endpoint_; }

  std::string get(std::string_view path) const { return send("GET", endpoint_.origin, endpoint_.path(path), {}, "", {}); }

  std::string get_absolute(std::string_view url) const {
    const auto e = HttpEndpoint::parse(url);
    return send("GET", e.origin, e.base_path.empty() ? "/" : e.base_path, {}, "", {});
  }

  std::string post(std::string_view path, const std::string& body, const std::string& content_type,
                   const httplib::Headers& headers = {}) const {
    return send("POST", endpoint_.origin, endpoint_.path(path), body, content_type, headers);
  }

 private:
  std::string send(const char* method, const std::string& origin, const std::string& path, const std::string& body,
                   const std::string& content_type, const httplib::Headers& headers) const {
    std::string last_error;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
      limiter_->acquire();
      httplib::Client client(origin);
      const auto t = std::chrono::duration<double>(options_.timeout_seconds);
      client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(t));
      client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(t));
      client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(t));
      auto res = std::string_view(method) == "GET" ? client.Get(path, headers)
                                                   : client.Post(path, headers, body, content_type);
      if (!res) {
        last_error = origin + path + ": " + httplib::to_string(res.error());
        continue;
      }
      if (res->status >= 500) {
        last_error = origin + path + ": HTTP " + std::to_string(res->status);
        continue;
      }
      if (res->status >= 400) throw ProviderError(origin + path + ": HTTP " + std::to_string(res->status));
      return res->body;
    }
    throw ProviderError(last_error);
  }

  HttpEndpoint endpoint_;
  HttpOptions options_;
  std::shared_ptr<RateLimiter> limiter_;
};

inline json parse_json_reply(std::string_view body, std::string_view what) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw ProviderError(std::string(what) + " returned invalid JSON: " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

/// GET <base>/search?q=<query>&n=<count> -> ["http://...png", ...]; each URL
/// is downloaded into download_dir.
class HttpImageProvider final : public ImageProvider {
 public:
  HttpImageProvider(std::string_view url, std::filesystem::path download_dir, HttpOptions options = {})
      : http_(HttpEndpoint::parse(url), options), dir_(std::move(download_dir)) {}

  std::vector<ImageCandidate> search(std::string_view query, std::size_t count) const override {
    const auto reply = parse_json_reply(
        http_.get("/search?q=" + detail::url_encode(query) + "&n=" + std::to_string(count)), "image search");
    if (!reply.is_array()) throw ProviderError("image search reply is not a list");
    std::vector<ImageCandidate> out;
    for (const auto& u : reply) {
      if (out.size() >= count) break;
      const auto url = u.get<std::string>();
      char name[32];
      std::snprintf(name, sizeof name, "%016llx.png", static_cast<unsigned long long>(fnv1a64(url)));
      const auto path = dir_ / name;
      if (!std::filesystem::exists(path)) write_file_atomic(path, http_.get_absolute(url));
      out.push_back({path, url});
    }
    return out;
  }

 private:
  HttpTransport http_;
  std::filesystem::path dir_;
};

/// POST <base>/recognize (PNG body) -> {label, box: [x1, y1, x2, y2]}.
class HttpRecognizer final : public RecognizerProvider {
 public:
  explicit HttpRecognizer(std::string_view url, HttpOptions options = {}) : http_(HttpEndpoint::parse(url), options) {}

  Recognition recognize(const ImageCandidate& image) const override {
    const auto reply = parse_json_reply(http_.post("/recognize", read_file(image.path), "image/png"), "recognizer");
    try {
      return {reply.at("label").get<std::string>(), box_from_json(reply.at("box"))};
    } catch (const std::exception& e) {
      throw ProviderError(std::string("recognizer reply: ") + e.what());
    }
  }

 private:
  HttpTransport http_;
};

/// POST <base>/tts {text, language} -> WAV bytes.
class HttpTts final : public TtsProvider {
 public:
  explicit HttpTts(std::string_view url, HttpOptions options = {}) : http_(HttpEndpoint::parse(url), options) {}

  AudioAsset synthesize(std::string_view text, Language language,
                        const std::filesystem::path& out_wav) const override {
    const json body = {{"text", std::string(text)}, {"language", to_string(language)}};
    const auto wav = http_.post("/tts", body.dump(), "application/json");
    WavInfo info;
    try {
      info = wav_info(wav);
    } catch (const FormatError& e) {
      throw ProviderError(std::string("TTS reply: ") + e.what());
    }
    write_file_atomic(out_wav, wav);
    return AudioAsset{out_wav, info.duration(), std::string(text), http_.endpoint().origin};
  }

 private:
  HttpTransport http_;
};

/// POST <base>/annotate {token, sentences, language} -> a list with one
/// {pos, ner, sentiment} per sentence, or one object applying to all.
class HttpAnnotator final : public AnnotatorProvider {
 public:
  explicit HttpAnnotator(std::string_view url, HttpOptions options = {}) : http_(HttpEndpoint::parse(url), options) {}

  std::vector<SentenceAnalysis> analyze(std::string_view token, std::span<const std::string> sentences,
                                        Language language) const override {
    const json body = {{"token", std::string(token)},
                       {"sentences", std::vector<std::string>(sentences.begin(), sentences.end())},
                       {"language", to_string(language)}};
    std::string reply_text;
    try {
      reply_text = http_.post("/annotate", body.dump(), "application/json");
    } catch (const ProviderError& e) {
      throw AnnotatorError(e.what());
    }
    const auto reply = parse_json_reply(reply_text, "annotator");
    auto one = [](const json& j) {
      SentenceAnalysis a;
      a.pos = parse_pos(j.value("pos", std::string("Other")));
      a.ner = parse_ner(j.value("ner", std::string("None")));
      a.sentiment = parse_sentiment(j.value("sentiment", std::string("Neutral")));
      return a;
    };
    try {
      if (reply.is_object()) return std::vector<SentenceAnalysis>(sentences.size(), one(reply));
      std::vector<SentenceAnalysis> out;
      for (const auto& j : reply) out.push_back(one(j));
      return out;
    } catch (const std::exception& e) {
      throw AnnotatorError(std::string("annotator reply: ") + e.what());
    }
  }

 private:
  HttpTransport http_;
};

/// Moderation over HTTP: POST /moderate/text {text}, /moderate/image (PNG),
/// /moderate/video (encoded file, or the manifest JSON when the case was not
/// encoded). Replies {verdict, labels, confidence?}. When toxic_labels is
/// non-empty a reply is Toxic iff one of its labels is in the set; otherwise
/// the verdict field decides. Failures become ProviderFailure verdicts.
class HttpModerationProvider final : public ModerationProvider {
 public:
  struct Options {
    HttpOptions http;
    std::set<std::string> toxic_labels;
    bool send_manifest = false;  // attach X-Case-Manifest (for the mock service)
  };

  HttpModerationProvider(std::string_view url, Options options)
      : http_(HttpEndpoint::parse(url), options.http), options_(std::move(options)), id_(url) {}

  std::string id() const override { return id_; }

  ModerationVerdict moderate_text(std::string_view text) const override {
    return call([&] { return http_.post("/moderate/text", json{{"text", std::string(text)}}.dump(), "application/json"); });
  }

  ModerationVerdict moderate_case(const TestCaseManifest& m, const std::filesystem::path& case_dir) const override {
    httplib::Headers headers;
    if (options_.send_manifest) headers.emplace("X-Case-Manifest", detail::base64_encode(serialize_manifest(m)));
    return call([&] {
      if (m.artifact_kind == ArtifactKind::Text)
        return http_.post("/moderate/text", json{{"text", m.seed_sentence}}.dump(), "application/json", headers);
      if (m.artifact_kind == ArtifactKind::Image)
        return http_.post("/moderate/image", read_file(case_dir / m.artifact), "image/png", headers);
      if (m.plan && !m.plan->encoded_file.empty())
        return http_.post("/moderate/video", read_file(case_dir / m.plan->encoded_file), "application/octet-stream",
                          headers);
      return http_.post("/moderate/video", serialize_manifest(m), "application/json", headers);
    });
  }

 private:
  template <typename F>
  ModerationVerdict call(F&& f) const {
    std::string body;
    try {
      body = f();
    } catch (const Error& e) {
      return ProviderFailure{e.what()};
    }
    try {
      auto j = json::parse(body);
      std::vector<std::string> labels = j.value("labels", std::vector<std::string>{});
      std::optional<double> confidence;
      if (j.contains("confidence") && j.at("confidence").is_number()) confidence = j.at("confidence").get<double>();
      if (confidence && (*confidence < 0.0 || *confidence > 1.0)) confidence.reset();
      bool toxic = false;
      if (options_.toxic_labels.empty()) {
        toxic = j.at("verdict").get<std::string>() == "toxic";
      } else {
        for (const auto& l : labels) toxic = toxic || options_.toxic_labels.count(l) != 0;
      }
      if (toxic) return Toxic{std::move(labels), confidence};
      return NonToxic{};
    } catch (const json::exception& e) {
      return ProviderFailure{std::string("bad moderation reply: ") + e.what()};
    }
  }

  HttpTransport http_;
  Options options_;
  std::string id_;
};

// ---------------------------------------------------------------------------
// Mock moderation service
// ---------------------------------------------------------------------------

/// The mock moderator behind the HTTP moderation contract, plus GET/PUT
/// /policy. Image and video requests are judged from the X-Case-Manifest
/// header or a JSON manifest body; without one there is nothing the mock can
/// read and the verdict is clean.
class MockModerationServer {
 public:
  explicit MockModerationServer(MockPolicy policy) : moderator_(std::move(policy)) {
    server_.Post("/moderate/text", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      try {
        reply(res, moderator_.moderate_text(json::parse(req.body).at("text").get<std::string>()));
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      }
    });
    auto artifact = [this](const httplib::Request& req, httplib::Response& res) {
      ++requests_;
      try {
        std::optional<TestCaseManifest> m;
        if (req.has_header("X-Case-Manifest")) {
          m = parse_manifest(detail::base64_decode(req.get_header_value("X-Case-Manifest")));
        } else if (req.get_header_value("Content-Type") == "application/json") {
          m = parse_manifest(req.body);
        }
        reply(res, m ? moderator_.moderate_case(*m, {}) : ModerationVerdict{NonToxic{}});
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      }
    };
    server_.Post("/moderate/image", artifact);
    server_.Post("/moderate/video", artifact);
    server_.Get("/policy", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(to_json(*moderator_.policy()).dump(), "application/json");
    });
    server_.Put("/policy", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        std::unique_lock lock(policy_write_);
        moderator_.set_policy(policy_from_json(json::parse(req.body), *moderator_.policy()));
        res.set_content(to_json(*moderator_.policy()).dump(), "application/json");
      } catch (const std::exception& e) {
        res.status = 400;
        res.set_content(json{{"error", e.what()}}.dump(), "application/json");
      }
    });
  }

  ~MockModerationServer() { stop(); }
  MockModerationServer(const MockModerationServer&) = delete;
  MockModerationServer& operator=(const MockModerationServer&) = delete;

  /// Binds (port 0 picks a free one) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  /// Serves on the calling thread until stop().
  void serve(const std::string& host, int port) {
    if (!server_.listen(host, port)) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  std::size_t requests() const { return requests_.load(); }
  MockModerator& moderator() { return moderator_; }

 private:
  static void reply(httplib::Response& res, const ModerationVerdict& v) {
    json j;
    if (const auto* t = std::get_if<Toxic>(&v)) {
      j = {{"verdict", "toxic"}, {"labels", t->labels}};
      if (t->confidence) j["confidence"] = *t->confidence;
    } else {
      j = {{"verdict", "clean"}, {"labels", json::array()}};
    }
    res.set_content(j.dump(), "application/json");
  }

  MockModerator moderator_;
  std::mutex policy_write_;  // single writer for read-modify-write updates
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace mmtox
