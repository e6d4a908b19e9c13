// Copyright 2026 The Podjudge Authors.
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

#include "podjudge/gateway.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"
#include "json.hpp"
#include "podjudge/errors.h"
#include "podjudge/kernels.h"
#include "podjudge/util.h"

namespace podjudge {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl SplitEndpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError(fmt::format("endpoint '{}' has no scheme", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

std::string EnvOr(const char* name, const std::string& fallback = "") {
  const char* value = std::getenv(name);
  return value == nullptr ? fallback : std::string(value);
}

// POSTs `body` and returns the parsed JSON reply. Connection failures and
// 429/5xx are TransportError; other non-2xx statuses are ProviderError.
json PostJson(const std::string& url, const std::string& api_key,
              std::chrono::seconds timeout, const json& body) {
  const SplitUrl endpoint = SplitEndpoint(url);
  httplib::Client client(endpoint.base);
  client.set_connection_timeout(std::chrono::seconds{10});
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!api_key.empty()) headers.emplace("Authorization", "Bearer " + api_key);
  const auto result = client.Post(endpoint.path, headers, body.dump(), "application/json");
  if (!result) {
    throw TransportError(fmt::format("request to {} failed: {}", url,
                                     httplib::to_string(result.error())));
  }
  if (result->status == 429 || result->status >= 500) {
    throw TransportError(fmt::format("{} returned HTTP {}", url, result->status));
  }
  if (result->status < 200 || result->status >= 300) {
    throw ProviderError(fmt::format("{} returned HTTP {}: {}", url, result->status,
                                    result->body.substr(0, 200)));
  }
  try {
    return json::parse(result->body);
  } catch (const json::exception&) {
    throw ProviderError(fmt::format("{} returned a non-JSON body", url));
  }
}

void AppendField(std::string& out, std::string_view field) {
  out += std::to_string(field.size());
  out += ':';
  out += field;
}

}  // namespace

HttpChatProvider::HttpChatProvider(std::string url, std::string api_key,
                                   std::chrono::seconds timeout)
    : url_(std::move(url)), api_key_(std::move(api_key)), timeout_(timeout) {
  SplitEndpoint(url_);
}

std::unique_ptr<HttpChatProvider> HttpChatProvider::FromEnvironment() {
  const std::string url = EnvOr("PODJUDGE_LLM_URL");
  if (url.empty()) throw ConfigError("PODJUDGE_LLM_URL is not set");
  return std::make_unique<HttpChatProvider>(url, EnvOr("PODJUDGE_LLM_KEY"));
}

std::string HttpChatProvider::Complete(const GenerationRequest& request) {
  const json body = {
      {"model", request.model_id},
      {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
  };
  const json reply = PostJson(url_, api_key_, timeout_, body);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception&) {
    throw ProviderError(fmt::format("{} reply has no choices[0].message.content", url_));
  }
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url, std::string api_key,
                                             std::chrono::seconds timeout)
    : url_(std::move(url)), api_key_(std::move(api_key)), timeout_(timeout) {
  SplitEndpoint(url_);
}

std::unique_ptr<HttpEmbeddingProvider> HttpEmbeddingProvider::FromEnvironment() {
  const std::string url = EnvOr("PODJUDGE_EMB_URL");
  if (url.empty()) throw ConfigError("PODJUDGE_EMB_URL is not set");
  return std::make_unique<HttpEmbeddingProvider>(url, EnvOr("PODJUDGE_EMB_KEY"));
}

std::vector<double> HttpEmbeddingProvider::Embed(std::string_view text,
                                                 std::string_view model_id) {
  const json body = {{"model", model_id}, {"input", text}};
  const json reply = PostJson(url_, api_key_, timeout_, body);
  try {
    return reply.at("data").at(0).at("embedding").get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ProviderError(fmt::format("{} reply has no data[0].embedding", url_));
  }
}

std::vector<std::string> HashEmbedderTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (c >= 0x80 || std::isalnum(c)) {
      current += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

HashEmbedder::HashEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed), basis_(0xcbf29ce484222325ULL ^ SplitMix64(seed)) {
  if (dimension_ == 0) throw ArgumentError("embedding dimension must be > 0");
}

std::vector<double> HashEmbedder::Embed(std::string_view text, std::string_view) {
  const std::string owned(text);
  return kernels::HashEmbedSerial({&owned, 1}, dimension_, basis_).data;
}

std::string HashEmbedder::name() const {
  return fmt::format("hash-embedder:d{}:s{}", dimension_, seed_);
}

ResponseCache::ResponseCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path ResponseCache::PathFor(const std::string& key) const {
  return root_ / key.substr(0, 2) / (key + ".resp");
}

std::optional<std::string> ResponseCache::Get(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  const auto path = PathFor(key);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) return std::nullopt;
  return ReadFile(path);
}

void ResponseCache::Put(const std::string& key, std::string_view value) const {
  if (!enabled()) return;
  WriteFileAtomic(PathFor(key), value);
}

std::string GenerationCacheKey(std::string_view prompt, std::string_view model_id,
                               double temperature) {
  std::string material = "generate\n";
  AppendField(material, prompt);
  AppendField(material, model_id);
  AppendField(material, fmt::format("{:.17g}", temperature));
  return Sha256Hex(material);
}

std::string EmbeddingCacheKey(std::string_view text, std::string_view model_id) {
  std::string material = "embed\n";
  AppendField(material, text);
  AppendField(material, model_id);
  return Sha256Hex(material);
}

Gateway::Gateway(std::shared_ptr<TextProvider> text,
                 std::shared_ptr<EmbeddingProvider> embedder, ResponseCache cache)
    : Gateway(std::move(text), std::move(embedder), std::move(cache), Options{}) {}

Gateway::Gateway(std::shared_ptr<TextProvider> text,
                 std::shared_ptr<EmbeddingProvider> embedder, ResponseCache cache,
                 Options options)
    : text_(std::move(text)),
      embedder_(std::move(embedder)),
      cache_(std::move(cache)),
      options_(std::move(options)) {
  if (options_.max_in_flight < 1) throw ConfigError("max_in_flight must be >= 1");
  if (options_.retry.attempts < 1) throw ConfigError("retry attempts must be >= 1");
  if (!options_.sleeper) {
    options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
  in_flight_ = std::make_unique<std::counting_semaphore<>>(options_.max_in_flight);
}

template <typename Fn>
auto Gateway::WithRetries(Fn&& fn) -> decltype(fn()) {
  auto backoff = options_.retry.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      in_flight_->acquire();
      struct Release {
        std::counting_semaphore<>* sem;
        ~Release() { sem->release(); }
      } release{in_flight_.get()};
      provider_calls_.fetch_add(1);
      return fn();
    } catch (const TransportError& e) {
      if (attempt >= options_.retry.attempts) {
        throw TransportError(
            fmt::format("{} (gave up after {} attempts)", e.what(), attempt));
      }
    }
    retries_.fetch_add(1);
    options_.sleeper(backoff);
    backoff *= 2;
  }
}

GenerationResponse Gateway::Generate(const GenerationRequest& request) {
  if (request.prompt.empty()) throw ArgumentError("prompt must be non-empty");
  if (!(request.temperature >= 0.0)) throw ArgumentError("temperature must be >= 0");
  if (!text_) throw ConfigError("no text provider configured");
  generate_calls_.fetch_add(1);

  const std::string key =
      GenerationCacheKey(request.prompt, request.model_id, request.temperature);
  GenerationResponse response;
  response.provider_model = request.model_id;
  if (auto hit = cache_.Get(key)) {
    generate_cache_hits_.fetch_add(1);
    response.text = std::move(*hit);
    response.cached = true;
    return response;
  }
  const auto start = std::chrono::steady_clock::now();
  std::string text = WithRetries([&] { return text_->Complete(request); });
  response.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  if (text.empty()) {
    throw ProviderError(fmt::format("{} returned an empty completion", text_->name()));
  }
  cache_.Put(key, text);
  response.text = std::move(text);
  return response;
}

EmbeddingVector Gateway::Embed(std::string_view text, std::string_view model_id) {
  if (text.empty()) throw ArgumentError("text to embed must be non-empty");
  if (!embedder_) throw ConfigError("no embedding provider configured");
  embed_calls_.fetch_add(1);

  const std::string key = EmbeddingCacheKey(text, model_id);
  if (auto hit = cache_.Get(key)) {
    try {
      embed_cache_hits_.fetch_add(1);
      return {json::parse(*hit).get<std::vector<double>>()};
    } catch (const json::exception&) {
      throw DataError(fmt::format("corrupt embedding cache entry {}", key));
    }
  }
  EmbeddingVector vec{WithRetries([&] { return embedder_->Embed(text, model_id); })};
  if (vec.values.empty()) {
    throw ProviderError(fmt::format("{} returned an empty embedding", embedder_->name()));
  }
  for (double v : vec.values) {
    if (!std::isfinite(v)) {
      throw ProviderError(fmt::format("{} returned a non-finite embedding", embedder_->name()));
    }
  }
  cache_.Put(key, json(vec.values).dump());
  return vec;
}

GatewayStats Gateway::stats() const {
  return {generate_calls_.load(), generate_cache_hits_.load(), embed_calls_.load(),
          embed_cache_hits_.load(), provider_calls_.load(),       retries_.load()};
}

std::string Gateway::text_provider_name() const { return text_ ? text_->name() : "none"; }

std::string Gateway::embedding_provider_name() const {
  return embedder_ ? embedder_->name() : "none";
}

bool Gateway::any_remote() const {
  return (text_ && text_->remote()) || (embedder_ && embedder_->remote());
}

}  // namespace podjudge
