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

// Text-generation and embedding access: provider interfaces, the HTTP and
// offline providers, a content-addressed on-disk cache, and the Gateway
// that adds retries, caching, and an in-flight limit on top.

#ifndef PODJUDGE_GATEWAY_H_
#define PODJUDGE_GATEWAY_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

namespace podjudge {

struct GenerationRequest {
  std::string prompt;
  std::string model_id;
  double temperature = 0.0;
  int max_output_tokens = 1024;
  std::string request_tag;  // audit label; never part of the cache key
};

struct GenerationResponse {
  std::string text;
  bool cached = false;
  std::string provider_model;
  std::int64_t latency_ms = 0;
};

struct EmbeddingVector {
  std::vector<double> values;
  std::size_t dimension() const { return values.size(); }
};

// Providers throw TransportError for retryable network failures and
// ProviderError for answers that retrying will not fix.
class TextProvider {
 public:
  virtual ~TextProvider() = default;
  virtual std::string Complete(const GenerationRequest& request) = 0;
  virtual std::string name() const = 0;
  // True when Complete may open network connections.
  virtual bool remote() const { return false; }
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<double> Embed(std::string_view text, std::string_view model_id) = 0;
  virtual std::string name() const = 0;
  virtual bool remote() const { return false; }
};

// OpenAI-style `POST <url>` chat-completion endpoint.
class HttpChatProvider : public TextProvider {
 public:
  HttpChatProvider(std::string url, std::string api_key,
                   std::chrono::seconds timeout = std::chrono::seconds{120});
  // Reads PODJUDGE_LLM_URL / PODJUDGE_LLM_KEY; ConfigError when the URL is unset.
  static std::unique_ptr<HttpChatProvider> FromEnvironment();

  std::string Complete(const GenerationRequest& request) override;
  std::string name() const override { return "http:" + url_; }
  bool remote() const override { return true; }

 private:
  std::string url_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

// OpenAI-style embeddings endpoint (`{"input": ..., "model": ...}`).
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  HttpEmbeddingProvider(std::string url, std::string api_key,
                        std::chrono::seconds timeout = std::chrono::seconds{60});
  // Reads PODJUDGE_EMB_URL / PODJUDGE_EMB_KEY.
  static std::unique_ptr<HttpEmbeddingProvider> FromEnvironment();

  std::vector<double> Embed(std::string_view text, std::string_view model_id) override;
  std::string name() const override { return "http:" + url_; }
  bool remote() const override { return true; }

 private:
  std::string url_;
  std::string api_key_;
  std::chrono::seconds timeout_;
};

// Deterministic bag-of-tokens embedder. Text is lower-cased and split on
// non-alphanumeric ASCII bytes (bytes >= 0x80 count as token characters);
// each token adds 1 to bucket FNV-1a64(token, seeded basis) mod dimension;
// the result is L2-normalized. Identical on every platform.
class HashEmbedder : public EmbeddingProvider {
 public:
  static constexpr std::size_t kDefaultDimension = 256;
  static constexpr std::uint64_t kDefaultSeed = 0;

  explicit HashEmbedder(std::size_t dimension = kDefaultDimension,
                        std::uint64_t seed = kDefaultSeed);

  std::vector<double> Embed(std::string_view text, std::string_view model_id) override;
  std::string name() const override;

  std::size_t dimension() const { return dimension_; }
  std::uint64_t basis() const { return basis_; }

 private:
  std::size_t dimension_;
  std::uint64_t seed_;
  std::uint64_t basis_;
};

// Splits `text` into the tokens HashEmbedder hashes.
std::vector<std::string> HashEmbedderTokens(std::string_view text);

// Content-addressed response store: `<root>/<first-2-hex>/<hash>.resp`.
// A default-constructed cache is disabled (every lookup misses).
class ResponseCache {
 public:
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path root);

  bool enabled() const { return !root_.empty(); }
  std::optional<std::string> Get(const std::string& key) const;
  void Put(const std::string& key, std::string_view value) const;
  std::filesystem::path PathFor(const std::string& key) const;

 private:
  std::filesystem::path root_;
};

// SHA-256 over a length-prefixed encoding of (prompt, model_id, temperature).
std::string GenerationCacheKey(std::string_view prompt, std::string_view model_id,
                               double temperature);
std::string EmbeddingCacheKey(std::string_view text, std::string_view model_id);

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
};

struct GatewayStats {
  std::int64_t generate_calls = 0;
  std::int64_t generate_cache_hits = 0;
  std::int64_t embed_calls = 0;
  std::int64_t embed_cache_hits = 0;
  std::int64_t provider_calls = 0;
  std::int64_t retries = 0;
};

// Thread-safe front door to the providers.
class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  struct Options {
    RetryPolicy retry;
    int max_in_flight = 4;
    // Replaced in tests so backoff does not slow them down.
    Sleeper sleeper;
  };

  Gateway(std::shared_ptr<TextProvider> text, std::shared_ptr<EmbeddingProvider> embedder,
          ResponseCache cache);
  Gateway(std::shared_ptr<TextProvider> text, std::shared_ptr<EmbeddingProvider> embedder,
          ResponseCache cache, Options options);

  // Cache hit: stored bytes verbatim, cached=true. Miss: provider call with
  // retries on TransportError, then store. Empty completions raise
  // ProviderError and are never cached.
  GenerationResponse Generate(const GenerationRequest& request);

  // ArgumentError for empty text; ProviderError for empty or non-finite
  // vectors.
  EmbeddingVector Embed(std::string_view text, std::string_view model_id);

  GatewayStats stats() const;
  std::string text_provider_name() const;
  std::string embedding_provider_name() const;
  bool any_remote() const;

 private:
  template <typename Fn>
  auto WithRetries(Fn&& fn) -> decltype(fn());

  std::shared_ptr<TextProvider> text_;
  std::shared_ptr<EmbeddingProvider> embedder_;
  ResponseCache cache_;
  Options options_;
  std::unique_ptr<std::counting_semaphore<>> in_flight_;

  std::atomic<std::int64_t> generate_calls_{0};
  std::atomic<std::int64_t> generate_cache_hits_{0};
  std::atomic<std::int64_t> embed_calls_{0};
  std::atomic<std::int64_t> embed_cache_hits_{0};
  std::atomic<std::int64_t> provider_calls_{0};
  std::atomic<std::int64_t> retries_{0};
};

}  // namespace podjudge

#endif  // PODJUDGE_GATEWAY_H_
