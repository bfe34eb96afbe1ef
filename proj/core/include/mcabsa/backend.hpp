#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcabsa {

struct ChatMessage {
    std::string role;  // "system" or "user"
    std::string content;

    bool operator==(const ChatMessage&) const = default;
};

/// The single request shape every LLM-facing stage uses. sample_index
/// distinguishes repeated stochastic samples of an otherwise identical
/// request; it is part of the request identity so the cache never collapses
/// them.
struct ChatRequest {
    std::string backend_name;
    std::string model;
    std::vector<ChatMessage> messages;
    double temperature = 0.0;
    int max_tokens = 1024;
    int sample_index = 0;
};

struct ChatResponse {
    std::string text;  // may be empty; empty model output is meaningful downstream
    bool from_cache = false;
};

struct RetryPolicy {
    int max_attempts = 3;
    int base_backoff_ms = 200;
};

enum class BackendKind { http_openai_compatible, scripted };

struct BackendSpec {
    std::string name;
    BackendKind kind = BackendKind::scripted;
    std::string base_url;      // http kind
    std::string model;
    std::string api_key_env;   // http kind; name of the env var holding the key
    std::string script_path;   // scripted kind
    RetryPolicy retry;
    int rate_limit = 4;        // max in-flight provider requests
};

/// 64-char lowercase hex digest of a canonical serialization of
/// (backend_name, model, messages, temperature, max_tokens, sample_index).
/// Stable across processes and platforms.
std::string cache_key(const ChatRequest& request);

/// First line of the first system message, used by the scripted provider and
/// the run log to identify the pipeline stage a request belongs to. Tags
/// look like "msgr_sample#d1"; the part before the first '#' is the template
/// name.
std::string stage_tag(const ChatRequest& request);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual const std::string& name() const = 0;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

/// Script file contents: response text keyed by exact cache key or by
/// "<stage_tag>:<sample_index>".
using ScriptTable = std::map<std::string, std::string>;

/// Deterministic lookup, most specific first: exact cache key, then the full
/// request stage tag with sample index, then the bare template name with
/// sample index. Throws ScriptMiss when no tier matches.
std::string scripted_lookup(const ScriptTable& script, const ChatRequest& request);

class ScriptedBackend : public ChatBackend {
public:
    ScriptedBackend(std::string name, ScriptTable script);
    static ScriptedBackend from_file(std::string name, const std::string& path);

    const std::string& name() const override { return name_; }
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::string name_;
    ScriptTable script_;
};

/// OpenAI-compatible chat completions over HTTP. Retries transient failures
/// (429/5xx, timeouts) with exponential backoff and bounds in-flight
/// requests per the spec's rate limit.
class HttpBackend : public ChatBackend {
public:
    explicit HttpBackend(BackendSpec spec);
    ~HttpBackend() override;

    const std::string& name() const override { return spec_.name; }
    ChatResponse complete(const ChatRequest& request) override;

private:
    struct Impl;
    BackendSpec spec_;
    std::unique_ptr<Impl> impl_;
};

struct CacheCounters {
    std::atomic<std::uint64_t> requests{0};
    std::atomic<std::uint64_t> cache_hits{0};
    std::atomic<std::uint64_t> provider_calls{0};
};

struct CacheDirStats {
    std::uint64_t entries = 0;
    std::uint64_t bytes = 0;
};

/// Content-addressed response cache: one JSON file per key under a
/// directory, body {request_digest, text, timestamp}. Entries are
/// write-once; rewriting a key with different text is an integrity error.
class ResponseCache {
public:
    explicit ResponseCache(std::string directory);

    std::optional<std::string> lookup(const std::string& key) const;
    void store(const std::string& key, const std::string& request_digest,
               const std::string& text);
    const std::string& directory() const { return directory_; }

    static CacheDirStats stats(const std::string& directory);

private:
    std::string directory_;
};

/// Wraps any provider with the response cache. Consults the cache before
/// every provider call and records the response after success.
class CachingBackend : public ChatBackend {
public:
    CachingBackend(std::shared_ptr<ChatBackend> inner, std::shared_ptr<ResponseCache> cache,
                   std::shared_ptr<CacheCounters> counters);

    const std::string& name() const override { return inner_->name(); }
    ChatResponse complete(const ChatRequest& request) override;

private:
    std::shared_ptr<ChatBackend> inner_;
    std::shared_ptr<ResponseCache> cache_;
    std::shared_ptr<CacheCounters> counters_;
};

/// Builds the provider for a spec (scripted or http), without caching.
std::shared_ptr<ChatBackend> make_backend(const BackendSpec& spec);

}  // namespace mcabsa
