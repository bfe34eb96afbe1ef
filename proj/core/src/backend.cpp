#include "mcabsa/backend.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "mcabsa/errors.hpp"

namespace mcabsa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string read_file_or_throw(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(std::string(what) + " not readable: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

std::string cache_key(const ChatRequest& request) {
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        messages.push_back(json::array({m.role, m.content}));
    }
    // nlohmann objects serialize with sorted keys, so dump() is canonical.
    json canonical = {
        {"backend", request.backend_name},
        {"model", request.model},
        {"messages", std::move(messages)},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
        {"sample_index", request.sample_index},
    };
    return sha256_hex(canonical.dump());
}

std::string stage_tag(const ChatRequest& request) {
    for (const ChatMessage& m : request.messages) {
        if (m.role != "system") continue;
        auto end = m.content.find('\n');
        std::string line = m.content.substr(0, end);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\r')) line.pop_back();
        size_t start = line.find_first_not_of(' ');
        return start == std::string::npos ? std::string() : line.substr(start);
    }
    return {};
}

std::string scripted_lookup(const ScriptTable& script, const ChatRequest& request) {
    if (auto it = script.find(cache_key(request)); it != script.end()) return it->second;

    const std::string tag = stage_tag(request);
    const std::string index_suffix = ":" + std::to_string(request.sample_index);
    if (auto it = script.find(tag + index_suffix); it != script.end()) return it->second;

    const std::string bare = tag.substr(0, tag.find('#'));
    if (bare != tag) {
        if (auto it = script.find(bare + index_suffix); it != script.end()) return it->second;
    }
    throw ScriptMiss("no entry for tag \"" + tag + "\"" + index_suffix);
}

ScriptedBackend::ScriptedBackend(std::string name, ScriptTable script)
    : name_(std::move(name)), script_(std::move(script)) {}

ScriptedBackend ScriptedBackend::from_file(std::string name, const std::string& path) {
    json root = json::parse(read_file_or_throw(path, "script file"), nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw ConfigError("script file is not a JSON object: " + path);
    }
    ScriptTable table;
    for (const auto& [key, value] : root.items()) {
        if (!value.is_string()) {
            throw ConfigError("script entry \"" + key + "\" is not a string: " + path);
        }
        table.emplace(key, value.get<std::string>());
    }
    return ScriptedBackend(std::move(name), std::move(table));
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    return ChatResponse{scripted_lookup(script_, request), false};
}

ResponseCache::ResponseCache(std::string directory) : directory_(std::move(directory)) {
    fs::create_directories(directory_);
}

std::optional<std::string> ResponseCache::lookup(const std::string& key) const {
    const fs::path path = fs::path(directory_) / (key + ".json");
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    json body = json::parse(buf.str(), nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("text") ||
        !body["text"].is_string()) {
        throw CacheIntegrityError("unreadable cache entry " + path.string());
    }
    return body["text"].get<std::string>();
}

void ResponseCache::store(const std::string& key, const std::string& request_digest,
                          const std::string& text) {
    static std::mutex store_mutex;
    std::lock_guard<std::mutex> lock(store_mutex);

    if (auto existing = lookup(key)) {
        if (*existing != text) {
            throw CacheIntegrityError("key " + key + " rewritten with different content");
        }
        return;  // write-once: identical content is a no-op
    }

    json body = {
        {"request_digest", request_digest},
        {"text", text},
        {"timestamp",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    const fs::path final_path = fs::path(directory_) / (key + ".json");
    const fs::path tmp_path = fs::path(directory_) / (key + ".tmp");
    {
        std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
        if (!out) throw CacheIntegrityError("cannot write " + tmp_path.string());
        out << body.dump(2);
    }
    fs::rename(tmp_path, final_path);
}

CacheDirStats ResponseCache::stats(const std::string& directory) {
    CacheDirStats stats;
    if (!fs::exists(directory)) return stats;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
        ++stats.entries;
        stats.bytes += entry.file_size();
    }
    return stats;
}

CachingBackend::CachingBackend(std::shared_ptr<ChatBackend> inner,
                               std::shared_ptr<ResponseCache> cache,
                               std::shared_ptr<CacheCounters> counters)
    : inner_(std::move(inner)), cache_(std::move(cache)), counters_(std::move(counters)) {}

ChatResponse CachingBackend::complete(const ChatRequest& request) {
    if (counters_) counters_->requests.fetch_add(1);
    const std::string key = cache_key(request);
    if (auto cached = cache_->lookup(key)) {
        if (counters_) counters_->cache_hits.fetch_add(1);
        return ChatResponse{*cached, true};
    }
    if (counters_) counters_->provider_calls.fetch_add(1);
    ChatResponse response = inner_->complete(request);
    cache_->store(key, key, response.text);
    response.from_cache = false;
    return response;
}

std::shared_ptr<ChatBackend> make_backend(const BackendSpec& spec) {
    switch (spec.kind) {
        case BackendKind::scripted:
            if (spec.script_path.empty()) {
                throw ConfigError("scripted backend \"" + spec.name + "\" needs a script path");
            }
            return std::make_shared<ScriptedBackend>(
                ScriptedBackend::from_file(spec.name, spec.script_path));
        case BackendKind::http_openai_compatible:
            if (spec.base_url.empty()) {
                throw ConfigError("http backend \"" + spec.name + "\" needs a base_url");
            }
            return std::make_shared<HttpBackend>(spec);
    }
    throw ConfigError("backend \"" + spec.name + "\" has an unknown kind");
}

}  // namespace mcabsa
