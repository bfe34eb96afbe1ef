#define CPPHTTPLIB_OPENSSL_SUPPORT

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mcabsa/backend.hpp"
#include "mcabsa/errors.hpp"

namespace mcabsa {

using nlohmann::json;

namespace {

// Bounds in-flight provider requests; released during backoff sleeps.
class Semaphore {
public:
    explicit Semaphore(int count) : count_(count < 1 ? 1 : count) {}

    void acquire() {
        std::unique_lock<std::mutex> lock(mutex_);
        cv_.wait(lock, [&] { return count_ > 0; });
        --count_;
    }
    void release() {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++count_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int count_;
};

struct SlotGuard {
    explicit SlotGuard(Semaphore& sem) : sem_(sem) { sem_.acquire(); }
    ~SlotGuard() { sem_.release(); }
    Semaphore& sem_;
};

struct ParsedUrl {
    std::string origin;       // scheme://host[:port]
    std::string path_prefix;  // everything after the authority, no trailing '/'
};

ParsedUrl split_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("base_url must include a scheme: " + base_url);
    }
    auto path_start = base_url.find('/', scheme_end + 3);
    ParsedUrl parsed;
    if (path_start == std::string::npos) {
        parsed.origin = base_url;
    } else {
        parsed.origin = base_url.substr(0, path_start);
        parsed.path_prefix = base_url.substr(path_start);
    }
    while (!parsed.path_prefix.empty() && parsed.path_prefix.back() == '/') {
        parsed.path_prefix.pop_back();
    }
    return parsed;
}

bool transient_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

struct HttpBackend::Impl {
    explicit Impl(const BackendSpec& spec)
        : url(split_base_url(spec.base_url)), limiter(spec.rate_limit) {
        if (!spec.api_key_env.empty()) {
            if (const char* key = std::getenv(spec.api_key_env.c_str())) api_key = key;
        }
    }

    ParsedUrl url;
    Semaphore limiter;
    std::string api_key;
};

HttpBackend::HttpBackend(BackendSpec spec)
    : spec_(std::move(spec)), impl_(std::make_unique<Impl>(spec_)) {}

HttpBackend::~HttpBackend() = default;

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    json messages = json::array();
    for (const ChatMessage& m : request.messages) {
        messages.push_back({{"role", m.role}, {"content", m.content}});
    }
    const std::string body = json{{"model", request.model},
                                  {"messages", std::move(messages)},
                                  {"temperature", request.temperature},
                                  {"max_tokens", request.max_tokens}}
                                 .dump();
    const std::string path = impl_->url.path_prefix + "/chat/completions";

    std::string last_failure = "no attempt made";
    const int max_attempts = std::max(1, spec_.retry.max_attempts);
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        if (attempt > 1) {
            auto delay = std::chrono::milliseconds(
                static_cast<long long>(spec_.retry.base_backoff_ms) << (attempt - 2));
            std::this_thread::sleep_for(delay);
        }

        httplib::Result result = [&] {
            SlotGuard slot(impl_->limiter);
            httplib::Client client(impl_->url.origin);
            client.set_connection_timeout(10, 0);
            client.set_read_timeout(120, 0);
            client.set_write_timeout(30, 0);
            if (!impl_->api_key.empty()) {
                client.set_default_headers(
                    {{"Authorization", "Bearer " + impl_->api_key}});
            }
            return client.Post(path, body, "application/json");
        }();

        if (!result) {
            last_failure = "transport error: " + httplib::to_string(result.error());
            continue;  // timeouts and connection failures are transient
        }
        if (transient_status(result->status)) {
            last_failure = "HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200) {
            throw BackendExhausted(spec_.name + ": non-retryable HTTP " +
                                   std::to_string(result->status) + ": " +
                                   result->body.substr(0, 200));
        }

        json parsed = json::parse(result->body, nullptr, false);
        if (parsed.is_discarded() || !parsed.contains("choices") || !parsed["choices"].is_array() ||
            parsed["choices"].empty()) {
            throw BackendExhausted(spec_.name + ": malformed completion body");
        }
        const json& message = parsed["choices"][0].value("message", json::object());
        if (!message.contains("content") || !message["content"].is_string()) {
            throw BackendExhausted(spec_.name + ": completion has no message content");
        }
        return ChatResponse{message["content"].get<std::string>(), false};
    }
    throw BackendExhausted(spec_.name + " after " + std::to_string(max_attempts) +
                           " attempts; last failure: " + last_failure);
}

}  // namespace mcabsa
