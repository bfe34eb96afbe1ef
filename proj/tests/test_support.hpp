#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include "mcabsa/backend.hpp"
#include "mcabsa/dialogue.hpp"
#include "mcabsa/prompts.hpp"

namespace mcabsa::testing {

/// Counts provider calls so tests can assert short-circuits and cache hits.
class CountingBackend : public ChatBackend {
public:
    explicit CountingBackend(std::shared_ptr<ChatBackend> inner) : inner_(std::move(inner)) {}

    const std::string& name() const override { return inner_->name(); }
    ChatResponse complete(const ChatRequest& request) override {
        ++calls;
        return inner_->complete(request);
    }

    int calls = 0;

private:
    std::shared_ptr<ChatBackend> inner_;
};

inline std::shared_ptr<CountingBackend> counting_scripted(ScriptTable script) {
    return std::make_shared<CountingBackend>(
        std::make_shared<ScriptedBackend>("test", std::move(script)));
}

inline StageClient make_stage(ChatBackend* backend, std::string tag_prefix,
                              std::string template_text = "{transcript}", int retries = 3) {
    StageClient stage;
    stage.backend = backend;
    stage.model = "test-model";
    stage.template_text = std::move(template_text);
    stage.tag_prefix = std::move(tag_prefix);
    stage.retries = retries;
    return stage;
}

inline Dialogue two_turn_dialogue(const std::string& doc_id = "d1") {
    Dialogue d;
    d.doc_id = doc_id;
    d.utterances.push_back({0, "Ana", "I love this phone", std::nullopt, {}});
    d.utterances.push_back({1, "Ben", "the battery dies fast though", 0, {}});
    return d;
}

/// Unique scratch directory under the system temp dir, removed on
/// destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("mcabsa_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter()++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }

    const std::filesystem::path& path() const { return path_; }
    std::string str(const std::string& child = "") const {
        return child.empty() ? path_.string() : (path_ / child).string();
    }

private:
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace mcabsa::testing
