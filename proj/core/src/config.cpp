#include "mcabsa/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mcabsa/errors.hpp"

namespace mcabsa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& path) {
    if (path.empty() || base_dir.empty()) return path;
    fs::path p(path);
    if (p.is_absolute()) return path;
    return (fs::path(base_dir) / p).lexically_normal().string();
}

BackendSpec backend_from_json(const json& obj, const std::string& base_dir) {
    if (!obj.is_object()) throw ConfigError("backend entry must be an object");
    BackendSpec spec;
    spec.name = obj.value("name", std::string());
    if (spec.name.empty()) throw ConfigError("backend needs a nonempty name");

    const std::string kind = obj.value("kind", std::string());
    if (kind == "http_openai_compatible") {
        spec.kind = BackendKind::http_openai_compatible;
        spec.base_url = obj.value("base_url", std::string());
        if (spec.base_url.empty()) {
            throw ConfigError("http backend \"" + spec.name + "\" needs a base_url");
        }
    } else if (kind == "scripted") {
        spec.kind = BackendKind::scripted;
        spec.script_path = resolve_path(base_dir, obj.value("script", std::string()));
        if (spec.script_path.empty()) {
            throw ConfigError("scripted backend \"" + spec.name + "\" needs a script path");
        }
    } else {
        throw ConfigError("backend \"" + spec.name + "\" has unknown kind \"" + kind + "\"");
    }

    spec.model = obj.value("model", std::string());
    spec.api_key_env = obj.value("api_key_env", std::string());
    if (auto it = obj.find("retry"); it != obj.end() && it->is_object()) {
        spec.retry.max_attempts = it->value("max_attempts", spec.retry.max_attempts);
        spec.retry.base_backoff_ms = it->value("base_backoff_ms", spec.retry.base_backoff_ms);
        if (spec.retry.max_attempts < 1) {
            throw ConfigError("backend \"" + spec.name + "\" retry.max_attempts must be >= 1");
        }
    }
    spec.rate_limit = obj.value("rate_limit", spec.rate_limit);
    if (spec.rate_limit < 1) {
        throw ConfigError("backend \"" + spec.name + "\" rate_limit must be >= 1");
    }
    return spec;
}

}  // namespace

const BackendSpec& RunConfig::backend_spec(const std::string& name) const {
    auto it = std::find_if(backends.begin(), backends.end(),
                           [&](const BackendSpec& b) { return b.name == name; });
    if (it == backends.end()) throw UnknownBackend(name);
    return *it;
}

const BackendSpec& RunConfig::bound_backend(const std::string& stage) const {
    auto it = stage_bindings.find(stage);
    if (it == stage_bindings.end()) {
        throw ConfigError("stage \"" + stage + "\" has no backend binding");
    }
    return backend_spec(it->second);
}

RunConfig parse_run_config(std::string_view json_text, const std::string& base_dir) {
    json root = json::parse(json_text, nullptr, false);
    if (root.is_discarded() || !root.is_object()) {
        throw ConfigError("run config is not a JSON object");
    }

    RunConfig cfg;
    auto backends = root.find("backends");
    if (backends == root.end() || !backends->is_array() || backends->empty()) {
        throw ConfigError("config needs a nonempty \"backends\" array");
    }
    std::set<std::string> backend_names;
    for (const json& entry : *backends) {
        BackendSpec spec = backend_from_json(entry, base_dir);
        if (!backend_names.insert(spec.name).second) {
            throw ConfigError("duplicate backend name \"" + spec.name + "\"");
        }
        cfg.backends.push_back(std::move(spec));
    }

    if (auto it = root.find("stages"); it != root.end()) {
        if (!it->is_object()) throw ConfigError("\"stages\" must be an object");
        for (const auto& [stage, backend] : it->items()) {
            const auto& known = known_stages();
            if (std::find(known.begin(), known.end(), stage) == known.end()) {
                throw ConfigError("unknown stage \"" + stage + "\"");
            }
            if (!backend.is_string()) {
                throw ConfigError("stage \"" + stage + "\" binding must be a backend name");
            }
            cfg.stage_bindings[stage] = backend.get<std::string>();
        }
    }
    for (const auto& [stage, backend] : cfg.stage_bindings) {
        if (backend_names.find(backend) == backend_names.end()) throw UnknownBackend(backend);
    }

    if (auto it = root.find("msgr"); it != root.end() && it->is_object()) {
        cfg.msgr.h = it->value("h", cfg.msgr.h);
        cfg.msgr.max_samples = it->value("max_samples", cfg.msgr.max_samples);
        cfg.msgr.temperature = it->value("temperature", cfg.msgr.temperature);
    }
    if (cfg.msgr.h < 1 || cfg.msgr.max_samples < cfg.msgr.h) {
        throw ConfigError("msgr requires 1 <= h <= max_samples");
    }

    cfg.retries = root.value("retries", cfg.retries);
    if (cfg.retries < 1) throw ConfigError("retries must be >= 1");

    if (auto it = root.find("fusion"); it != root.end()) {
        if (!it->is_array() || it->empty()) throw ConfigError("\"fusion\" must be a nonempty array");
        std::set<std::string> seen;
        for (const json& entry : *it) {
            if (!entry.is_string()) throw ConfigError("fusion entries must be stage names");
            std::string stage = entry.get<std::string>();
            if (stage != "flip_model_1" && stage != "flip_model_2" && stage != "flip_model_3") {
                throw ConfigError("fusion stage \"" + stage + "\" is not flip-capable");
            }
            if (!seen.insert(stage).second) {
                throw ConfigError("fusion stage \"" + stage + "\" listed twice");
            }
            cfg.fusion.push_back(std::move(stage));
        }
    }

    cfg.cache_dir = resolve_path(base_dir, root.value("cache_dir", std::string()));
    cfg.prompt_dir = resolve_path(base_dir, root.value("prompt_dir", std::string()));
    cfg.work_dir = resolve_path(base_dir, root.value("work_dir", std::string()));

    cfg.concurrency = root.value("concurrency", cfg.concurrency);
    if (cfg.concurrency < 1) throw ConfigError("concurrency must be >= 1");

    if (auto it = root.find("defaults"); it != root.end() && it->is_object()) {
        cfg.defaults.temperature = it->value("temperature", cfg.defaults.temperature);
        cfg.defaults.max_tokens = it->value("max_tokens", cfg.defaults.max_tokens);
        if (cfg.defaults.max_tokens < 1) throw ConfigError("defaults.max_tokens must be >= 1");
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config file not readable: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(), fs::path(path).parent_path().string());
}

}  // namespace mcabsa
