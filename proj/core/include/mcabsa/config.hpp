#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mcabsa/backend.hpp"
#include "mcabsa/msgr.hpp"

namespace mcabsa {

/// The pipeline stages a backend can be bound to.
inline const std::vector<std::string>& known_stages() {
    static const std::vector<std::string> stages = {
        "caption_audio", "caption_visual", "msgr_sampler",  "msgr_refiner",
        "ho_extractor",  "sr_extractor",   "hlos_refiner",  "flip_model_1",
        "flip_model_2",  "flip_model_3",   "trigger_classifier",
    };
    return stages;
}

struct StageDefaults {
    double temperature = 0.0;
    int max_tokens = 1024;
};

/// One run's full configuration, parsed from a single JSON file. API keys
/// never appear here — only the names of environment variables that hold
/// them. Relative paths are resolved against the config file's directory.
struct RunConfig {
    std::vector<BackendSpec> backends;
    std::map<std::string, std::string> stage_bindings;  // stage -> backend name
    MsgrConfig msgr;
    int retries = 3;                   // R: malformed-output retry budget per stage call
    std::vector<std::string> fusion;   // flip stages, highest priority first
    std::string cache_dir;
    std::string prompt_dir;
    std::string work_dir;              // intermediate stage files; may be empty
    int concurrency = 1;
    StageDefaults defaults;

    const BackendSpec& backend_spec(const std::string& name) const;
    /// Backend bound to a stage; throws ConfigError when the stage has no
    /// binding, UnknownBackend when the binding does not resolve.
    const BackendSpec& bound_backend(const std::string& stage) const;
};

RunConfig parse_run_config(std::string_view json_text, const std::string& base_dir);
RunConfig load_run_config(const std::string& path);

}  // namespace mcabsa
