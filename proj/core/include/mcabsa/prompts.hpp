#pragma once

#include <map>
#include <string>
#include <string_view>

#include "mcabsa/backend.hpp"

namespace mcabsa {

using TemplateVars = std::map<std::string, std::string>;

/// Substitutes {name} placeholders for the provided vars in a single pass
/// over the template. Unknown braces (JSON examples inside prompts) are left
/// untouched, and substituted values are never rescanned.
std::string render_template(std::string_view template_text, const TemplateVars& vars);

/// Reads `<name>.txt` from the prompt directory. Throws ConfigError when the
/// file is missing, so misconfiguration surfaces before any backend call.
std::string load_template(const std::string& prompt_dir, const std::string& name);

/// One pipeline stage bound to a provider: prompt template, model, sampling
/// parameters and the retry budget for malformed-output loops. Requests carry
/// the stage tag as the system message so scripted providers and run logs can
/// identify them.
struct StageClient {
    ChatBackend* backend = nullptr;
    std::string model;
    std::string template_text;
    std::string tag_prefix;  // e.g. "msgr_sample" or "flip_end_to_end#flip_model_1"
    double temperature = 0.0;
    int max_tokens = 1024;
    int retries = 3;

    /// Builds the two-message request: system = "<tag_prefix>#<scope>",
    /// user = rendered template.
    ChatRequest make_request(const std::string& scope, const TemplateVars& vars,
                             int sample_index = 0) const;

    ChatResponse complete(const ChatRequest& request) const;

    /// make_request + complete in one step.
    ChatResponse call(const std::string& scope, const TemplateVars& vars,
                      int sample_index = 0) const;
};

/// Appended to a request when a stage retries after malformed output. Each
/// retry appends one more copy, so every retry is a distinct request.
ChatMessage format_reminder_message();

}  // namespace mcabsa
