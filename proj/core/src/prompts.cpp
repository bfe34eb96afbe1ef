#include "mcabsa/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcabsa/errors.hpp"

namespace mcabsa {

std::string render_template(std::string_view template_text, const TemplateVars& vars) {
    std::string out;
    out.reserve(template_text.size());
    size_t i = 0;
    while (i < template_text.size()) {
        char c = template_text[i];
        if (c != '{') {
            out.push_back(c);
            ++i;
            continue;
        }
        size_t close = template_text.find('}', i + 1);
        if (close != std::string_view::npos) {
            std::string name(template_text.substr(i + 1, close - i - 1));
            if (auto it = vars.find(name); it != vars.end()) {
                out += it->second;
                i = close + 1;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

std::string load_template(const std::string& prompt_dir, const std::string& name) {
    const std::filesystem::path path = std::filesystem::path(prompt_dir) / (name + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("prompt template missing: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

ChatRequest StageClient::make_request(const std::string& scope, const TemplateVars& vars,
                                      int sample_index) const {
    ChatRequest request;
    request.backend_name = backend ? backend->name() : "";
    request.model = model;
    std::string tag = tag_prefix;
    if (!scope.empty()) tag += "#" + scope;
    request.messages.push_back({"system", tag});
    request.messages.push_back({"user", render_template(template_text, vars)});
    request.temperature = temperature;
    request.max_tokens = max_tokens;
    request.sample_index = sample_index;
    return request;
}

ChatResponse StageClient::complete(const ChatRequest& request) const {
    if (backend == nullptr) throw UnknownBackend("<unbound stage>");
    return backend->complete(request);
}

ChatResponse StageClient::call(const std::string& scope, const TemplateVars& vars,
                               int sample_index) const {
    return complete(make_request(scope, vars, sample_index));
}

ChatMessage format_reminder_message() {
    return {"user",
            "Your previous reply could not be parsed. Answer again with exactly the JSON "
            "format requested and nothing else."};
}

}  // namespace mcabsa
