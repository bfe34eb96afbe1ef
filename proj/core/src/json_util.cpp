#include "json_util.hpp"

#include "mcabsa/errors.hpp"

namespace mcabsa::detail {

namespace {

// Returns one past the end of the balanced value starting at `open`, or
// npos when the brackets never balance. Skips string literals and escapes.
size_t balanced_end(std::string_view text, size_t open) {
    int depth = 0;
    bool in_string = false;
    for (size_t i = open; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_string = false;
            }
            continue;
        }
        switch (c) {
            case '"': in_string = true; break;
            case '[':
            case '{': ++depth; break;
            case ']':
            case '}':
                --depth;
                if (depth == 0) return i + 1;
                break;
            default: break;
        }
    }
    return std::string_view::npos;
}

}  // namespace

std::optional<nlohmann::json> extract_json(
    std::string_view text, const std::function<bool(const nlohmann::json&)>& accept) {
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c != '[' && c != '{') continue;
        size_t end = balanced_end(text, i);
        if (end == std::string_view::npos) continue;
        auto candidate = nlohmann::json::parse(text.substr(i, end - i), nullptr, false);
        if (!candidate.is_discarded() && (!accept || accept(candidate))) {
            return candidate;
        }
    }
    return std::nullopt;
}

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw ParseFailure(context + ": missing string field \"" + key + "\"");
    }
    return it->get<std::string>();
}

}  // namespace mcabsa::detail
