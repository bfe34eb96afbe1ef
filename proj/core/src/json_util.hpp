#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include <json.hpp>

namespace mcabsa::detail {

/// Scans free-form model output for the first balanced JSON value that
/// parses and satisfies `accept`. Tolerates surrounding prose and Markdown
/// code fences (the scanner keys on brackets, so fences need no special
/// handling). Returns nullopt when no candidate qualifies.
std::optional<nlohmann::json> extract_json(
    std::string_view text, const std::function<bool(const nlohmann::json&)>& accept);

/// Fetches a required string member, throwing with `context` on absence or
/// wrong type.
std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& context);

}  // namespace mcabsa::detail
