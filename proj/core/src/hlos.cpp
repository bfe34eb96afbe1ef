#include "mcabsa/hlos.hpp"

#include <json.hpp>

#include "json_util.hpp"
#include "mcabsa/errors.hpp"

namespace mcabsa {

using nlohmann::json;

namespace {

bool nonempty_span(const std::string& s) { return !normalize_span(s).empty(); }

// Runs the call-parse-retry loop shared by the extraction stages. `parse`
// returns nullopt for malformed replies; each retry appends one more format
// reminder so the request stays distinct.
template <typename T, typename ParseFn>
std::optional<T> call_with_retries(const StageClient& stage, const std::string& scope,
                                   const TemplateVars& vars, ParseFn parse) {
    ChatRequest request = stage.make_request(scope, vars);
    const int attempts = std::max(1, stage.retries);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) request.messages.push_back(format_reminder_message());
        if (auto value = parse(stage.complete(request).text)) return value;
    }
    return std::nullopt;
}

std::string pair_scope(const Dialogue& d, const std::string& target, const std::string& aspect) {
    return d.doc_id + "#" + target + "|" + aspect;
}

}  // namespace

HolderOpinion extract_holder_opinion(const Dialogue& dialogue, const TAPair& pair,
                                     const StageClient& extractor) {
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, true)},
        {"target", pair.target},
        {"aspect", pair.aspect},
    };

    auto parse = [&](const std::string& text) -> std::optional<HolderOpinion> {
        auto accept = [](const json& j) {
            return j.is_object() && j.contains("holder") && j["holder"].is_string() &&
                   j.contains("opinion") && j["opinion"].is_string();
        };
        auto obj = detail::extract_json(text, accept);
        if (!obj) return std::nullopt;
        HolderOpinion ho;
        ho.holder = (*obj)["holder"].get<std::string>();
        ho.opinion = (*obj)["opinion"].get<std::string>();
        if (!nonempty_span(ho.holder) || !nonempty_span(ho.opinion)) return std::nullopt;
        if (auto it = obj->find("utterance_id"); it != obj->end() && it->is_number_integer()) {
            int anchor = it->get<int>();
            if (dialogue.has_utterance(anchor)) {
                ho.anchor_utterance = anchor;
            } else {
                ho.anchor_dropped = true;
            }
        } else {
            ho.anchor_dropped = true;
        }
        return ho;
    };

    auto result = call_with_retries<HolderOpinion>(
        extractor, pair_scope(dialogue, pair.target, pair.aspect), vars, parse);
    if (!result) {
        throw ParseFailure("holder-opinion extraction failed for (" + pair.target + ", " +
                           pair.aspect + ") in " + dialogue.doc_id);
    }
    return *result;
}

Sextuple complete_sextuple(const Dialogue& dialogue, const PartialSextuple& partial,
                           const StageClient& extractor) {
    if (partial.holder.empty() || partial.target.empty() || partial.aspect.empty() ||
        partial.opinion.empty()) {
        throw std::invalid_argument("complete_sextuple: all four known elements must be set");
    }
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, true)},
        {"holder", partial.holder},
        {"target", partial.target},
        {"aspect", partial.aspect},
        {"opinion", partial.opinion},
    };

    struct SentimentRationale {
        std::string sentiment, rationale;
    };
    auto parse = [](const std::string& text) -> std::optional<SentimentRationale> {
        auto accept = [](const json& j) {
            return j.is_object() && j.contains("sentiment") && j["sentiment"].is_string() &&
                   j.contains("rationale") && j["rationale"].is_string();
        };
        auto obj = detail::extract_json(text, accept);
        if (!obj) return std::nullopt;
        SentimentRationale sr{(*obj)["sentiment"].get<std::string>(),
                              (*obj)["rationale"].get<std::string>()};
        if (!nonempty_span(sr.sentiment) || !nonempty_span(sr.rationale)) return std::nullopt;
        return sr;
    };

    auto result = call_with_retries<SentimentRationale>(
        extractor, pair_scope(dialogue, partial.target, partial.aspect), vars, parse);
    if (!result) {
        throw ParseFailure("sentiment-rationale completion failed for (" + partial.target +
                           ", " + partial.aspect + ") in " + dialogue.doc_id);
    }
    return Sextuple{partial.holder,    partial.target,    partial.aspect,
                    partial.opinion,   result->sentiment, result->rationale,
                    partial.anchor_utterance};
}

Sextuple refine_sextuple(const Dialogue& dialogue, const Sextuple& preliminary,
                         const StageClient& refiner) {
    const json prelim_json = {
        {"holder", preliminary.holder},       {"target", preliminary.target},
        {"aspect", preliminary.aspect},       {"opinion", preliminary.opinion},
        {"sentiment", preliminary.sentiment}, {"rationale", preliminary.rationale},
    };
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, true)},
        {"sextuple", prelim_json.dump()},
    };

    struct Revision {
        std::string opinion, sentiment, rationale;
    };
    auto parse = [](const std::string& text) -> std::optional<Revision> {
        auto accept = [](const json& j) {
            if (!j.is_object()) return false;
            for (const char* key :
                 {"holder", "target", "aspect", "opinion", "sentiment", "rationale"}) {
                if (!j.contains(key) || !j[key].is_string()) return false;
            }
            return true;
        };
        auto obj = detail::extract_json(text, accept);
        if (!obj) return std::nullopt;
        Revision rev{(*obj)["opinion"].get<std::string>(),
                     (*obj)["sentiment"].get<std::string>(),
                     (*obj)["rationale"].get<std::string>()};
        if (!nonempty_span(rev.opinion) || !nonempty_span(rev.sentiment) ||
            !nonempty_span(rev.rationale)) {
            return std::nullopt;
        }
        return rev;
    };

    std::optional<Revision> revision;
    try {
        revision = call_with_retries<Revision>(
            refiner, pair_scope(dialogue, preliminary.target, preliminary.aspect), vars, parse);
    } catch (const Error&) {
        revision = std::nullopt;  // refinement is best-effort, never destructive
    }
    if (!revision) return preliminary;

    Sextuple refined = preliminary;  // holder/target/aspect/anchor preserved structurally
    refined.opinion = std::move(revision->opinion);
    refined.sentiment = std::move(revision->sentiment);
    refined.rationale = std::move(revision->rationale);
    return refined;
}

}  // namespace mcabsa
