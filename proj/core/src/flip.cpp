#include "mcabsa/flip.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include <json.hpp>

#include "json_util.hpp"
#include "mcabsa/errors.hpp"

namespace mcabsa {

using nlohmann::json;

std::vector<FlipCandidate> detect_flips_rule(const std::vector<Sextuple>& sextuples,
                                             std::vector<std::string>* warnings) {
    using Key = std::tuple<std::string, std::string, std::string>;
    struct Point {
        int anchor;
        size_t input_order;
        const Sextuple* sextuple;
    };
    std::map<Key, std::vector<Point>> groups;
    for (size_t i = 0; i < sextuples.size(); ++i) {
        const Sextuple& s = sextuples[i];
        if (!s.anchor_utterance) {
            if (warnings) {
                warnings->push_back("sextuple #" + std::to_string(i) + " (" + s.target + ", " +
                                    s.aspect + ") has no anchor utterance; skipped");
            }
            continue;
        }
        Key key{normalize_span(s.holder), normalize_span(s.target), normalize_span(s.aspect)};
        groups[key].push_back({*s.anchor_utterance, i, &s});
    }

    std::vector<FlipCandidate> records;
    for (auto& [key, points] : groups) {
        std::stable_sort(points.begin(), points.end(),
                         [](const Point& a, const Point& b) { return a.anchor < b.anchor; });
        for (size_t i = 0; i + 1 < points.size(); ++i) {
            const Sextuple& earlier = *points[i].sextuple;
            const Sextuple& later = *points[i + 1].sextuple;
            if (normalize_span(earlier.sentiment) == normalize_span(later.sentiment)) continue;
            records.push_back({earlier.holder, earlier.target, earlier.aspect,
                               earlier.sentiment, later.sentiment, points[i + 1].anchor});
        }
    }

    auto record_key = [](const FlipCandidate& r) {
        return std::tie(r.holder, r.target, r.aspect, r.initial_sentiment, r.flipped_sentiment,
                        r.flip_anchor);
    };
    std::sort(records.begin(), records.end(),
              [&](const FlipCandidate& a, const FlipCandidate& b) {
                  return record_key(a) < record_key(b);
              });
    records.erase(std::unique(records.begin(), records.end()), records.end());
    return records;
}

namespace {

std::string category_list() {
    std::string out;
    for (TriggerCategory t :
         {TriggerCategory::new_information, TriggerCategory::logical_argumentation,
          TriggerCategory::participant_feedback, TriggerCategory::self_reflection}) {
        if (!out.empty()) out += '\n';
        out += trigger_full_name(t);
    }
    return out;
}

}  // namespace

TriggerResult classify_trigger(const Dialogue& dialogue, const FlipCandidate& flip,
                               const StageClient& classifier) {
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, true)},
        {"holder", flip.holder},
        {"target", flip.target},
        {"aspect", flip.aspect},
        {"initial_sentiment", flip.initial_sentiment},
        {"flipped_sentiment", flip.flipped_sentiment},
        {"categories", category_list()},
    };
    const std::string scope = dialogue.doc_id + "#" + flip.holder + "|" + flip.target + "|" +
                              flip.aspect + "#a" + std::to_string(flip.flip_anchor) + "#" +
                              flip.initial_sentiment + ">" + flip.flipped_sentiment;

    ChatRequest request = classifier.make_request(scope, vars);
    const int attempts = std::max(1, classifier.retries);
    for (int attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) request.messages.push_back(format_reminder_message());
        if (auto category = parse_trigger(classifier.complete(request).text)) {
            return TriggerResult{*category, false};
        }
    }
    return TriggerResult{TriggerCategory::new_information, true};
}

std::vector<FlipRecord> end_to_end_flips(const Dialogue& dialogue, const StageClient& model) {
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, true)},
        {"categories", category_list()},
    };
    ChatResponse response = model.call(dialogue.doc_id, vars);

    auto is_object_array = [](const json& j) {
        if (!j.is_array()) return false;
        return std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_object(); });
    };
    auto array = detail::extract_json(response.text, is_object_array);
    if (!array) return {};

    std::vector<FlipRecord> records;
    for (const json& e : *array) {
        FlipRecord record;
        bool fields_ok = true;
        const std::initializer_list<std::pair<const char*, std::string*>> fields = {
            {"holder", &record.holder},
            {"target", &record.target},
            {"aspect", &record.aspect},
            {"initial_sentiment", &record.initial_sentiment},
            {"flipped_sentiment", &record.flipped_sentiment},
        };
        for (const auto& [key, slot] : fields) {
            if (!e.contains(key) || !e[key].is_string()) {
                fields_ok = false;
                break;
            }
            *slot = e[key].get<std::string>();
            if (normalize_span(*slot).empty()) fields_ok = false;
        }
        if (!fields_ok) continue;
        if (normalize_span(record.initial_sentiment) ==
            normalize_span(record.flipped_sentiment)) {
            continue;  // not a flip
        }
        if (!e.contains("trigger") || !e["trigger"].is_string()) continue;
        auto trigger = parse_trigger(e["trigger"].get<std::string>());
        if (!trigger) continue;
        record.trigger = *trigger;
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<FlipRecord> fuse_hierarchical(const std::vector<std::vector<FlipRecord>>& results) {
    for (const auto& list : results) {
        if (!list.empty()) return list;
    }
    return {};
}

}  // namespace mcabsa
