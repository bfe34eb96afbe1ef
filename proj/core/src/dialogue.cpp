#include "mcabsa/dialogue.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include <json.hpp>
#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "mcabsa/errors.hpp"

namespace mcabsa {

using nlohmann::json;

const char* to_string(AttachmentKind kind) {
    switch (kind) {
        case AttachmentKind::audio: return "audio";
        case AttachmentKind::image: return "image";
        case AttachmentKind::video: return "video";
    }
    return "audio";
}

const char* to_string(TriggerCategory trigger) {
    switch (trigger) {
        case TriggerCategory::new_information: return "new_information";
        case TriggerCategory::logical_argumentation: return "logical_argumentation";
        case TriggerCategory::participant_feedback: return "participant_feedback";
        case TriggerCategory::self_reflection: return "self_reflection";
    }
    return "new_information";
}

const char* trigger_full_name(TriggerCategory trigger) {
    switch (trigger) {
        case TriggerCategory::new_information: return "introduction of new information";
        case TriggerCategory::logical_argumentation: return "logical argumentation";
        case TriggerCategory::participant_feedback: return "participant feedback and interaction";
        case TriggerCategory::self_reflection: return "personal experience and self-reflection";
    }
    return "introduction of new information";
}

namespace {

constexpr std::array<TriggerCategory, 4> kTriggerOrder = {
    TriggerCategory::new_information,
    TriggerCategory::logical_argumentation,
    TriggerCategory::participant_feedback,
    TriggerCategory::self_reflection,
};

// Lowercase, hyphens/underscores to spaces, drop everything outside
// [a-z0-9 ], collapse runs of spaces.
std::string trigger_canon(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char raw : text) {
        char c = raw;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c == '-' || c == '_' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            pending_space = !out.empty();
            continue;
        }
        bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
        if (!keep) continue;
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

// Replies shorter than this never match as a fragment of a category name;
// two-letter scraps would otherwise map onto arbitrary categories.
constexpr size_t kMinFragmentLength = 4;

}  // namespace

std::optional<TriggerCategory> parse_trigger(std::string_view text) {
    const std::string reply = trigger_canon(text);
    if (reply.empty()) return std::nullopt;

    // Pass 1: a category name appears inside the reply.
    for (TriggerCategory t : kTriggerOrder) {
        if (reply.find(trigger_canon(trigger_full_name(t))) != std::string::npos) return t;
        if (reply.find(trigger_canon(to_string(t))) != std::string::npos) return t;
    }
    // Pass 2: the reply is a fragment of a category name.
    if (reply.size() >= kMinFragmentLength) {
        for (TriggerCategory t : kTriggerOrder) {
            if (trigger_canon(trigger_full_name(t)).find(reply) != std::string::npos) return t;
        }
    }
    return std::nullopt;
}

bool Dialogue::has_utterance(int utterance_id) const {
    return std::any_of(utterances.begin(), utterances.end(),
                       [&](const Utterance& u) { return u.utterance_id == utterance_id; });
}

namespace {

// One pass of the normalization pipeline, in contract order.
std::string normalize_pass(std::string_view s) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);

    icu::UnicodeString text =
        icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    text.toLower(icu::Locale::getRoot());
    if (nfc != nullptr && U_SUCCESS(status)) {
        icu::UnicodeString composed = nfc->normalize(text, status);
        if (U_SUCCESS(status)) text = composed;
    }

    // Trim and collapse whitespace runs.
    icu::UnicodeString collapsed;
    bool pending_space = false;
    for (int32_t i = 0; i < text.length();) {
        UChar32 c = text.char32At(i);
        i += U16_LENGTH(c);
        if (u_isUWhiteSpace(c)) {
            pending_space = collapsed.length() > 0;
            continue;
        }
        if (pending_space) {
            collapsed.append(static_cast<UChar32>(' '));
            pending_space = false;
        }
        collapsed.append(c);
    }

    // Strip surrounding quote pairs.
    while (collapsed.length() >= 2) {
        char16_t first = collapsed.charAt(0);
        char16_t last = collapsed.charAt(collapsed.length() - 1);
        if (first == last && (first == u'"' || first == u'\'')) {
            collapsed.remove(collapsed.length() - 1, 1);
            collapsed.remove(0, 1);
        } else {
            break;
        }
    }

    // Strip the trailing run of terminal punctuation.
    while (collapsed.length() >= 1) {
        char16_t last = collapsed.charAt(collapsed.length() - 1);
        if (last == u'.' || last == u',' || last == u'!' || last == u'?') {
            collapsed.remove(collapsed.length() - 1, 1);
        } else {
            break;
        }
    }

    std::string out;
    collapsed.toUTF8String(out);
    return out;
}

}  // namespace

std::string normalize_span(std::string_view s) {
    // Quote stripping can expose new trailing punctuation and vice versa;
    // iterate to a fixpoint so the function is idempotent.
    std::string current = normalize_pass(s);
    for (;;) {
        std::string next = normalize_pass(current);
        if (next == current) return current;
        current = std::move(next);
    }
}

std::string render_transcript(const Dialogue& dialogue, bool include_captions) {
    std::ostringstream out;
    bool first = true;
    for (const Utterance& u : dialogue.utterances) {
        if (!first) out << '\n';
        first = false;
        out << '#' << u.utterance_id << ' ' << u.speaker;
        if (u.reply_to) out << " (reply to #" << *u.reply_to << ')';
        out << ": " << u.text;
        if (include_captions) {
            for (const Attachment& a : u.attachments) {
                out << "\n  [" << to_string(a.kind)
                    << " caption: " << (a.caption ? *a.caption : a.uri) << ']';
            }
        }
    }
    return out.str();
}

namespace {

json parse_json_or_throw(std::string_view text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw SchemaError("", "", what + " is not valid JSON");
    }
    return j;
}

std::string schema_string(const json& obj, const char* key, const std::string& doc_id,
                          const std::string& path, bool allow_empty = false) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw SchemaError(doc_id, path + "." + key, "expected a string");
    }
    auto value = it->get<std::string>();
    if (!allow_empty && value.empty()) {
        throw SchemaError(doc_id, path + "." + key, "must be nonempty");
    }
    return value;
}

Sextuple sextuple_from_json(const json& obj, const std::string& doc_id,
                            const std::string& path) {
    if (!obj.is_object()) throw SchemaError(doc_id, path, "expected a sextuple object");
    Sextuple s;
    s.holder = schema_string(obj, "holder", doc_id, path, true);
    s.target = schema_string(obj, "target", doc_id, path, true);
    s.aspect = schema_string(obj, "aspect", doc_id, path, true);
    s.opinion = schema_string(obj, "opinion", doc_id, path, true);
    s.sentiment = schema_string(obj, "sentiment", doc_id, path, true);
    s.rationale = schema_string(obj, "rationale", doc_id, path, true);
    const std::array<std::pair<const char*, const std::string*>, 6> fields = {{
        {"holder", &s.holder},
        {"target", &s.target},
        {"aspect", &s.aspect},
        {"opinion", &s.opinion},
        {"sentiment", &s.sentiment},
        {"rationale", &s.rationale},
    }};
    for (const auto& [name, value] : fields) {
        if (normalize_span(*value).empty()) {
            throw SchemaError(doc_id, path + "." + name, "empty after normalization");
        }
    }
    if (auto it = obj.find("anchor_utterance"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
            throw SchemaError(doc_id, path + ".anchor_utterance", "expected an integer");
        }
        s.anchor_utterance = it->get<int>();
    }
    return s;
}

json sextuple_to_json(const Sextuple& s) {
    json obj = {
        {"holder", s.holder},       {"target", s.target},       {"aspect", s.aspect},
        {"opinion", s.opinion},     {"sentiment", s.sentiment}, {"rationale", s.rationale},
    };
    if (s.anchor_utterance) obj["anchor_utterance"] = *s.anchor_utterance;
    return obj;
}

FlipRecord flip_from_json(const json& obj, const std::string& doc_id, const std::string& path) {
    if (!obj.is_object()) throw SchemaError(doc_id, path, "expected a flip object");
    FlipRecord f;
    f.holder = schema_string(obj, "holder", doc_id, path, true);
    f.target = schema_string(obj, "target", doc_id, path, true);
    f.aspect = schema_string(obj, "aspect", doc_id, path, true);
    f.initial_sentiment = schema_string(obj, "initial_sentiment", doc_id, path, true);
    f.flipped_sentiment = schema_string(obj, "flipped_sentiment", doc_id, path, true);
    if (normalize_span(f.initial_sentiment) == normalize_span(f.flipped_sentiment)) {
        throw SchemaError(doc_id, path, "initial and flipped sentiment are equal");
    }
    auto trigger_text = schema_string(obj, "trigger", doc_id, path);
    auto trigger = parse_trigger(trigger_text);
    if (!trigger) {
        throw SchemaError(doc_id, path + ".trigger", "unrecognized trigger \"" + trigger_text + "\"");
    }
    f.trigger = *trigger;
    return f;
}

json flip_to_json(const FlipRecord& f) {
    return json{
        {"holder", f.holder},
        {"target", f.target},
        {"aspect", f.aspect},
        {"initial_sentiment", f.initial_sentiment},
        {"flipped_sentiment", f.flipped_sentiment},
        {"trigger", to_string(f.trigger)},
    };
}

Utterance utterance_from_json(const json& obj, const std::string& doc_id, size_t index) {
    const std::string path = "dialogue[" + std::to_string(index) + "]";
    if (!obj.is_object()) throw SchemaError(doc_id, path, "expected an utterance object");

    Utterance u;
    auto id_it = obj.find("utterance_id");
    if (id_it == obj.end() || !id_it->is_number_integer() || id_it->get<int>() < 0) {
        throw SchemaError(doc_id, path + ".utterance_id", "expected an integer >= 0");
    }
    u.utterance_id = id_it->get<int>();
    u.speaker = schema_string(obj, "speaker", doc_id, path);

    if (auto it = obj.find("text"); it != obj.end() && !it->is_null()) {
        if (!it->is_string()) throw SchemaError(doc_id, path + ".text", "expected a string");
        u.text = it->get<std::string>();
    }
    if (auto it = obj.find("reply_to"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer()) {
            throw SchemaError(doc_id, path + ".reply_to", "expected an integer");
        }
        u.reply_to = it->get<int>();
    }

    const std::array<std::pair<const char*, AttachmentKind>, 3> kinds = {{
        {"audio", AttachmentKind::audio},
        {"image", AttachmentKind::image},
        {"video", AttachmentKind::video},
    }};
    for (const auto& [key, kind] : kinds) {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) continue;
        if (!it->is_string()) throw SchemaError(doc_id, path + "." + key, "expected a URI string");
        Attachment a;
        a.kind = kind;
        a.uri = it->get<std::string>();
        if (a.uri.empty()) throw SchemaError(doc_id, path + "." + key, "URI must be nonempty");
        std::string caption_key = std::string(key) + "_caption";
        if (auto cap = obj.find(caption_key); cap != obj.end() && !cap->is_null()) {
            if (!cap->is_string() || cap->get<std::string>().empty()) {
                throw SchemaError(doc_id, path + "." + caption_key, "caption must be nonempty");
            }
            a.caption = cap->get<std::string>();
        }
        u.attachments.push_back(std::move(a));
    }

    if (u.text.empty() && u.attachments.empty()) {
        throw SchemaError(doc_id, path, "utterance has neither text nor attachments");
    }
    return u;
}

json utterance_to_json(const Utterance& u) {
    json obj = {{"utterance_id", u.utterance_id}, {"speaker", u.speaker}, {"text", u.text}};
    if (u.reply_to) obj["reply_to"] = *u.reply_to;
    for (const Attachment& a : u.attachments) {
        const std::string key = to_string(a.kind);
        obj[key] = a.uri;
        if (a.caption) obj[key + "_caption"] = *a.caption;
    }
    return obj;
}

json dialogue_to_json(const Dialogue& d) {
    json obj = {{"doc_id", d.doc_id}};
    json turns = json::array();
    for (const Utterance& u : d.utterances) turns.push_back(utterance_to_json(u));
    obj["dialogue"] = std::move(turns);
    if (d.gold_sextuples) {
        json gold = json::array();
        for (const Sextuple& s : *d.gold_sextuples) gold.push_back(sextuple_to_json(s));
        obj["sextuples"] = std::move(gold);
    }
    if (d.gold_flips) {
        json gold = json::array();
        for (const FlipRecord& f : *d.gold_flips) gold.push_back(flip_to_json(f));
        obj["flips"] = std::move(gold);
    }
    return obj;
}

Dialogue dialogue_from_json(const json& obj, size_t index) {
    if (!obj.is_object()) {
        throw SchemaError("", "[" + std::to_string(index) + "]", "expected a dialogue object");
    }
    Dialogue d;
    d.doc_id = schema_string(obj, "doc_id", "", "[" + std::to_string(index) + "]");

    auto turns = obj.find("dialogue");
    if (turns == obj.end() || !turns->is_array() || turns->empty()) {
        throw SchemaError(d.doc_id, "dialogue", "expected a nonempty utterance array");
    }
    int last_id = -1;
    std::set<int> seen_ids;
    for (size_t i = 0; i < turns->size(); ++i) {
        Utterance u = utterance_from_json((*turns)[i], d.doc_id, i);
        if (u.utterance_id <= last_id) {
            throw SchemaError(d.doc_id, "dialogue[" + std::to_string(i) + "].utterance_id",
                              "utterance_ids must be strictly increasing");
        }
        if (u.reply_to &&
            (*u.reply_to >= u.utterance_id || seen_ids.find(*u.reply_to) == seen_ids.end())) {
            throw DanglingReplyTo(d.doc_id, u.utterance_id, *u.reply_to);
        }
        last_id = u.utterance_id;
        seen_ids.insert(u.utterance_id);
        d.utterances.push_back(std::move(u));
    }

    if (auto it = obj.find("sextuples"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw SchemaError(d.doc_id, "sextuples", "expected an array");
        std::vector<Sextuple> gold;
        for (size_t i = 0; i < it->size(); ++i) {
            gold.push_back(
                sextuple_from_json((*it)[i], d.doc_id, "sextuples[" + std::to_string(i) + "]"));
        }
        d.gold_sextuples = std::move(gold);
    }
    if (auto it = obj.find("flips"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) throw SchemaError(d.doc_id, "flips", "expected an array");
        std::vector<FlipRecord> gold;
        for (size_t i = 0; i < it->size(); ++i) {
            gold.push_back(flip_from_json((*it)[i], d.doc_id, "flips[" + std::to_string(i) + "]"));
        }
        d.gold_flips = std::move(gold);
    }
    return d;
}

}  // namespace

std::vector<Dialogue> parse_dataset(std::string_view json_text) {
    json root = parse_json_or_throw(json_text, "dataset");
    if (!root.is_array()) throw SchemaError("", "", "dataset must be a JSON array");

    std::vector<Dialogue> dialogues;
    std::set<std::string> doc_ids;
    for (size_t i = 0; i < root.size(); ++i) {
        Dialogue d = dialogue_from_json(root[i], i);
        if (!doc_ids.insert(d.doc_id).second) throw DuplicateDocId(d.doc_id);
        dialogues.push_back(std::move(d));
    }
    return dialogues;
}

std::string serialize_dataset(const std::vector<Dialogue>& dialogues) {
    json root = json::array();
    for (const Dialogue& d : dialogues) root.push_back(dialogue_to_json(d));
    return root.dump(2);
}

Dialogue parse_dialogue(std::string_view json_text) {
    return dialogue_from_json(parse_json_or_throw(json_text, "dialogue"), 0);
}

std::string serialize_dialogue(const Dialogue& d) { return dialogue_to_json(d).dump(); }

SextuplePredictions parse_sextuple_predictions(std::string_view json_text) {
    json root = parse_json_or_throw(json_text, "predictions");
    if (!root.is_object()) {
        throw SchemaError("", "", "predictions must be a JSON object keyed by doc_id");
    }
    SextuplePredictions out;
    for (const auto& [doc_id, list] : root.items()) {
        if (!list.is_array()) throw SchemaError(doc_id, "", "expected an array of sextuples");
        std::vector<Sextuple> rows;
        for (size_t i = 0; i < list.size(); ++i) {
            rows.push_back(sextuple_from_json(list[i], doc_id, "[" + std::to_string(i) + "]"));
        }
        out.emplace(doc_id, std::move(rows));
    }
    return out;
}

std::string serialize_sextuple_predictions(const SextuplePredictions& predictions) {
    json root = json::object();
    for (const auto& [doc_id, rows] : predictions) {
        json list = json::array();
        for (const Sextuple& s : rows) list.push_back(sextuple_to_json(s));
        root[doc_id] = std::move(list);
    }
    return root.dump(2);
}

FlipPredictions parse_flip_predictions(std::string_view json_text) {
    json root = parse_json_or_throw(json_text, "predictions");
    if (!root.is_object()) {
        throw SchemaError("", "", "predictions must be a JSON object keyed by doc_id");
    }
    FlipPredictions out;
    for (const auto& [doc_id, list] : root.items()) {
        if (!list.is_array()) throw SchemaError(doc_id, "", "expected an array of flip records");
        std::vector<FlipRecord> rows;
        for (size_t i = 0; i < list.size(); ++i) {
            rows.push_back(flip_from_json(list[i], doc_id, "[" + std::to_string(i) + "]"));
        }
        out.emplace(doc_id, std::move(rows));
    }
    return out;
}

std::string serialize_flip_predictions(const FlipPredictions& predictions) {
    json root = json::object();
    for (const auto& [doc_id, rows] : predictions) {
        json list = json::array();
        for (const FlipRecord& f : rows) list.push_back(flip_to_json(f));
        root[doc_id] = std::move(list);
    }
    return root.dump(2);
}

}  // namespace mcabsa
