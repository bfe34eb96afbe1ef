#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mcabsa {

enum class AttachmentKind { audio, image, video };

const char* to_string(AttachmentKind kind);

struct Attachment {
    AttachmentKind kind = AttachmentKind::audio;
    std::string uri;
    std::optional<std::string> caption;

    bool operator==(const Attachment&) const = default;
};

struct Utterance {
    int utterance_id = 0;
    std::string speaker;
    std::string text;
    std::optional<int> reply_to;
    std::vector<Attachment> attachments;

    bool operator==(const Utterance&) const = default;
};

/// One element of the Subtask-I output: who said what about which aspect of
/// which target, with what polarity and why. anchor_utterance ties the
/// sextuple back to the turn it was extracted from; it is metadata, not part
/// of any match key.
struct Sextuple {
    std::string holder;
    std::string target;
    std::string aspect;
    std::string opinion;
    std::string sentiment;
    std::string rationale;
    std::optional<int> anchor_utterance;

    bool operator==(const Sextuple&) const = default;
};

enum class TriggerCategory {
    new_information,
    logical_argumentation,
    participant_feedback,
    self_reflection,
};

/// Canonical id, e.g. "new_information".
const char* to_string(TriggerCategory trigger);

/// Long-form category name as used in prompts, e.g.
/// "introduction of new information".
const char* trigger_full_name(TriggerCategory trigger);

/// Maps free text onto a category: case-insensitive, tolerant of hyphens and
/// underscores, matching either direction (the reply contains a category
/// name, or the reply is a fragment of one). Returns nullopt when nothing
/// matches unambiguously.
std::optional<TriggerCategory> parse_trigger(std::string_view text);

struct FlipRecord {
    std::string holder;
    std::string target;
    std::string aspect;
    std::string initial_sentiment;
    std::string flipped_sentiment;
    TriggerCategory trigger = TriggerCategory::new_information;

    bool operator==(const FlipRecord&) const = default;
};

struct Dialogue {
    std::string doc_id;
    std::vector<Utterance> utterances;
    std::optional<std::vector<Sextuple>> gold_sextuples;
    std::optional<std::vector<FlipRecord>> gold_flips;

    bool has_utterance(int utterance_id) const;

    bool operator==(const Dialogue&) const = default;
};

/// Span normalization used by every matcher: lowercase (Unicode-aware),
/// NFC, trim, collapse internal whitespace, strip surrounding quote pairs,
/// strip the trailing run of '.', ',', '!', '?'. Idempotent.
std::string normalize_span(std::string_view s);

/// Deterministic line-per-utterance rendering used in every prompt:
///   #<id> <speaker> (reply to #<k>): <text>
/// followed, when include_captions is set, by one indented line per
/// attachment: [<kind> caption: <caption or uri>].
std::string render_transcript(const Dialogue& dialogue, bool include_captions);

/// Parses a dataset file (UTF-8 JSON array of dialogue objects) and
/// validates every invariant. Throws SchemaError / DuplicateDocId /
/// DanglingReplyTo.
std::vector<Dialogue> parse_dataset(std::string_view json_text);

/// Inverse of parse_dataset; parse(serialize(d)) == d.
std::string serialize_dataset(const std::vector<Dialogue>& dialogues);

/// Single-dialogue variants used for JSON-lines stage files.
Dialogue parse_dialogue(std::string_view json_text);
std::string serialize_dialogue(const Dialogue& dialogue);  // compact, one line

/// Prediction files map doc_id to a list of sextuples or flip records.
using SextuplePredictions = std::map<std::string, std::vector<Sextuple>>;
using FlipPredictions = std::map<std::string, std::vector<FlipRecord>>;

SextuplePredictions parse_sextuple_predictions(std::string_view json_text);
std::string serialize_sextuple_predictions(const SextuplePredictions& predictions);

FlipPredictions parse_flip_predictions(std::string_view json_text);
std::string serialize_flip_predictions(const FlipPredictions& predictions);

}  // namespace mcabsa
