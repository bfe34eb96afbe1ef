#pragma once

#include <string>
#include <vector>

#include "mcabsa/dialogue.hpp"
#include "mcabsa/prompts.hpp"

namespace mcabsa {

/// A detected sentiment change before trigger classification. Sentiments are
/// the raw strings from the underlying sextuples; flip_anchor is the
/// utterance where the later sentiment was expressed.
struct FlipCandidate {
    std::string holder;
    std::string target;
    std::string aspect;
    std::string initial_sentiment;
    std::string flipped_sentiment;
    int flip_anchor = 0;

    bool operator==(const FlipCandidate&) const = default;
};

/// Rule-based flip detection over one dialogue's sextuples: group by
/// normalized (holder, target, aspect), order each group by anchor (ties by
/// input order), and emit one record per consecutive pair whose normalized
/// sentiments differ. Identical records are deduplicated and the output is
/// sorted by content, so sextuple order only matters within a group.
/// Sextuples without an anchor are skipped with a warning.
std::vector<FlipCandidate> detect_flips_rule(const std::vector<Sextuple>& sextuples,
                                             std::vector<std::string>* warnings = nullptr);

struct TriggerResult {
    TriggerCategory category = TriggerCategory::new_information;
    bool defaulted = false;  // reply never parsed; first category forced
};

/// Classifies the trigger behind one flip. The prompt carries the transcript,
/// the flip tuple and the four category names; replies are parsed with the
/// TriggerCategory substring rule. After the retry budget the first category
/// is forced and flagged.
TriggerResult classify_trigger(const Dialogue& dialogue, const FlipCandidate& flip,
                               const StageClient& classifier);

/// End-to-end flip detection with a single prompt returning a JSON array of
/// six-field flip objects. Records violating the FlipRecord invariants are
/// dropped individually; an unparseable reply yields an empty list, which is
/// meaningful to fusion.
std::vector<FlipRecord> end_to_end_flips(const Dialogue& dialogue, const StageClient& model);

/// Hierarchical fusion: the first non-empty per-model list wins, in priority
/// order; all-empty fuses to empty.
std::vector<FlipRecord> fuse_hierarchical(const std::vector<std::vector<FlipRecord>>& results);

}  // namespace mcabsa
