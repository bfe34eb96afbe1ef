#pragma once

#include <optional>
#include <string>

#include "mcabsa/dialogue.hpp"
#include "mcabsa/msgr.hpp"
#include "mcabsa/prompts.hpp"

namespace mcabsa {

struct HolderOpinion {
    std::string holder;
    std::string opinion;
    std::optional<int> anchor_utterance;
    bool anchor_dropped = false;  // reply named an utterance the dialogue lacks
};

/// Holder and opinion for one target-aspect pair. The extractor reply must
/// be a JSON object {"holder","opinion","utterance_id"}; a retry appends a
/// format reminder, and the attempt budget is the stage's `retries`.
/// Throws ParseFailure once the budget is spent.
HolderOpinion extract_holder_opinion(const Dialogue& dialogue, const TAPair& pair,
                                     const StageClient& extractor);

struct PartialSextuple {
    std::string holder;
    std::string target;
    std::string aspect;
    std::string opinion;
    std::optional<int> anchor_utterance;
};

/// Fills in sentiment and rationale, preserving the four known elements
/// verbatim. Reply shape {"sentiment","rationale"}, both nonempty; retries
/// as above. Throws ParseFailure once the budget is spent.
Sextuple complete_sextuple(const Dialogue& dialogue, const PartialSextuple& partial,
                           const StageClient& extractor);

/// Refinement pass over a preliminary sextuple: only opinion, sentiment and
/// rationale may change; holder, target and aspect are force-restored from
/// the input. Never throws — malformed refiner output degrades to the
/// preliminary sextuple.
Sextuple refine_sextuple(const Dialogue& dialogue, const Sextuple& preliminary,
                         const StageClient& refiner);

}  // namespace mcabsa
