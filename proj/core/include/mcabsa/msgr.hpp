#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mcabsa/dialogue.hpp"
#include "mcabsa/prompts.hpp"

namespace mcabsa {

/// A target-aspect pair; fields are stored in normalized form.
struct TAPair {
    std::string target;
    std::string aspect;

    bool operator==(const TAPair&) const = default;
    auto operator<=>(const TAPair&) const = default;
};

using TAList = std::vector<TAPair>;

struct MsgrConfig {
    int h = 3;                 // consensus threshold
    int max_samples = 10;      // sampling budget, >= h
    double temperature = 1.0;  // sampling temperature
};

/// Frequency bookkeeping over candidate-list lengths.
struct ConsensusState {
    std::map<size_t, int> freq;
    std::map<size_t, std::vector<TAList>> lists_by_length;
    int samples_consumed = 0;
    int parse_failures = 0;
};

struct ConsensusResult {
    size_t length = 0;
    std::vector<TAList> lists;  // the retained lists, all of size `length`
    bool fallback = false;      // budget exhausted before any length reached h
    ConsensusState state;
};

/// Parses one sampler reply: a JSON array of {"target","aspect"} objects,
/// tolerating surrounding prose and code fences. Pairs are normalized and
/// exact duplicates within the list are dropped (first occurrence kept).
/// Throws ParseFailure when no well-formed array is found or a pair
/// normalizes to empty.
TAList parse_ta_list(std::string_view text);

/// Samples sequentially (sample_index 0,1,2,...) at cfg.temperature until
/// some list length reaches h, returning that length and the first h lists
/// of that length in arrival order. Parse failures consume budget but carry
/// no length evidence. On budget exhaustion the modal length wins, ties
/// broken toward the smaller length, and the result is flagged as fallback.
/// Throws NoValidSamples when every sample failed to parse.
ConsensusResult run_consensus(const Dialogue& dialogue, const StageClient& sampler,
                              const MsgrConfig& cfg);

struct TACandidate {
    TAPair pair;
    int count = 0;
};

/// The candidate set for position i: pairs at index i across the retained
/// lists, deduplicated by normalized (target, aspect) with first-occurrence
/// order and occurrence counts. Throws std::out_of_range when i is not a
/// valid index of every list.
std::vector<TACandidate> candidate_set_at(const std::vector<TAList>& lists, size_t i);

/// Picks the pair for one position. Singleton sets short-circuit with zero
/// backend calls; otherwise the refiner is prompted with the enumerated
/// candidates and its 1-based choice is parsed (first integer in the reply,
/// or an explicit {"target","aspect"} object). An unusable reply falls back
/// to the highest-count candidate, ties broken by first occurrence.
TAPair adjudicate_index(const Dialogue& dialogue, const std::vector<TACandidate>& candidates,
                        size_t i, const StageClient& refiner);

/// Full target-aspect extraction: consensus over repeated samples, then
/// per-index adjudication. Exact duplicate pairs in the final list are
/// collapsed, keeping the first occurrence.
TAList extract_ta(const Dialogue& dialogue, const StageClient& sampler,
                  const StageClient& refiner, const MsgrConfig& cfg);

}  // namespace mcabsa
