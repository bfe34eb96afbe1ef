#include "mcabsa/msgr.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "json_util.hpp"
#include "mcabsa/errors.hpp"

namespace mcabsa {

using nlohmann::json;

TAList parse_ta_list(std::string_view text) {
    auto is_pair_array = [](const json& j) {
        if (!j.is_array()) return false;
        return std::all_of(j.begin(), j.end(), [](const json& e) {
            return e.is_object() && e.contains("target") && e["target"].is_string() &&
                   e.contains("aspect") && e["aspect"].is_string();
        });
    };
    auto array = detail::extract_json(text, is_pair_array);
    if (!array) throw ParseFailure("no target-aspect array in reply");

    TAList pairs;
    std::set<TAPair> seen;
    for (const json& e : *array) {
        TAPair pair{normalize_span(e["target"].get<std::string>()),
                    normalize_span(e["aspect"].get<std::string>())};
        if (pair.target.empty() || pair.aspect.empty()) {
            throw ParseFailure("pair normalizes to empty");
        }
        if (seen.insert(pair).second) pairs.push_back(std::move(pair));
    }
    return pairs;
}

ConsensusResult run_consensus(const Dialogue& dialogue, const StageClient& sampler,
                              const MsgrConfig& cfg) {
    if (cfg.h < 1 || cfg.max_samples < cfg.h) {
        throw ConfigError("msgr requires 1 <= h <= max_samples");
    }

    const TemplateVars vars = {{"transcript", render_transcript(dialogue, true)}};
    ConsensusState state;
    for (int sample = 0; sample < cfg.max_samples; ++sample) {
        ChatRequest request = sampler.make_request(dialogue.doc_id, vars, sample);
        request.temperature = cfg.temperature;
        ChatResponse response = sampler.complete(request);
        ++state.samples_consumed;

        TAList list;
        try {
            list = parse_ta_list(response.text);
        } catch (const ParseFailure&) {
            ++state.parse_failures;
            continue;
        }
        const size_t length = list.size();
        state.lists_by_length[length].push_back(std::move(list));
        if (++state.freq[length] == cfg.h) {
            return ConsensusResult{length, state.lists_by_length[length], false,
                                   std::move(state)};
        }
    }

    if (state.freq.empty()) {
        throw NoValidSamples("all " + std::to_string(state.samples_consumed) +
                             " samples failed to parse for " + dialogue.doc_id);
    }
    // Modal length; the map iterates lengths ascending, so keeping strict
    // improvements breaks ties toward the smaller length.
    size_t best_length = 0;
    int best_count = 0;
    for (const auto& [length, count] : state.freq) {
        if (count > best_count) {
            best_count = count;
            best_length = length;
        }
    }
    return ConsensusResult{best_length, state.lists_by_length[best_length], true,
                           std::move(state)};
}

std::vector<TACandidate> candidate_set_at(const std::vector<TAList>& lists, size_t i) {
    std::vector<TACandidate> candidates;
    std::map<TAPair, size_t> position;
    for (const TAList& list : lists) {
        if (i >= list.size()) {
            throw std::out_of_range("candidate index " + std::to_string(i) +
                                    " out of range for list of " + std::to_string(list.size()));
        }
        TAPair key{normalize_span(list[i].target), normalize_span(list[i].aspect)};
        auto [it, inserted] = position.try_emplace(key, candidates.size());
        if (inserted) {
            candidates.push_back({list[i], 1});
        } else {
            ++candidates[it->second].count;
        }
    }
    return candidates;
}

namespace {

// First run of digits in the text, or -1. Values beyond six digits are
// never valid candidate indices, so they are treated as absent.
long first_integer(std::string_view text) {
    for (size_t i = 0; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') continue;
        size_t end = i;
        while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
        if (end - i > 6) return -1;
        return std::stol(std::string(text.substr(i, end - i)));
    }
    return -1;
}

TAPair highest_count_candidate(const std::vector<TACandidate>& candidates) {
    size_t best = 0;
    for (size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].count > candidates[best].count) best = i;
    }
    return candidates[best].pair;
}

}  // namespace

TAPair adjudicate_index(const Dialogue& dialogue, const std::vector<TACandidate>& candidates,
                        size_t i, const StageClient& refiner) {
    if (candidates.empty()) throw std::invalid_argument("adjudicate_index: empty candidate set");
    if (candidates.size() == 1) return candidates[0].pair;

    std::ostringstream enumerated;
    for (size_t c = 0; c < candidates.size(); ++c) {
        if (c > 0) enumerated << '\n';
        enumerated << (c + 1) << ". target: " << candidates[c].pair.target
                   << " | aspect: " << candidates[c].pair.aspect;
    }
    const TemplateVars vars = {
        {"transcript", render_transcript(dialogue, true)},
        {"index", std::to_string(i)},
        {"candidates", enumerated.str()},
    };
    ChatResponse response =
        refiner.call(dialogue.doc_id + "#" + std::to_string(i), vars);

    const long choice = first_integer(response.text);
    if (choice >= 1 && static_cast<size_t>(choice) <= candidates.size()) {
        return candidates[choice - 1].pair;
    }

    auto is_pair = [](const json& j) {
        return j.is_object() && j.contains("target") && j["target"].is_string() &&
               j.contains("aspect") && j["aspect"].is_string();
    };
    if (auto obj = detail::extract_json(response.text, is_pair)) {
        TAPair key{normalize_span((*obj)["target"].get<std::string>()),
                   normalize_span((*obj)["aspect"].get<std::string>())};
        for (const TACandidate& c : candidates) {
            if (TAPair{normalize_span(c.pair.target), normalize_span(c.pair.aspect)} == key) {
                return c.pair;
            }
        }
    }
    return highest_count_candidate(candidates);
}

TAList extract_ta(const Dialogue& dialogue, const StageClient& sampler,
                  const StageClient& refiner, const MsgrConfig& cfg) {
    ConsensusResult consensus = run_consensus(dialogue, sampler, cfg);
    TAList result;
    std::set<TAPair> seen;
    for (size_t i = 0; i < consensus.length; ++i) {
        TAPair pair =
            adjudicate_index(dialogue, candidate_set_at(consensus.lists, i), i, refiner);
        if (seen.insert(pair).second) result.push_back(std::move(pair));
    }
    return result;
}

}  // namespace mcabsa
