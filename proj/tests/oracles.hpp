#pragma once

// Independent reference implementations used only to check the library:
// a maximum-bipartite-matching counter for the metrics and a brute-force
// consecutive-pair enumerator for the flip rule. Deliberately written
// against the definitions, not the library code paths.

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mcabsa/dialogue.hpp"
#include "mcabsa/flip.hpp"
#include "mcabsa/metrics.hpp"

namespace mcabsa::testing {

/// Kuhn's augmenting-path maximum matching over the bipartite graph whose
/// edges connect pred[i] to gold[j] when their normalized projections are
/// equal fieldwise.
inline size_t max_bipartite_match(const std::vector<MatchTuple>& pred,
                                  const std::vector<MatchTuple>& gold) {
    auto normalize = [](const MatchTuple& t) {
        MatchTuple out;
        out.reserve(t.size());
        for (const std::string& field : t) out.push_back(normalize_span(field));
        return out;
    };
    std::vector<MatchTuple> p, g;
    for (const MatchTuple& t : pred) p.push_back(normalize(t));
    for (const MatchTuple& t : gold) g.push_back(normalize(t));

    std::vector<int> match_of_gold(g.size(), -1);
    std::vector<char> visited;

    std::function<bool(size_t)> augment = [&](size_t i) -> bool {
        for (size_t j = 0; j < g.size(); ++j) {
            if (visited[j] || p[i] != g[j]) continue;
            visited[j] = 1;
            if (match_of_gold[j] < 0 || augment(static_cast<size_t>(match_of_gold[j]))) {
                match_of_gold[j] = static_cast<int>(i);
                return true;
            }
        }
        return false;
    };

    size_t matched = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        visited.assign(g.size(), 0);
        if (augment(i)) ++matched;
    }
    return matched;
}

/// Brute-force flip enumerator: for every normalized (holder, target,
/// aspect) key, sorts the anchored sextuples by (anchor, input position) and
/// emits every consecutive pair with differing normalized sentiments, then
/// dedupes and orders by content.
inline std::vector<FlipCandidate> flip_oracle(const std::vector<Sextuple>& sextuples) {
    std::set<std::tuple<std::string, std::string, std::string>> keys;
    for (const Sextuple& s : sextuples) {
        if (s.anchor_utterance) {
            keys.insert({normalize_span(s.holder), normalize_span(s.target),
                         normalize_span(s.aspect)});
        }
    }

    std::set<std::tuple<std::string, std::string, std::string, std::string, std::string, int>>
        seen;
    std::vector<FlipCandidate> records;
    for (const auto& key : keys) {
        std::vector<size_t> members;
        for (size_t i = 0; i < sextuples.size(); ++i) {
            const Sextuple& s = sextuples[i];
            if (!s.anchor_utterance) continue;
            if (std::tuple{normalize_span(s.holder), normalize_span(s.target),
                           normalize_span(s.aspect)} == key) {
                members.push_back(i);
            }
        }
        std::sort(members.begin(), members.end(), [&](size_t a, size_t b) {
            int anchor_a = *sextuples[a].anchor_utterance;
            int anchor_b = *sextuples[b].anchor_utterance;
            return std::tie(anchor_a, a) < std::tie(anchor_b, b);
        });
        for (size_t k = 0; k + 1 < members.size(); ++k) {
            const Sextuple& earlier = sextuples[members[k]];
            const Sextuple& later = sextuples[members[k + 1]];
            if (normalize_span(earlier.sentiment) == normalize_span(later.sentiment)) continue;
            FlipCandidate record{earlier.holder,    earlier.target,
                                 earlier.aspect,    earlier.sentiment,
                                 later.sentiment,   *later.anchor_utterance};
            if (seen.insert({record.holder, record.target, record.aspect,
                             record.initial_sentiment, record.flipped_sentiment,
                             record.flip_anchor})
                    .second) {
                records.push_back(std::move(record));
            }
        }
    }
    std::sort(records.begin(), records.end(), [](const FlipCandidate& a, const FlipCandidate& b) {
        return std::tie(a.holder, a.target, a.aspect, a.initial_sentiment, a.flipped_sentiment,
                        a.flip_anchor) < std::tie(b.holder, b.target, b.aspect,
                                                  b.initial_sentiment, b.flipped_sentiment,
                                                  b.flip_anchor);
    });
    return records;
}

/// Random sextuples over small alphabets so collisions, duplicates and
/// shared keys occur often.
inline std::vector<Sextuple> random_sextuples(std::mt19937& rng, size_t count,
                                              bool with_anchors = true) {
    static const std::vector<std::string> holders = {"Ana", "ben", "Ana "};
    static const std::vector<std::string> targets = {"phone", "Phone!", "laptop"};
    static const std::vector<std::string> aspects = {"battery", "screen"};
    static const std::vector<std::string> opinions = {"good", "bad", "so-so"};
    static const std::vector<std::string> sentiments = {"positive", "negative", "Positive!"};
    static const std::vector<std::string> rationales = {"because", "who knows"};

    std::vector<Sextuple> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        Sextuple s;
        s.holder = holders[rng() % holders.size()];
        s.target = targets[rng() % targets.size()];
        s.aspect = aspects[rng() % aspects.size()];
        s.opinion = opinions[rng() % opinions.size()];
        s.sentiment = sentiments[rng() % sentiments.size()];
        s.rationale = rationales[rng() % rationales.size()];
        if (with_anchors) {
            if (rng() % 8 == 0) {
                s.anchor_utterance = std::nullopt;  // occasionally anchorless
            } else {
                s.anchor_utterance = static_cast<int>(rng() % 6);
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

/// Random projected tuples over a tiny alphabet.
inline std::vector<MatchTuple> random_tuples(std::mt19937& rng, size_t max_count,
                                             size_t fields = 3) {
    static const std::vector<std::string> atoms = {"a", "A!", "b", " b ", "c", "\"a\""};
    const size_t count = rng() % (max_count + 1);
    std::vector<MatchTuple> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        MatchTuple t;
        for (size_t f = 0; f < fields; ++f) t.push_back(atoms[rng() % atoms.size()]);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace mcabsa::testing
