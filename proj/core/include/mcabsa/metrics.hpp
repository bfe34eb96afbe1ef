#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mcabsa/dialogue.hpp"

namespace mcabsa {

/// Micro precision/recall/F1 plus the counts they were derived from.
struct MatchReport {
    double op = 0.0;   // precision: matched / predicted
    double or_ = 0.0;  // recall: matched / gold
    double f1 = 0.0;
    std::size_t matched = 0;
    std::size_t predicted = 0;
    std::size_t gold = 0;
};

/// Projected tuple: the match-relevant fields of a sextuple or flip record,
/// in a fixed order.
using MatchTuple = std::vector<std::string>;

/// Multiset intersection size over normalized tuples: every field is passed
/// through normalize_span and the result is the sum over distinct tuples of
/// min(count in pred, count in gold).
std::size_t match_count(const std::vector<MatchTuple>& pred,
                        const std::vector<MatchTuple>& gold);

/// Key projections. Anchor utterances are metadata and never part of a key;
/// the identification key drops the sentiment field.
MatchTuple sextuple_key(const Sextuple& s);
MatchTuple identification_key(const Sextuple& s);
MatchTuple flip_key(const FlipRecord& f);

template <typename T, typename KeyFn>
std::size_t match_count(const std::vector<T>& pred, const std::vector<T>& gold, KeyFn key) {
    std::vector<MatchTuple> p, g;
    p.reserve(pred.size());
    g.reserve(gold.size());
    for (const T& t : pred) p.push_back(key(t));
    for (const T& t : gold) g.push_back(key(t));
    return match_count(p, g);
}

/// F1 from raw counts: OP = matched/predicted (0 when predicted is 0),
/// OR = matched/gold (0 when gold is 0), F1 = 2*OP*OR/(OP+OR) or 0.
MatchReport make_report(std::size_t matched, std::size_t predicted, std::size_t gold);

/// Single-collection scores (one dialogue, or any flat list).
MatchReport sextuple_micro_f1(const std::vector<Sextuple>& pred,
                              const std::vector<Sextuple>& gold);
MatchReport identification_f1(const std::vector<Sextuple>& pred,
                              const std::vector<Sextuple>& gold);
MatchReport exact_match_f1(const std::vector<FlipRecord>& pred,
                           const std::vector<FlipRecord>& gold);

/// Dataset-wide scores: tuples are matched within their dialogue and the
/// counts are summed across dialogues before division (micro aggregation).
MatchReport sextuple_micro_f1(const SextuplePredictions& pred, const SextuplePredictions& gold);
MatchReport identification_f1(const SextuplePredictions& pred, const SextuplePredictions& gold);
MatchReport exact_match_f1(const FlipPredictions& pred, const FlipPredictions& gold);

}  // namespace mcabsa
