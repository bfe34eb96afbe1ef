#include "mcabsa/metrics.hpp"

#include <algorithm>
#include <map>

namespace mcabsa {

std::size_t match_count(const std::vector<MatchTuple>& pred,
                        const std::vector<MatchTuple>& gold) {
    auto normalized_counts = [](const std::vector<MatchTuple>& tuples) {
        std::map<MatchTuple, std::size_t> counts;
        for (const MatchTuple& t : tuples) {
            MatchTuple key;
            key.reserve(t.size());
            for (const std::string& field : t) key.push_back(normalize_span(field));
            ++counts[std::move(key)];
        }
        return counts;
    };
    const auto pred_counts = normalized_counts(pred);
    const auto gold_counts = normalized_counts(gold);

    std::size_t matched = 0;
    for (const auto& [key, count] : pred_counts) {
        if (auto it = gold_counts.find(key); it != gold_counts.end()) {
            matched += std::min(count, it->second);
        }
    }
    return matched;
}

MatchTuple sextuple_key(const Sextuple& s) {
    return {s.holder, s.target, s.aspect, s.opinion, s.sentiment, s.rationale};
}

MatchTuple identification_key(const Sextuple& s) {
    return {s.holder, s.target, s.aspect, s.opinion, s.rationale};
}

MatchTuple flip_key(const FlipRecord& f) {
    return {f.holder,            f.target,            f.aspect,
            f.initial_sentiment, f.flipped_sentiment, to_string(f.trigger)};
}

MatchReport make_report(std::size_t matched, std::size_t predicted, std::size_t gold) {
    MatchReport report;
    report.matched = matched;
    report.predicted = predicted;
    report.gold = gold;
    report.op = predicted == 0 ? 0.0 : static_cast<double>(matched) / predicted;
    report.or_ = gold == 0 ? 0.0 : static_cast<double>(matched) / gold;
    report.f1 = (report.op + report.or_) == 0.0
                    ? 0.0
                    : 2.0 * report.op * report.or_ / (report.op + report.or_);
    return report;
}

namespace {

template <typename T, typename KeyFn>
MatchReport flat_report(const std::vector<T>& pred, const std::vector<T>& gold, KeyFn key) {
    return make_report(match_count(pred, gold, key), pred.size(), gold.size());
}

template <typename T, typename KeyFn>
MatchReport per_doc_report(const std::map<std::string, std::vector<T>>& pred,
                           const std::map<std::string, std::vector<T>>& gold, KeyFn key) {
    std::size_t matched = 0, predicted = 0, gold_total = 0;
    for (const auto& [doc_id, rows] : pred) {
        predicted += rows.size();
        if (auto it = gold.find(doc_id); it != gold.end()) {
            matched += match_count(rows, it->second, key);
        }
    }
    for (const auto& [doc_id, rows] : gold) gold_total += rows.size();
    return make_report(matched, predicted, gold_total);
}

}  // namespace

MatchReport sextuple_micro_f1(const std::vector<Sextuple>& pred,
                              const std::vector<Sextuple>& gold) {
    return flat_report(pred, gold, sextuple_key);
}

MatchReport identification_f1(const std::vector<Sextuple>& pred,
                              const std::vector<Sextuple>& gold) {
    return flat_report(pred, gold, identification_key);
}

MatchReport exact_match_f1(const std::vector<FlipRecord>& pred,
                           const std::vector<FlipRecord>& gold) {
    return flat_report(pred, gold, flip_key);
}

MatchReport sextuple_micro_f1(const SextuplePredictions& pred, const SextuplePredictions& gold) {
    return per_doc_report(pred, gold, sextuple_key);
}

MatchReport identification_f1(const SextuplePredictions& pred, const SextuplePredictions& gold) {
    return per_doc_report(pred, gold, identification_key);
}

MatchReport exact_match_f1(const FlipPredictions& pred, const FlipPredictions& gold) {
    return per_doc_report(pred, gold, flip_key);
}

}  // namespace mcabsa
