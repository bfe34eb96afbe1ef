#include <doctest.h>

#include <algorithm>
#include <random>

#include "mcabsa/metrics.hpp"
#include "oracles.hpp"

using namespace mcabsa;
using namespace mcabsa::testing;

namespace {

Sextuple make(const std::string& holder, const std::string& sentiment,
              const std::string& opinion = "good") {
    return {holder, "phone", "battery", opinion, sentiment, "because", std::nullopt};
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("identical multisets match completely") {
    std::vector<Sextuple> tuples = {make("A", "pos"), make("B", "neg"), make("C", "neu")};
    CHECK(match_count(tuples, tuples, sextuple_key) == 3);
}

TEST_CASE("duplicates follow the multiset min rule") {
    std::vector<Sextuple> pred = {make("A", "pos"), make("A", "pos")};
    std::vector<Sextuple> gold = {make("A", "pos")};
    CHECK(match_count(pred, gold, sextuple_key) == 1);
    CHECK(match_count(gold, pred, sextuple_key) == 1);
}

TEST_CASE("matching normalizes every field") {
    std::vector<Sextuple> pred = {make("  ANA ", "Positive!")};
    std::vector<Sextuple> gold = {make("ana", "positive")};
    CHECK(match_count(pred, gold, sextuple_key) == 1);
}

TEST_CASE("sentiment-only differences separate the two keys") {
    std::vector<Sextuple> pred = {make("A", "positive")};
    std::vector<Sextuple> gold = {make("A", "negative")};
    CHECK(match_count(pred, gold, sextuple_key) == 0);
    CHECK(match_count(pred, gold, identification_key) == 1);
    CHECK(sextuple_micro_f1(pred, gold).f1 == 0.0);
    CHECK(identification_f1(pred, gold).f1 == 1.0);
}

TEST_CASE("aspect differences zero both scores") {
    std::vector<Sextuple> pred = {{"A", "phone", "battery", "good", "pos", "r", std::nullopt}};
    std::vector<Sextuple> gold = {{"A", "phone", "screen", "good", "pos", "r", std::nullopt}};
    CHECK(sextuple_micro_f1(pred, gold).f1 == 0.0);
    CHECK(identification_f1(pred, gold).f1 == 0.0);
}

TEST_CASE("anchor utterances never affect matching") {
    Sextuple with_anchor = make("A", "pos");
    with_anchor.anchor_utterance = 3;
    CHECK(match_count({with_anchor}, {make("A", "pos")}, sextuple_key) == 1);
}

TEST_CASE("the 2-of-3-vs-4 fixture lands on 4/7") {
    std::vector<Sextuple> pred = {make("A", "pos"), make("B", "neg"), make("X", "pos")};
    std::vector<Sextuple> gold = {make("A", "pos"), make("B", "neg"), make("C", "pos"),
                                  make("D", "neg")};
    MatchReport report = sextuple_micro_f1(pred, gold);
    CHECK(report.matched == 2);
    CHECK(report.op == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(report.or_ == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.f1 == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("zero conventions") {
    std::vector<Sextuple> gold = {make("A", "pos")};
    MatchReport empty_pred = sextuple_micro_f1({}, gold);
    CHECK(empty_pred.op == 0.0);
    CHECK(empty_pred.or_ == 0.0);
    CHECK(empty_pred.f1 == 0.0);

    MatchReport empty_both = sextuple_micro_f1({}, {});
    CHECK(empty_both.f1 == 0.0);

    MatchReport identity = sextuple_micro_f1(gold, gold);
    CHECK(identity.f1 == 1.0);
}

TEST_CASE("exact match includes the trigger in the key") {
    FlipRecord flip{"A", "phone", "battery", "pos", "neg", TriggerCategory::new_information};
    CHECK(exact_match_f1({flip}, {flip}).f1 == 1.0);

    FlipRecord other = flip;
    other.trigger = TriggerCategory::self_reflection;
    CHECK(exact_match_f1({other}, {flip}).f1 == 0.0);
}

TEST_CASE("half-matching flips score 0.5") {
    FlipRecord a{"A", "phone", "battery", "pos", "neg", TriggerCategory::new_information};
    FlipRecord b{"B", "phone", "screen", "neg", "pos", TriggerCategory::logical_argumentation};
    FlipRecord c{"C", "phone", "price", "pos", "neg", TriggerCategory::self_reflection};
    MatchReport report = exact_match_f1({a, b}, {a, c});
    CHECK(report.op == 0.5);
    CHECK(report.or_ == 0.5);
    CHECK(report.f1 == 0.5);
}

TEST_CASE("scores are permutation invariant") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        auto pred = random_tuples(rng, 8);
        auto gold = random_tuples(rng, 8);
        size_t base = match_count(pred, gold);
        std::shuffle(pred.begin(), pred.end(), rng);
        std::shuffle(gold.begin(), gold.end(), rng);
        CHECK(match_count(pred, gold) == base);
    }
}

TEST_CASE("adding a tuple that exists in gold never lowers the matched count") {
    std::mt19937 rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        auto pred = random_tuples(rng, 6);
        auto gold = random_tuples(rng, 6);
        if (gold.empty()) continue;
        size_t before = match_count(pred, gold);
        pred.push_back(gold[rng() % gold.size()]);
        CHECK(match_count(pred, gold) >= before);
    }
}

TEST_CASE("match_count equals maximum bipartite matching") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        auto pred = random_tuples(rng, 10);
        auto gold = random_tuples(rng, 10);
        CHECK(match_count(pred, gold) == max_bipartite_match(pred, gold));
    }
}

TEST_CASE("report invariants hold on random counts") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        size_t predicted = rng() % 10;
        size_t gold = rng() % 10;
        size_t matched = std::min(predicted, gold) == 0
                             ? 0
                             : rng() % (std::min(predicted, gold) + 1);
        MatchReport r = make_report(matched, predicted, gold);
        CHECK(r.matched <= std::min(r.predicted, r.gold));
        CHECK(r.f1 >= 0.0);
        CHECK(r.f1 <= 1.0);
        if (r.op + r.or_ == 0.0) {
            CHECK(r.f1 == 0.0);
        } else {
            CHECK(r.f1 == doctest::Approx(2.0 * r.op * r.or_ / (r.op + r.or_)).epsilon(1e-12));
        }
        // symmetry in (OP, OR)
        MatchReport swapped = make_report(matched, gold, predicted);
        CHECK(r.f1 == doctest::Approx(swapped.f1).epsilon(1e-12));
    }
}

TEST_CASE("dataset-wide scores match within dialogues only") {
    SextuplePredictions pred, gold;
    pred["d1"] = {make("A", "pos")};
    pred["d2"] = {make("B", "neg")};
    gold["d1"] = {make("B", "neg")};  // same tuple as pred d2, different dialogue
    gold["d2"] = {make("B", "neg")};

    MatchReport report = sextuple_micro_f1(pred, gold);
    CHECK(report.matched == 1);  // only the d2 pair matches
    CHECK(report.predicted == 2);
    CHECK(report.gold == 2);

    // docs present on one side only still count toward the denominators
    pred["d3"] = {make("C", "pos")};
    report = sextuple_micro_f1(pred, gold);
    CHECK(report.predicted == 3);
    CHECK(report.matched == 1);
}

}  // TEST_SUITE
