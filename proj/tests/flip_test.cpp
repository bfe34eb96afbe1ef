#include <doctest.h>

#include <random>

#include "mcabsa/flip.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace mcabsa;
using namespace mcabsa::testing;

namespace {

Sextuple at(const std::string& sentiment, int anchor, const std::string& holder = "Ana",
            const std::string& target = "phone", const std::string& aspect = "battery") {
    return {holder, target, aspect, "opinion", sentiment, "rationale", anchor};
}

}  // namespace

TEST_SUITE("flip") {

TEST_CASE("a single change in a trajectory yields one record") {
    auto records = detect_flips_rule({at("positive", 0), at("positive", 1), at("negative", 2)});
    REQUIRE(records.size() == 1);
    CHECK(records[0].initial_sentiment == "positive");
    CHECK(records[0].flipped_sentiment == "negative");
    CHECK(records[0].flip_anchor == 2);
}

TEST_CASE("every consecutive change is emitted") {
    auto records = detect_flips_rule({at("positive", 0), at("negative", 1), at("positive", 2)});
    REQUIRE(records.size() == 2);
    CHECK(records[0].initial_sentiment == "negative");  // content-sorted output
    CHECK(records[0].flipped_sentiment == "positive");
    CHECK(records[1].initial_sentiment == "positive");
    CHECK(records[1].flipped_sentiment == "negative");
}

TEST_CASE("single points and unrelated keys produce nothing") {
    CHECK(detect_flips_rule({at("positive", 0)}).empty());
    CHECK(detect_flips_rule({at("positive", 0), at("negative", 1, "Ana", "laptop")}).empty());
    CHECK(detect_flips_rule({at("positive", 0), at("negative", 1, "Ben")}).empty());
}

TEST_CASE("sentiments are compared in normalized form") {
    CHECK(detect_flips_rule({at("Positive", 0), at("positive!", 1)}).empty());
    CHECK(detect_flips_rule({at("Positive", 0), at("negative", 1)}).size() == 1);
}

TEST_CASE("anchorless sextuples are skipped with a warning") {
    Sextuple anchorless = at("positive", 0);
    anchorless.anchor_utterance = std::nullopt;
    std::vector<std::string> warnings;
    auto records = detect_flips_rule({anchorless, at("negative", 1)}, &warnings);
    CHECK(records.empty());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("no anchor") != std::string::npos);
}

TEST_CASE("identical records are deduplicated") {
    // two pos->neg transitions landing on the same anchor
    auto records = detect_flips_rule(
        {at("positive", 1), at("negative", 2), at("positive", 2), at("negative", 2)});
    size_t pos_to_neg = 0;
    for (const FlipCandidate& r : records) {
        if (r.initial_sentiment == "positive" && r.flip_anchor == 2) ++pos_to_neg;
    }
    CHECK(pos_to_neg == 1);
}

TEST_CASE("reordering sextuples with disjoint keys never changes the output") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto sextuples = random_sextuples(rng, 8);
        auto shuffled = sextuples;
        // shuffle while keeping relative order within each normalized key
        // (cross-key order is free per the property)
        std::stable_sort(shuffled.begin(), shuffled.end(),
                         [](const Sextuple& a, const Sextuple& b) {
                             return normalize_span(a.holder) + normalize_span(a.target) +
                                        normalize_span(a.aspect) <
                                    normalize_span(b.holder) + normalize_span(b.target) +
                                        normalize_span(b.aspect);
                         });
        CHECK(detect_flips_rule(sextuples) == detect_flips_rule(shuffled));
    }
}

TEST_CASE("rule output matches the brute-force enumerator") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        auto sextuples = random_sextuples(rng, rng() % 10);
        auto actual = detect_flips_rule(sextuples);
        CHECK(actual == flip_oracle(sextuples));
        for (const FlipCandidate& r : actual) {
            CHECK(normalize_span(r.initial_sentiment) != normalize_span(r.flipped_sentiment));
        }
    }
}

TEST_CASE("trigger classification parses category names") {
    auto backend = counting_scripted({{"trigger_classify:0", "logical argumentation"}});
    StageClient stage = make_stage(backend.get(), "trigger_classify");
    FlipCandidate flip{"Ana", "phone", "battery", "positive", "negative", 2};
    TriggerResult result = classify_trigger(two_turn_dialogue(), flip, stage);
    CHECK(result.category == TriggerCategory::logical_argumentation);
    CHECK_FALSE(result.defaulted);
}

TEST_CASE("trigger classification tolerates chatty replies") {
    auto backend = counting_scripted(
        {{"trigger_classify:0", "This is clearly the introduction of new information."}});
    StageClient stage = make_stage(backend.get(), "trigger_classify");
    FlipCandidate flip{"Ana", "phone", "battery", "positive", "negative", 2};
    CHECK(classify_trigger(two_turn_dialogue(), flip, stage).category ==
          TriggerCategory::new_information);
}

TEST_CASE("unparseable replies default to the first category with a flag") {
    auto backend = counting_scripted({{"trigger_classify:0", "hmm"}});
    StageClient stage = make_stage(backend.get(), "trigger_classify");
    FlipCandidate flip{"Ana", "phone", "battery", "positive", "negative", 2};
    TriggerResult result = classify_trigger(two_turn_dialogue(), flip, stage);
    CHECK(result.category == TriggerCategory::new_information);
    CHECK(result.defaulted);
    CHECK(backend->calls == 3);
}

TEST_CASE("end-to-end flips parse a scripted array") {
    auto backend = counting_scripted({{"flip_end_to_end#d1:0", R"([
      {"holder":"Ana","target":"phone","aspect":"battery",
       "initial_sentiment":"positive","flipped_sentiment":"negative",
       "trigger":"new information"},
      {"holder":"Ben","target":"phone","aspect":"screen",
       "initial_sentiment":"negative","flipped_sentiment":"positive",
       "trigger":"participant feedback and interaction"}
    ])"}});
    StageClient stage = make_stage(backend.get(), "flip_end_to_end");
    auto records = end_to_end_flips(two_turn_dialogue(), stage);
    REQUIRE(records.size() == 2);
    CHECK(records[0].trigger == TriggerCategory::new_information);
    CHECK(records[1].trigger == TriggerCategory::participant_feedback);
}

TEST_CASE("invalid records are dropped individually") {
    auto backend = counting_scripted({{"flip_end_to_end#d1:0", R"([
      {"holder":"Ana","target":"phone","aspect":"battery",
       "initial_sentiment":"positive","flipped_sentiment":"Positive!",
       "trigger":"new information"},
      {"holder":"Ana","target":"phone","aspect":"battery",
       "initial_sentiment":"positive","flipped_sentiment":"negative",
       "trigger":"not a real category"},
      {"holder":"Ben","target":"phone","aspect":"screen",
       "initial_sentiment":"negative","flipped_sentiment":"positive",
       "trigger":"self-reflection"}
    ])"}});
    StageClient stage = make_stage(backend.get(), "flip_end_to_end");
    auto records = end_to_end_flips(two_turn_dialogue(), stage);
    REQUIRE(records.size() == 1);
    CHECK(records[0].holder == "Ben");
}

TEST_CASE("empty or unparseable end-to-end output is an empty list") {
    auto empty_backend = counting_scripted({{"flip_end_to_end#d1:0", ""}});
    StageClient empty_stage = make_stage(empty_backend.get(), "flip_end_to_end");
    CHECK(end_to_end_flips(two_turn_dialogue(), empty_stage).empty());

    auto prose_backend = counting_scripted({{"flip_end_to_end#d1:0", "there are no flips"}});
    StageClient prose_stage = make_stage(prose_backend.get(), "flip_end_to_end");
    CHECK(end_to_end_flips(two_turn_dialogue(), prose_stage).empty());

    auto bracket_backend = counting_scripted({{"flip_end_to_end#d1:0", "[]"}});
    StageClient bracket_stage = make_stage(bracket_backend.get(), "flip_end_to_end");
    CHECK(end_to_end_flips(two_turn_dialogue(), bracket_stage).empty());
}

TEST_CASE("fusion takes the first non-empty list") {
    FlipRecord a{"Ana", "phone", "battery", "positive", "negative",
                 TriggerCategory::new_information};
    FlipRecord b{"Ben", "phone", "screen", "negative", "positive",
                 TriggerCategory::self_reflection};
    CHECK(fuse_hierarchical({{a}, {b}, {}}) == std::vector<FlipRecord>{a});
    CHECK(fuse_hierarchical({{}, {b}, {a}}) == std::vector<FlipRecord>{b});
    CHECK(fuse_hierarchical({{}, {}, {}}).empty());
    CHECK(fuse_hierarchical({}).empty());
}

TEST_CASE("fusion ignores everything after the first non-empty list") {
    FlipRecord a{"Ana", "phone", "battery", "positive", "negative",
                 TriggerCategory::new_information};
    FlipRecord b{"Ben", "phone", "screen", "negative", "positive",
                 TriggerCategory::self_reflection};
    auto fused = fuse_hierarchical({{a}, {b, a}, {b}});
    CHECK(fused == fuse_hierarchical({{a}, {}, {}}));
}

}  // TEST_SUITE
