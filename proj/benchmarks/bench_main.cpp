#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "mcabsa/backend.hpp"
#include "mcabsa/dialogue.hpp"
#include "mcabsa/flip.hpp"
#include "mcabsa/metrics.hpp"
#include "mcabsa/msgr.hpp"

namespace {

std::vector<mcabsa::Sextuple> random_sextuples(size_t n, unsigned seed) {
    static const char* holders[] = {"Ana", "Ben", "Cara"};
    static const char* targets[] = {"phone", "laptop", "camera"};
    static const char* aspects[] = {"battery", "screen", "price", "weight"};
    static const char* sentiments[] = {"positive", "negative", "neutral"};
    std::mt19937 rng(seed);
    std::vector<mcabsa::Sextuple> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        mcabsa::Sextuple s;
        s.holder = holders[rng() % 3];
        s.target = targets[rng() % 3];
        s.aspect = aspects[rng() % 4];
        s.opinion = "opinion " + std::to_string(rng() % 8);
        s.sentiment = sentiments[rng() % 3];
        s.rationale = "rationale " + std::to_string(rng() % 8);
        s.anchor_utterance = static_cast<int>(rng() % 20);
        out.push_back(std::move(s));
    }
    return out;
}

void BM_NormalizeSpan(benchmark::State& state) {
    const std::string input = "  \"The BATTERY Life  of this  phone!!\"  ";
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcabsa::normalize_span(input));
    }
}
BENCHMARK(BM_NormalizeSpan);

void BM_CacheKey(benchmark::State& state) {
    mcabsa::ChatRequest request;
    request.backend_name = "bench";
    request.model = "bench-model";
    request.messages = {{"system", "msgr_sample#d1"}, {"user", std::string(2048, 'x')}};
    request.temperature = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcabsa::cache_key(request));
    }
}
BENCHMARK(BM_CacheKey);

void BM_MatchCount(benchmark::State& state) {
    const auto pred = random_sextuples(static_cast<size_t>(state.range(0)), 1);
    const auto gold = random_sextuples(static_cast<size_t>(state.range(0)), 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcabsa::match_count(pred, gold, mcabsa::sextuple_key));
    }
}
BENCHMARK(BM_MatchCount)->Arg(100)->Arg(1000);

void BM_DetectFlips(benchmark::State& state) {
    const auto sextuples = random_sextuples(static_cast<size_t>(state.range(0)), 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcabsa::detect_flips_rule(sextuples));
    }
}
BENCHMARK(BM_DetectFlips)->Arg(100)->Arg(1000);

void BM_ParseTaList(benchmark::State& state) {
    std::string reply = "Here are the pairs:\n```json\n[";
    for (int i = 0; i < 16; ++i) {
        if (i) reply += ',';
        reply += R"({"target":"item)" + std::to_string(i) + R"(","aspect":"quality"})";
    }
    reply += "]\n```";
    for (auto _ : state) {
        benchmark::DoNotOptimize(mcabsa::parse_ta_list(reply));
    }
}
BENCHMARK(BM_ParseTaList);

}  // namespace

BENCHMARK_MAIN();
