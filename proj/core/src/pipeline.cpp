#include "mcabsa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "mcabsa/caption.hpp"
#include "mcabsa/errors.hpp"
#include "mcabsa/flip.hpp"
#include "mcabsa/hlos.hpp"
#include "mcabsa/metrics.hpp"
#include "mcabsa/msgr.hpp"
#include "mcabsa/prompts.hpp"

namespace mcabsa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("", "", std::string(what) + " not readable: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

// JSON-lines file keyed by doc_id, loaded whole on open and appended one
// line per completed dialogue. Malformed lines (a crash mid-write) are
// dropped so the dialogue is simply recomputed.
class StageFile {
public:
    explicit StageFile(fs::path path) : path_(std::move(path)) {
        std::ifstream in(path_, std::ios::binary);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            json row = json::parse(line, nullptr, false);
            if (row.is_discarded() || !row.is_object() || !row.contains("doc_id") ||
                !row["doc_id"].is_string()) {
                continue;
            }
            rows_[row["doc_id"].get<std::string>()] = std::move(row);
        }
    }

    std::optional<json> get(const std::string& doc_id) const {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = rows_.find(doc_id);
        if (it == rows_.end()) return std::nullopt;
        return it->second;
    }

    void put(const std::string& doc_id, json row) {
        row["doc_id"] = doc_id;
        std::lock_guard<std::mutex> lock(mutex_);
        std::ofstream out(path_, std::ios::binary | std::ios::app);
        if (!out) throw Error("cannot append to " + path_.string());
        out << row.dump() << '\n';
        out.flush();
        rows_[doc_id] = std::move(row);
    }

private:
    fs::path path_;
    mutable std::mutex mutex_;
    std::map<std::string, json> rows_;
};

void parallel_for(size_t count, int workers, const std::function<void(size_t)>& fn) {
    const int thread_count = static_cast<int>(std::min<size_t>(std::max(workers, 1), count));
    if (thread_count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int t = 0; t < thread_count; ++t) {
        threads.emplace_back([&] {
            for (size_t i; (i = next.fetch_add(1)) < count;) fn(i);
        });
    }
    for (std::thread& t : threads) t.join();
}

json sextuple_row(const Sextuple& s) {
    json row = {
        {"holder", s.holder},       {"target", s.target},       {"aspect", s.aspect},
        {"opinion", s.opinion},     {"sentiment", s.sentiment}, {"rationale", s.rationale},
    };
    if (s.anchor_utterance) row["anchor_utterance"] = *s.anchor_utterance;
    return row;
}

Sextuple sextuple_from_row(const json& row) {
    Sextuple s;
    s.holder = row.value("holder", std::string());
    s.target = row.value("target", std::string());
    s.aspect = row.value("aspect", std::string());
    s.opinion = row.value("opinion", std::string());
    s.sentiment = row.value("sentiment", std::string());
    s.rationale = row.value("rationale", std::string());
    if (auto it = row.find("anchor_utterance"); it != row.end() && it->is_number_integer()) {
        s.anchor_utterance = it->get<int>();
    }
    return s;
}

json flip_row(const FlipRecord& f) {
    return json{
        {"holder", f.holder},
        {"target", f.target},
        {"aspect", f.aspect},
        {"initial_sentiment", f.initial_sentiment},
        {"flipped_sentiment", f.flipped_sentiment},
        {"trigger", to_string(f.trigger)},
    };
}

std::optional<FlipRecord> flip_from_row(const json& row) {
    FlipRecord f;
    f.holder = row.value("holder", std::string());
    f.target = row.value("target", std::string());
    f.aspect = row.value("aspect", std::string());
    f.initial_sentiment = row.value("initial_sentiment", std::string());
    f.flipped_sentiment = row.value("flipped_sentiment", std::string());
    auto trigger = parse_trigger(row.value("trigger", std::string()));
    if (!trigger) return std::nullopt;
    f.trigger = *trigger;
    return f;
}

struct DialogueOutcome {
    std::string doc_id;
    bool failed = false;
    std::vector<Sextuple> sextuples;
    std::vector<FlipRecord> flips;
    std::vector<DialogueError> errors;
    std::vector<std::string> warnings;
};

bool is_backend_class(const std::exception& e) {
    return dynamic_cast<const BackendExhausted*>(&e) != nullptr ||
           dynamic_cast<const ScriptMiss*>(&e) != nullptr;
}

json report_json(const MatchReport& r) {
    return json{{"op", r.op},           {"or", r.or_},
                {"f1", r.f1},           {"matched", r.matched},
                {"predicted", r.predicted}, {"gold", r.gold}};
}

}  // namespace

struct Pipeline::Impl {
    explicit Impl(RunConfig cfg) : config(std::move(cfg)) {
        if (!config.cache_dir.empty()) {
            cache = std::make_shared<ResponseCache>(config.cache_dir);
        }
        for (const BackendSpec& spec : config.backends) {
            std::shared_ptr<ChatBackend> provider = make_backend(spec);
            if (cache) {
                provider = std::make_shared<CachingBackend>(std::move(provider), cache, counters);
            }
            backends.emplace(spec.name, std::move(provider));
        }
    }

    ChatBackend* backend(const std::string& name) const {
        auto it = backends.find(name);
        if (it == backends.end()) throw UnknownBackend(name);
        return it->second.get();
    }

    StageClient make_stage(const std::string& stage) const {
        static const std::map<std::string, std::string> kTemplates = {
            {"caption_audio", "caption_audio"},   {"caption_visual", "caption_visual"},
            {"msgr_sampler", "msgr_sample"},      {"msgr_refiner", "msgr_adjudicate"},
            {"ho_extractor", "ho_extract"},       {"sr_extractor", "sr_complete"},
            {"hlos_refiner", "hlos_refine"},      {"flip_model_1", "flip_end_to_end"},
            {"flip_model_2", "flip_end_to_end"},  {"trigger_classifier", "trigger_classify"},
        };
        const BackendSpec& spec = config.bound_backend(stage);
        const std::string& template_name = kTemplates.at(stage);

        StageClient client;
        client.backend = backend(spec.name);
        client.model = spec.model;
        client.template_text = load_template(config.prompt_dir, template_name);
        client.tag_prefix = (stage == "flip_model_1" || stage == "flip_model_2")
                                ? template_name + "#" + stage
                                : template_name;
        client.temperature =
            stage == "msgr_sampler" ? config.msgr.temperature : config.defaults.temperature;
        client.max_tokens = config.defaults.max_tokens;
        client.retries = config.retries;
        return client;
    }

    fs::path work_dir(const std::string& out_path) const {
        if (!config.work_dir.empty()) return config.work_dir;
        fs::path out(out_path);
        fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
        return parent / "stages";
    }

    RunStatsSnapshot snapshot() const {
        return RunStatsSnapshot{counters->requests.load(), counters->cache_hits.load(),
                                counters->provider_calls.load()};
    }

    void finalize(RunOutcome& outcome, const fs::path& work) const {
        std::sort(outcome.errors.begin(), outcome.errors.end(),
                  [](const DialogueError& a, const DialogueError& b) {
                      return std::tie(a.doc_id, a.stage, a.message) <
                             std::tie(b.doc_id, b.stage, b.message);
                  });
        std::sort(outcome.warnings.begin(), outcome.warnings.end());
        outcome.stats = snapshot();

        bool backend_failure = false;
        for (const DialogueError& e : outcome.errors) backend_failure |= e.backend_class;
        outcome.exit_code =
            outcome.errors.empty() ? kExitOk : (backend_failure ? kExitBackend : kExitData);

        json manifest = {{"errors", json::array()}, {"warnings", outcome.warnings}};
        for (const DialogueError& e : outcome.errors) {
            manifest["errors"].push_back({{"doc_id", e.doc_id},
                                          {"stage", e.stage},
                                          {"message", e.message},
                                          {"backend_class", e.backend_class}});
        }
        atomic_write((work / "manifest.json").string(), manifest.dump(2));
        atomic_write((work / "run_stats.json").string(),
                     json{{"requests", outcome.stats.requests},
                          {"cache_hits", outcome.stats.cache_hits},
                          {"provider_calls", outcome.stats.provider_calls}}
                         .dump(2));
    }

    RunConfig config;
    std::shared_ptr<ResponseCache> cache;
    std::shared_ptr<CacheCounters> counters = std::make_shared<CacheCounters>();
    std::map<std::string, std::shared_ptr<ChatBackend>> backends;
};

Pipeline::Pipeline(RunConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Pipeline::~Pipeline() = default;

RunStatsSnapshot Pipeline::stats() const { return impl_->snapshot(); }

namespace {

// Loads the captioned dialogue from the stage file or runs the caption
// stage and records it.
Dialogue captioned_dialogue(const Dialogue& dialogue, const CaptionStages& stages,
                            StageFile& store) {
    if (auto row = store.get(dialogue.doc_id)) {
        return parse_dialogue((*row)["dialogue"].dump());
    }
    Dialogue captioned = embed_captions(dialogue, stages);
    store.put(dialogue.doc_id, {{"dialogue", json::parse(serialize_dialogue(captioned))}});
    return captioned;
}

}  // namespace

RunOutcome Pipeline::run_caption(const std::string& dataset_path, const std::string& out_path) {
    Impl& impl = *impl_;
    const CaptionStages stages{impl.make_stage("caption_audio"),
                               impl.make_stage("caption_visual")};
    const fs::path work = impl.work_dir(out_path);
    fs::create_directories(work);

    std::vector<Dialogue> dialogues = parse_dataset(read_file(dataset_path, "dataset"));
    StageFile captioned_store(work / "captioned.jsonl");

    std::vector<DialogueOutcome> outcomes(dialogues.size());
    parallel_for(dialogues.size(), impl.config.concurrency, [&](size_t i) {
        DialogueOutcome& out = outcomes[i];
        out.doc_id = dialogues[i].doc_id;
        try {
            dialogues[i] = captioned_dialogue(dialogues[i], stages, captioned_store);
        } catch (const std::exception& e) {
            out.failed = true;
            out.errors.push_back({out.doc_id, "caption", e.what(), is_backend_class(e)});
        }
    });

    RunOutcome outcome;
    for (DialogueOutcome& out : outcomes) {
        outcome.errors.insert(outcome.errors.end(), out.errors.begin(), out.errors.end());
    }
    atomic_write(out_path, serialize_dataset(dialogues));
    impl.finalize(outcome, work);
    return outcome;
}

RunOutcome Pipeline::run_subtask1(const std::string& dataset_path, const std::string& out_path) {
    Impl& impl = *impl_;
    // Stage clients are built up front so a missing prompt or binding fails
    // before any backend call.
    const CaptionStages caption_stages{impl.make_stage("caption_audio"),
                                       impl.make_stage("caption_visual")};
    const StageClient sampler = impl.make_stage("msgr_sampler");
    const StageClient adjudicator = impl.make_stage("msgr_refiner");
    const StageClient ho_extractor = impl.make_stage("ho_extractor");
    const StageClient sr_extractor = impl.make_stage("sr_extractor");
    const StageClient refiner = impl.make_stage("hlos_refiner");

    const fs::path work = impl.work_dir(out_path);
    fs::create_directories(work);

    const std::vector<Dialogue> dialogues = parse_dataset(read_file(dataset_path, "dataset"));
    StageFile captioned_store(work / "captioned.jsonl");
    StageFile ta_store(work / "ta.jsonl");
    StageFile ho_store(work / "ho.jsonl");
    StageFile prelim_store(work / "prelim.jsonl");
    StageFile final_store(work / "final.jsonl");

    std::vector<DialogueOutcome> outcomes(dialogues.size());
    parallel_for(dialogues.size(), impl.config.concurrency, [&](size_t i) {
        const Dialogue& raw = dialogues[i];
        DialogueOutcome& out = outcomes[i];
        out.doc_id = raw.doc_id;
        std::string current_stage = "caption";
        try {
            const Dialogue dialogue = captioned_dialogue(raw, caption_stages, captioned_store);

            current_stage = "msgr";
            TAList pairs;
            if (auto row = ta_store.get(raw.doc_id)) {
                for (const json& p : (*row)["pairs"]) {
                    pairs.push_back({p["target"].get<std::string>(),
                                     p["aspect"].get<std::string>()});
                }
            } else {
                ConsensusResult consensus = run_consensus(dialogue, sampler, impl.config.msgr);
                TAList extracted;
                std::set<TAPair> seen;
                for (size_t idx = 0; idx < consensus.length; ++idx) {
                    TAPair pair = adjudicate_index(
                        dialogue, candidate_set_at(consensus.lists, idx), idx, adjudicator);
                    if (seen.insert(pair).second) extracted.push_back(std::move(pair));
                }
                json pair_rows = json::array();
                for (const TAPair& p : extracted) {
                    pair_rows.push_back({{"target", p.target}, {"aspect", p.aspect}});
                }
                ta_store.put(raw.doc_id,
                             {{"pairs", std::move(pair_rows)}, {"fallback", consensus.fallback}});
                pairs = std::move(extracted);
            }

            current_stage = "ho_extract";
            json ho_rows;
            if (auto row = ho_store.get(raw.doc_id)) {
                ho_rows = (*row)["rows"];
            } else {
                ho_rows = json::array();
                for (const TAPair& pair : pairs) {
                    json entry = {{"target", pair.target}, {"aspect", pair.aspect}};
                    try {
                        HolderOpinion ho = extract_holder_opinion(dialogue, pair, ho_extractor);
                        entry["holder"] = ho.holder;
                        entry["opinion"] = ho.opinion;
                        if (ho.anchor_utterance) entry["anchor_utterance"] = *ho.anchor_utterance;
                        if (ho.anchor_dropped) entry["anchor_dropped"] = true;
                    } catch (const ParseFailure& e) {
                        entry["skipped"] = e.what();
                    }
                    ho_rows.push_back(std::move(entry));
                }
                ho_store.put(raw.doc_id, {{"rows", ho_rows}});
            }

            current_stage = "sr_complete";
            json prelim_rows;
            if (auto row = prelim_store.get(raw.doc_id)) {
                prelim_rows = (*row)["rows"];
            } else {
                prelim_rows = json::array();
                for (const json& ho : ho_rows) {
                    if (ho.contains("skipped")) {
                        prelim_rows.push_back(ho);
                        continue;
                    }
                    PartialSextuple partial;
                    partial.holder = ho["holder"].get<std::string>();
                    partial.target = ho["target"].get<std::string>();
                    partial.aspect = ho["aspect"].get<std::string>();
                    partial.opinion = ho["opinion"].get<std::string>();
                    if (auto it = ho.find("anchor_utterance"); it != ho.end()) {
                        partial.anchor_utterance = it->get<int>();
                    }
                    json entry;
                    try {
                        entry = sextuple_row(complete_sextuple(dialogue, partial, sr_extractor));
                    } catch (const ParseFailure& e) {
                        entry = {{"target", partial.target},
                                 {"aspect", partial.aspect},
                                 {"skipped", e.what()}};
                    }
                    prelim_rows.push_back(std::move(entry));
                }
                prelim_store.put(raw.doc_id, {{"rows", prelim_rows}});
            }

            current_stage = "hlos_refine";
            json final_rows;
            if (auto row = final_store.get(raw.doc_id)) {
                final_rows = (*row)["sextuples"];
            } else {
                final_rows = json::array();
                for (const json& prelim : prelim_rows) {
                    if (prelim.contains("skipped")) continue;
                    Sextuple refined =
                        refine_sextuple(dialogue, sextuple_from_row(prelim), refiner);
                    final_rows.push_back(sextuple_row(refined));
                }
                final_store.put(raw.doc_id, {{"sextuples", final_rows}});
            }

            for (const json& prelim : prelim_rows) {
                if (!prelim.contains("skipped")) continue;
                const std::string stage = prelim.contains("holder") ? "sr_complete" : "ho_extract";
                out.errors.push_back({raw.doc_id, stage, prelim["skipped"].get<std::string>(),
                                      false});
            }
            for (const json& row : final_rows) out.sextuples.push_back(sextuple_from_row(row));
        } catch (const std::exception& e) {
            out.failed = true;
            out.errors.push_back({raw.doc_id, current_stage, e.what(), is_backend_class(e)});
        }
    });

    RunOutcome outcome;
    SextuplePredictions predictions;
    for (DialogueOutcome& out : outcomes) {
        outcome.errors.insert(outcome.errors.end(), out.errors.begin(), out.errors.end());
        outcome.warnings.insert(outcome.warnings.end(), out.warnings.begin(), out.warnings.end());
        if (!out.failed) predictions.emplace(out.doc_id, std::move(out.sextuples));
    }
    atomic_write(out_path, serialize_sextuple_predictions(predictions));
    impl.finalize(outcome, work);
    return outcome;
}

RunOutcome Pipeline::run_subtask2(const std::string& dataset_path,
                                  const std::string& subtask1_predictions_path,
                                  const std::string& out_path) {
    Impl& impl = *impl_;
    if (impl.config.fusion.empty()) {
        throw ConfigError("subtask 2 requires a nonempty \"fusion\" list");
    }
    const bool uses_rule_model =
        std::find(impl.config.fusion.begin(), impl.config.fusion.end(), "flip_model_3") !=
        impl.config.fusion.end();
    if (uses_rule_model && subtask1_predictions_path.empty()) {
        throw ConfigError("fusion includes flip_model_3; pass the Subtask-I predictions file");
    }

    const CaptionStages caption_stages{impl.make_stage("caption_audio"),
                                       impl.make_stage("caption_visual")};
    std::map<std::string, StageClient> end_to_end_stages;
    std::optional<StageClient> trigger_classifier;
    for (const std::string& stage : impl.config.fusion) {
        if (stage == "flip_model_3") {
            trigger_classifier = impl.make_stage("trigger_classifier");
        } else {
            end_to_end_stages.emplace(stage, impl.make_stage(stage));
        }
    }

    SextuplePredictions subtask1;
    if (!subtask1_predictions_path.empty()) {
        subtask1 =
            parse_sextuple_predictions(read_file(subtask1_predictions_path, "predictions"));
    }

    const fs::path work = impl.work_dir(out_path);
    fs::create_directories(work);

    const std::vector<Dialogue> dialogues = parse_dataset(read_file(dataset_path, "dataset"));
    StageFile captioned_store(work / "captioned.jsonl");
    std::map<std::string, std::unique_ptr<StageFile>> flip_stores;
    for (const std::string& stage : impl.config.fusion) {
        flip_stores.emplace(stage,
                            std::make_unique<StageFile>(work / ("flips_" + stage + ".jsonl")));
    }

    std::vector<DialogueOutcome> outcomes(dialogues.size());
    parallel_for(dialogues.size(), impl.config.concurrency, [&](size_t i) {
        const Dialogue& raw = dialogues[i];
        DialogueOutcome& out = outcomes[i];
        out.doc_id = raw.doc_id;
        std::string current_stage = "caption";
        try {
            const Dialogue dialogue = captioned_dialogue(raw, caption_stages, captioned_store);

            std::vector<std::vector<FlipRecord>> per_model;
            for (const std::string& stage : impl.config.fusion) {
                current_stage = stage;
                StageFile& store = *flip_stores.at(stage);
                std::vector<FlipRecord> records;
                if (auto row = store.get(raw.doc_id)) {
                    for (const json& r : (*row)["flips"]) {
                        if (auto record = flip_from_row(r)) records.push_back(*record);
                    }
                } else {
                    if (stage == "flip_model_3") {
                        std::vector<Sextuple> sextuples;
                        if (auto it = subtask1.find(raw.doc_id); it != subtask1.end()) {
                            sextuples = it->second;
                        }
                        std::vector<std::string> rule_warnings;
                        for (const FlipCandidate& candidate :
                             detect_flips_rule(sextuples, &rule_warnings)) {
                            TriggerResult trigger =
                                classify_trigger(dialogue, candidate, *trigger_classifier);
                            if (trigger.defaulted) {
                                out.warnings.push_back(
                                    raw.doc_id + ": trigger defaulted for (" + candidate.target +
                                    ", " + candidate.aspect + ")");
                            }
                            records.push_back({candidate.holder, candidate.target,
                                               candidate.aspect, candidate.initial_sentiment,
                                               candidate.flipped_sentiment, trigger.category});
                        }
                        for (std::string& w : rule_warnings) {
                            out.warnings.push_back(raw.doc_id + ": " + w);
                        }
                    } else {
                        records = end_to_end_flips(dialogue, end_to_end_stages.at(stage));
                    }
                    json rows = json::array();
                    for (const FlipRecord& r : records) rows.push_back(flip_row(r));
                    store.put(raw.doc_id, {{"flips", std::move(rows)}});
                }
                per_model.push_back(std::move(records));
            }
            out.flips = fuse_hierarchical(per_model);
        } catch (const std::exception& e) {
            out.failed = true;
            out.errors.push_back({raw.doc_id, current_stage, e.what(), is_backend_class(e)});
        }
    });

    RunOutcome outcome;
    FlipPredictions predictions;
    for (DialogueOutcome& out : outcomes) {
        outcome.errors.insert(outcome.errors.end(), out.errors.begin(), out.errors.end());
        outcome.warnings.insert(outcome.warnings.end(), out.warnings.begin(), out.warnings.end());
        if (!out.failed) predictions.emplace(out.doc_id, std::move(out.flips));
    }
    atomic_write(out_path, serialize_flip_predictions(predictions));
    impl.finalize(outcome, work);
    return outcome;
}

namespace {

SextuplePredictions gold_sextuples_from_text(const std::string& text) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        SextuplePredictions gold;
        for (const Dialogue& d : parse_dataset(text)) {
            gold.emplace(d.doc_id, d.gold_sextuples.value_or(std::vector<Sextuple>{}));
        }
        return gold;
    }
    return parse_sextuple_predictions(text);
}

FlipPredictions gold_flips_from_text(const std::string& text) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        FlipPredictions gold;
        for (const Dialogue& d : parse_dataset(text)) {
            gold.emplace(d.doc_id, d.gold_flips.value_or(std::vector<FlipRecord>{}));
        }
        return gold;
    }
    return parse_flip_predictions(text);
}

}  // namespace

int evaluate_cmd(const std::string& pred_path, const std::string& gold_path, int task,
                 const std::string& out_path, std::ostream& summary) {
    if (task != 1 && task != 2) throw ConfigError("task must be 1 or 2");

    const std::string pred_text = read_file(pred_path, "prediction file");
    const std::string gold_text = read_file(gold_path, "gold file");

    std::ostringstream lines;
    lines << std::fixed << std::setprecision(4);
    json report;
    if (task == 1) {
        const SextuplePredictions pred = parse_sextuple_predictions(pred_text);
        const SextuplePredictions gold = gold_sextuples_from_text(gold_text);
        const MatchReport six = sextuple_micro_f1(pred, gold);
        const MatchReport five = identification_f1(pred, gold);
        const double average = (six.f1 + five.f1) / 2.0;
        report = {{"sextuple", report_json(six)},
                  {"identification", report_json(five)},
                  {"average", average}};
        lines << "sextuple_f1 " << six.f1 << '\n'
              << "identification_f1 " << five.f1 << '\n'
              << "average " << average << '\n';
    } else {
        const FlipPredictions pred = parse_flip_predictions(pred_text);
        const FlipPredictions gold = gold_flips_from_text(gold_text);
        const MatchReport exact = exact_match_f1(pred, gold);
        report = {{"exact_match", report_json(exact)}};
        lines << "exact_match_f1 " << exact.f1 << '\n';
    }
    if (!out_path.empty()) atomic_write(out_path, report.dump(2));
    summary << lines.str();
    return kExitOk;
}

int validate_cmd(const std::string& dataset_path, std::ostream& out) {
    const std::vector<Dialogue> dialogues = parse_dataset(read_file(dataset_path, "dataset"));
    size_t utterances = 0, attachments = 0, with_gold = 0;
    for (const Dialogue& d : dialogues) {
        utterances += d.utterances.size();
        for (const Utterance& u : d.utterances) attachments += u.attachments.size();
        if (d.gold_sextuples || d.gold_flips) ++with_gold;
    }
    out << "ok: " << dialogues.size() << " dialogues, " << utterances << " utterances, "
        << attachments << " attachments, " << with_gold << " with gold labels\n";
    return kExitOk;
}

}  // namespace mcabsa
