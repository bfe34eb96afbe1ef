#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "mcabsa/backend.hpp"
#include "mcabsa/config.hpp"
#include "mcabsa/errors.hpp"
#include "mcabsa/pipeline.hpp"

namespace {

void report_outcome(const mcabsa::RunOutcome& outcome, const std::string& out_path) {
    for (const mcabsa::DialogueError& e : outcome.errors) {
        std::cerr << "error: [" << e.doc_id << "/" << e.stage << "] " << e.message << '\n';
    }
    for (const std::string& w : outcome.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << out_path << " (requests " << outcome.stats.requests
              << ", cache hits " << outcome.stats.cache_hits << ", provider calls "
              << outcome.stats.provider_calls << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MCABSA pipeline: sentiment sextuple extraction, flip analysis, evaluation"};
    app.require_subcommand(1);

    std::string config_path, in_path, out_path, gold_path, sextuples_path, cache_dir;
    int task = 1;

    auto* caption = app.add_subcommand("caption", "Caption attachments, write enriched dataset");
    caption->add_option("--config", config_path, "Run configuration JSON")->required();
    caption->add_option("--in", in_path, "Dataset file")->required();
    caption->add_option("--out", out_path, "Enriched dataset output")->required();

    auto* extract = app.add_subcommand("extract", "Subtask-I sextuple extraction");
    extract->add_option("--config", config_path, "Run configuration JSON")->required();
    extract->add_option("--in", in_path, "Dataset file")->required();
    extract->add_option("--out", out_path, "Predictions output (doc_id -> sextuples)")->required();

    auto* flip = app.add_subcommand("flip", "Subtask-II flip detection and fusion");
    flip->add_option("--config", config_path, "Run configuration JSON")->required();
    flip->add_option("--in", in_path, "Dataset file")->required();
    flip->add_option("--out", out_path, "Predictions output (doc_id -> flips)")->required();
    flip->add_option("--sextuples", sextuples_path,
                     "Subtask-I predictions (required when fusion uses flip_model_3)");

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
    evaluate->add_option("--in", in_path, "Prediction file")->required();
    evaluate->add_option("--gold", gold_path, "Gold file (dataset or prediction format)")
        ->required();
    evaluate->add_option("--task", task, "1 = sextuples, 2 = flips")->required();
    evaluate->add_option("--out", out_path, "JSON report output");
    evaluate->add_option("--config", config_path, "Unused; accepted for uniformity");

    auto* cache = app.add_subcommand("cache", "Response cache utilities");
    cache->require_subcommand(1);
    auto* stats = cache->add_subcommand("stats", "Print entry count and total size");
    stats->add_option("--config", config_path, "Run configuration JSON (for cache_dir)");
    stats->add_option("--dir", cache_dir, "Cache directory (overrides --config)");

    auto* validate = app.add_subcommand("validate", "Parse and validate a dataset file");
    validate->add_option("--in", in_path, "Dataset file")->required();
    validate->add_option("--config", config_path, "Unused; accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : mcabsa::kExitUsage;
    }

    try {
        if (caption->parsed() || extract->parsed() || flip->parsed()) {
            mcabsa::Pipeline pipeline(mcabsa::load_run_config(config_path));
            mcabsa::RunOutcome outcome;
            if (caption->parsed()) {
                outcome = pipeline.run_caption(in_path, out_path);
            } else if (extract->parsed()) {
                outcome = pipeline.run_subtask1(in_path, out_path);
            } else {
                outcome = pipeline.run_subtask2(in_path, sextuples_path, out_path);
            }
            report_outcome(outcome, out_path);
            return outcome.exit_code;
        }
        if (evaluate->parsed()) {
            return mcabsa::evaluate_cmd(in_path, gold_path, task, out_path, std::cout);
        }
        if (stats->parsed()) {
            std::string dir = cache_dir;
            if (dir.empty()) {
                if (config_path.empty()) {
                    throw mcabsa::ConfigError("cache stats needs --dir or --config");
                }
                dir = mcabsa::load_run_config(config_path).cache_dir;
                if (dir.empty()) throw mcabsa::ConfigError("config has no cache_dir");
            }
            mcabsa::CacheDirStats s = mcabsa::ResponseCache::stats(dir);
            std::cout << "entries " << s.entries << "\nbytes " << s.bytes << '\n';
            return mcabsa::kExitOk;
        }
        if (validate->parsed()) {
            return mcabsa::validate_cmd(in_path, std::cout);
        }
    } catch (const mcabsa::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mcabsa::kExitUsage;
    } catch (const mcabsa::UnknownBackend& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mcabsa::kExitUsage;
    } catch (const mcabsa::BackendExhausted& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mcabsa::kExitBackend;
    } catch (const mcabsa::ScriptMiss& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mcabsa::kExitBackend;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return mcabsa::kExitData;
    }
    return mcabsa::kExitUsage;
}
