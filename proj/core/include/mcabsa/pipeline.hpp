#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "mcabsa/backend.hpp"
#include "mcabsa/config.hpp"
#include "mcabsa/dialogue.hpp"

namespace mcabsa {

/// Process exit codes shared by the library entry points and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // usage / config problems
inline constexpr int kExitData = 2;     // dataset or prediction file problems
inline constexpr int kExitBackend = 3;  // provider exhaustion / script misses

struct DialogueError {
    std::string doc_id;
    std::string stage;
    std::string message;
    bool backend_class = false;  // true for exhaustion-style failures
};

struct RunStatsSnapshot {
    std::uint64_t requests = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t provider_calls = 0;
};

struct RunOutcome {
    int exit_code = kExitOk;
    RunStatsSnapshot stats;
    std::vector<DialogueError> errors;
    std::vector<std::string> warnings;
};

/// Binds a run configuration to live backends and prompt templates, and
/// drives the per-dialogue stage graph with bounded concurrency. Every
/// command persists intermediate stage outputs as JSON-lines files under the
/// work directory, so an interrupted run resumes from the last completed
/// stage, and writes an error manifest plus request counters next to them.
class Pipeline {
public:
    explicit Pipeline(RunConfig config);
    ~Pipeline();

    Pipeline(const Pipeline&) = delete;
    Pipeline& operator=(const Pipeline&) = delete;

    /// Captions every attachment and writes the enriched dataset.
    RunOutcome run_caption(const std::string& dataset_path, const std::string& out_path);

    /// Subtask-I: captions, MSGR target-aspect extraction, holder-opinion,
    /// completion and refinement; writes a doc_id -> sextuples file.
    RunOutcome run_subtask1(const std::string& dataset_path, const std::string& out_path);

    /// Subtask-II: the configured fusion stages (end-to-end models plus the
    /// rule-based path over Subtask-I predictions) fused per dialogue.
    RunOutcome run_subtask2(const std::string& dataset_path,
                            const std::string& subtask1_predictions_path,
                            const std::string& out_path);

    RunStatsSnapshot stats() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Scores a prediction file against gold (a dataset file with gold fields or
/// a second prediction-format file). Task 1 reports sextuple, identification
/// and their average; task 2 reports exact match. Writes the JSON report to
/// out_path when nonempty and prints one metric per line to `summary`.
int evaluate_cmd(const std::string& pred_path, const std::string& gold_path, int task,
                 const std::string& out_path, std::ostream& summary);

/// Validates a dataset file, printing per-dialogue statistics.
int validate_cmd(const std::string& dataset_path, std::ostream& out);

}  // namespace mcabsa
