#pragma once

#include "mdli/task.hpp"

namespace mdli {

struct TaskOutcome {
    std::string id;
    bool loaded = false;
    bool solved = false;  // acc_test_macro == 1 under the 3-attempt protocol
    Metrics metrics;
    TaskModel learned;   // before pruning
    TaskModel pruned;    // after pruning
    SearchTrace trace;
    std::vector<TraceStep> prune_steps;
    DLReport report;
    std::string error;
    std::string log_text;
};

struct BenchReport {
    std::vector<TaskOutcome> outcomes;  // ordered by task id
    int tasks = 0;
    int solved = 0;
    int failed_to_load = 0;
    double mean_runtime_solved = 0;
    double mean_runtime_all = 0;

    // Deterministic aggregate: per-task metrics without wall-clock fields.
    std::string aggregate_json() const;
    // Full aggregate including a separate timing section.
    std::string aggregate_json_with_timing() const;
    std::string summary_text() const;
};

// Learns, prunes and evaluates one task; fills the per-task log.
TaskOutcome solve_task(const Task& task, const LearnConfig& cfg, bool with_log = true);

// Processes every *.json task in a directory independently, with a worker
// pool of `jobs`. Unreadable tasks are logged, skipped and counted as
// failures; the report is ordered by task id.
BenchReport run_benchmark(const std::string& task_dir, const LearnConfig& cfg, int jobs,
                          const std::string& log_path = "", const std::string& png_dir = "");

// Table-3-shaped DL decomposition (input/output x model/data).
std::string dl_table(const DLReport& rep);
// Table-4-shaped learning trace: "step | refinement | L-hat".
std::string trace_table(const SearchTrace& trace);

} // namespace mdli
