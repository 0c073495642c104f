#pragma once

#include "mdli/search.hpp"

namespace mdli {

struct Task {
    std::string id;
    std::vector<Example> train;
    std::vector<Example> test;
    const Domain* domain = nullptr;
};

// ARC JSON convention: {"train": [{"input": matrix, "output": matrix}, ...],
// "test": [...]}. String tasks use strings or arrays of strings instead of
// matrices. The domain is detected from the payload.
Result<Task> load_task(const std::string& json_text, const std::string& id);
Result<Task> load_task_file(const std::string& path);

std::string datum_to_json(const Datum& d);
std::string task_to_json(const Task& t);

struct Metrics {
    double runtime_learning = 0;  // seconds, including pruning
    Bits bits_train_error = 0;
    double acc_train_micro = 0, acc_train_macro = 0, acc_train_mrr = 0;
    double acc_test_micro = 0, acc_test_macro = 0, acc_test_mrr = 0;
};

// ARC protocol: per test example the first 3 distinct predictions; correct
// iff any equals the expected grid; macro = 1 iff all test examples correct.
Metrics evaluate(const Domain& d, const TaskModel& m, const Task& task, const LearnConfig& cfg);

} // namespace mdli
