#pragma once

#include "mdli/coding.hpp"

namespace mdli {

// Joint descriptions of an example: the output parse uses the input
// description as its environment. Ordered by total DL ascending, ties by
// (rank_in, rank_out). Empty when either side fails to parse.
std::vector<JointDesc> describe(const Domain& d, const TaskModel& m, const Example& ex,
                                int parse_limit, int keep);

// Most compressive joint description, or infinite-DL sentinel when none.
struct ExampleDL {
    Bits bits_in = kInfiniteDL, bits_out = kInfiniteDL;
    std::optional<JointDesc> best;
    Bits total() const { return bits_in >= kInfiniteDL ? kInfiniteDL : bits_in + bits_out; }
};
ExampleDL example_dl(const Domain& d, const TaskModel& m, const Example& ex, int parse_limit);

struct Prediction {
    int rank_in = 1, rank_out = 1;
    Datum datum;
};

// Predict-mode comprehension: parse the input with the nil environment, then
// generate from the output model. Lexicographic by (rank_in, rank_out).
std::vector<Prediction> predict(const Domain& d, const TaskModel& m, const Datum& input,
                                int parse_limit, int max_results = 16);

// First `n` distinct predicted datums (the ARC protocol consumes 3).
std::vector<Datum> predict_distinct(const Domain& d, const TaskModel& m, const Datum& input,
                                    int parse_limit, int n = 3);

// Create-mode: seeded random generation of an input, then of the conditioned
// output. Fails on dangling references.
Result<Example> create(const Domain& d, const TaskModel& m, uint64_t seed, int parse_limit);

} // namespace mdli
