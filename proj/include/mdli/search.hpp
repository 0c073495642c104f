#pragma once

#include "mdli/modes.hpp"

namespace mdli {

enum class Side { Input, Output };

inline const char* side_name(Side s) { return s == Side::Input ? "in" : "out"; }

// Atomic model edit considered by the search: replace a node (pattern,
// constant or expression), insert a list element, or remove one.
struct Refinement {
    enum class Op { Replace, InsertElem, RemoveElem };
    Op op = Op::Replace;
    Side side = Side::Input;
    Path path;
    NodePtr node;  // replacement or inserted element
    int pos = 0;   // list position for InsertElem/RemoveElem
    bool deferred = false;
    std::string label;
    Bits est_hint = 0;  // proposer-supplied data-side savings estimate
};

// Reference values from §6.1; every field is runtime configuration.
struct LearnConfig {
    int alpha = 10;
    int parse_limit = 64;
    int keep_descriptions = 3;
    long max_expressions = 100000;
    int eval_top = 20;
    double learn_timeout = 60.0;
    double prune_timeout = 10.0;
    int beam_width = 1;
    uint64_t seed = 0;
    bool defer_alt = true;  // delay Alt refinements until nothing else improves
};

struct ExampleJoints {
    std::vector<JointDesc> kept;  // keep_descriptions most compressive
};

struct RefineCtx {
    const Domain& domain;
    const TaskModel& model;
    const std::vector<Example>& train;
    const std::vector<ExampleJoints>& joints;
    const EnvSignature& sig;  // of the current input model
    const LearnConfig& cfg;
};

struct TraceStep {
    int step = 0;
    std::string refinement;
    double lhat = 0;
};

struct SearchTrace {
    std::vector<TraceStep> steps;  // step 0 is the initial model at 2.000
    std::string stop_reason;       // "no-improvement" or "timeout"
};

struct LearnResult {
    TaskModel model;
    SearchTrace trace;
    DLReport report;
    DLReport baseline;
    double lhat = 2.0;
    double seconds = 0;
    std::vector<ExampleJoints> joints;
};

// Candidate refinements of the current model, guided by the kept joint
// descriptions. Deterministic order; may be empty.
std::vector<Refinement> enumerate_refinements(const RefineCtx& ctx);

// Cheap DL proxy used to rank candidates before full evaluation: model-DL
// delta plus the description-DL delta on the kept descriptions, no re-parse.
Bits estimate_gain(const RefineCtx& ctx, const Refinement& r);

Result<TaskModel> apply_refinement(const Domain& d, const TaskModel& m, const Refinement& r);

// Greedy MDL descent from the initial model (?, ?).
LearnResult learn(const Domain& d, const std::vector<Example>& train, const LearnConfig& cfg);

struct PruneResult {
    TaskModel model;
    std::vector<TraceStep> steps;
    double seconds = 0;
};

// Post-hoc generalization under the prediction-oriented DL: inverse
// refinements (remove a layer, constant/constructor to unknown) that keep
// every training prediction correct and do not increase prediction_dl.
PruneResult prune(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                  const LearnConfig& cfg);

} // namespace mdli
