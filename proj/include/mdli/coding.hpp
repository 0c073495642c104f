#pragma once

#include "mdli/model_ops.hpp"

namespace mdli {

// Elias delta code length for n >= 1.
Bits universal_int(long n);
// Extra cost of choosing the rho-th parse instead of the first.
inline Bits rank_dl(int rho) { return universal_int(rho) - universal_int(1); }

// Decomposed description lengths driving the search.
struct DLReport {
    Bits model_in = 0, model_out = 0, data_in = 0, data_out = 0;
    int alpha = 1;
    Bits model_total() const { return model_in + model_out; }
    Bits data_total() const { return data_in + data_out; }
    Bits total() const { return model_total() + data_total(); }
    Bits input_total() const { return model_in + data_in; }
    Bits output_total() const { return model_out + data_out; }
};

// Node coding. At each hole of kind t the choice distribution is:
//   P(unknown) = 1/8 when unknowns are allowed;
//   P(ref-or-apply) = 1/4 when the environment offers a compatible component
//     or a function can produce the kind (output models only);
//   the remaining mass is split over the kind's constructors and value
//   alternative by their registered weights.
class Coder {
  public:
    struct Ctx {
        bool allow_unknown = true;
        const EnvSignature* env = nullptr;  // non-null only for output models
    };

    static constexpr double kPUnknown = 0.125;
    static constexpr double kPExpr = 0.25;

    explicit Coder(const Domain& d) : dom_(&d) {}

    // DL of a model-side node at a hole of kind `kind`.
    Result<Bits> node_dl(const NodePtr& n, KindId kind, const Ctx& ctx) const;

    // L(M): input side with env = null, output side with the input model's
    // reference signature.
    Result<Bits> model_dl(const NodePtr& model, const EnvSignature* env) const;

    // L(pi | M, env): cost of the description components grounding the
    // unknowns of the reduced model. Components fixed by the model cost 0.
    Result<Bits> description_dl(const NodePtr& desc, const NodePtr& reduced_model) const;

    // Full choice distribution at a hole, for Kraft checks and logging.
    // Entries are (label, probability); probabilities sum to exactly 1.
    std::vector<std::pair<std::string, double>> choice_distribution(KindId kind,
                                                                    const Ctx& ctx) const;

    const Domain& domain() const { return *dom_; }

  private:
    const Domain* dom_;

    struct Choice {
        double p_unknown = 0, p_ref = 0, p_apply = 0, p_concrete = 0;
        double total_weight = 0;  // concrete alternatives
        int ref_targets = 0;
        int apply_targets = 0;
    };
    Choice choice_at(KindId kind, const Ctx& ctx) const;
    double concrete_weight(KindId kind, const NodePtr& n, bool* found) const;
};

struct JointDesc {
    int rank_in = 1, rank_out = 1;
    NodePtr desc_in, desc_out;
    Bits bits_in = 0, bits_out = 0;  // L(rho) + L(pi|M,env) + L(datum|pi) per side
    Bits total() const { return bits_in + bits_out; }
};

inline constexpr Bits kInfiniteDL = 1e18;

// L(M, D) decomposition for a task model over training examples.
// data terms are alpha times the sums of the per-example argmin splits.
DLReport task_dl(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                 int alpha, int parse_limit);

// Normalized DL in [0, 2]: input and output ratios against the initial model.
Result<double> normalized_dl(const DLReport& report, const DLReport& baseline);

// Prediction-oriented DL used by pruning: the input side of each example
// contributes only the rank cost L(rho_i).
Bits prediction_dl(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                   int alpha, int parse_limit);

} // namespace mdli
