#include "mdli/coding.hpp"

#include <cmath>

#include "mdli/modes.hpp"

namespace mdli {

Bits universal_int(long n) {
    if (n < 1) return kInfiniteDL;  // callers must pass n >= 1
    int lg = 0;
    while ((n >> (lg + 1)) > 0) ++lg;  // floor(log2 n)
    int lglg = 0;
    long m = lg + 1;
    while ((m >> (lglg + 1)) > 0) ++lglg;
    return 1.0 + lg + 2.0 * lglg;
}

Coder::Choice Coder::choice_at(KindId kind, const Ctx& ctx) const {
    const Schema& s = dom_->schema();
    Choice c;
    c.ref_targets = ctx.env ? ctx.env->count_compatible(s, kind) : 0;
    c.apply_targets = ctx.env ? int(dom_->functions().by_result(kind).size()) : 0;
    bool expr_possible = c.ref_targets > 0 || c.apply_targets > 0;
    c.p_unknown = ctx.allow_unknown ? kPUnknown : 0.0;
    double p_expr = expr_possible ? kPExpr : 0.0;
    if (c.ref_targets > 0 && c.apply_targets > 0) {
        c.p_ref = p_expr / 2;
        c.p_apply = p_expr / 2;
    } else if (c.ref_targets > 0) {
        c.p_ref = p_expr;
    } else if (c.apply_targets > 0) {
        c.p_apply = p_expr;
    }
    c.p_concrete = 1.0 - c.p_unknown - c.p_ref - c.p_apply;
    double w = 0;
    auto add_kind_weights = [&](KindId k) {
        for (CtorId ct : s.kind(k).ctors) w += s.ctor(ct).weight;
        if (s.kind(k).has_value) w += s.kind(k).value_weight;
    };
    add_kind_weights(kind);
    for (auto& [sup, sub] : s.subkinds)
        if (sup == kind) add_kind_weights(sub);
    c.total_weight = w;
    return c;
}

double Coder::concrete_weight(KindId kind, const NodePtr& n, bool* found) const {
    const Schema& s = dom_->schema();
    *found = false;
    if (!s.kind_compatible(kind, n->kind)) return 0;
    if (n->tag == Tag::Pat) {
        *found = true;
        return s.ctor(n->ctor).weight;
    }
    if (n->tag == Tag::Val && s.kind(n->kind).has_value) {
        *found = true;
        return s.kind(n->kind).value_weight;
    }
    return 0;
}

Result<Bits> Coder::node_dl(const NodePtr& n, KindId kind, const Ctx& ctx) const {
    const Schema& s = dom_->schema();
    Choice c = choice_at(kind, ctx);
    switch (n->tag) {
        case Tag::Unknown: {
            if (c.p_unknown <= 0) return Result<Bits>::fail("unknown not allowed here");
            return Result<Bits>::ok(-std::log2(c.p_unknown));
        }
        case Tag::Ref: {
            if (c.p_ref <= 0) return Result<Bits>::fail("reference not allowed here");
            return Result<Bits>::ok(-std::log2(c.p_ref) + std::log2(double(c.ref_targets)));
        }
        case Tag::Apply: {
            if (c.p_apply <= 0) return Result<Bits>::fail("function not allowed here");
            Bits bits = -std::log2(c.p_apply) + std::log2(double(c.apply_targets));
            const auto& spec = dom_->functions()[n->fn];
            if (spec.args.size() != n->args.size())
                return Result<Bits>::fail("apply arity mismatch");
            Ctx arg_ctx{false, ctx.env};  // expressions contain no unknowns
            for (size_t i = 0; i < n->args.size(); ++i) {
                auto sub = node_dl(n->args[i], spec.args[i], arg_ctx);
                if (!sub) return sub;
                bits += *sub;
            }
            return Result<Bits>::ok(bits);
        }
        case Tag::Val: {
            bool found = false;
            double w = concrete_weight(kind, n, &found);
            if (!found || c.p_concrete <= 0) return Result<Bits>::fail("value not admissible at kind");
            Bits bits = -std::log2(c.p_concrete * w / c.total_weight);
            return Result<Bits>::ok(bits + dom_->value_dl(n->val, n->kind));
        }
        case Tag::Pat: {
            bool found = false;
            double w = concrete_weight(kind, n, &found);
            if (!found || c.p_concrete <= 0)
                return Result<Bits>::fail("constructor not admissible at kind");
            Bits bits = -std::log2(c.p_concrete * w / c.total_weight);
            const auto& spec = s.ctor(n->ctor);
            for (size_t i = 0; i < spec.fields.size() && i < n->args.size(); ++i) {
                auto sub = node_dl(n->args[i], spec.fields[i].kind, ctx);
                if (!sub) return sub;
                bits += *sub;
            }
            if (spec.variadic) {
                int len = int(n->args.size() - spec.fields.size());
                bits += universal_int(len + 1);
                for (size_t i = spec.fields.size(); i < n->args.size(); ++i) {
                    auto sub = node_dl(n->args[i], spec.list_kind, ctx);
                    if (!sub) return sub;
                    bits += *sub;
                }
            }
            return Result<Bits>::ok(bits);
        }
    }
    return Result<Bits>::fail("bad node");
}

Result<Bits> Coder::model_dl(const NodePtr& model, const EnvSignature* env) const {
    return node_dl(model, dom_->root_kind(), Ctx{true, env});
}

Result<Bits> Coder::description_dl(const NodePtr& desc, const NodePtr& reduced_model) const {
    if (reduced_model->tag == Tag::Ref || reduced_model->tag == Tag::Apply)
        return Result<Bits>::fail("model not reduced");
    if (reduced_model->tag == Tag::Unknown) {
        // grounding cost: same coder, excluding unknowns and expressions
        return node_dl(desc, reduced_model->kind, Ctx{false, nullptr});
    }
    if (reduced_model->tag == Tag::Val) {
        if (desc->tag == Tag::Val && value_eq(desc->val, reduced_model->val))
            return Result<Bits>::ok(0.0);
        return Result<Bits>::fail("description is not an instance of the model");
    }
    // Pat
    if (desc->tag != Tag::Pat || desc->ctor != reduced_model->ctor ||
        desc->args.size() != reduced_model->args.size()) {
        auto admitted = dom_->admitted_desc_dl(reduced_model, desc);
        if (admitted) return admitted;
        return Result<Bits>::fail("description is not an instance of the model");
    }
    Bits bits = 0;
    for (size_t i = 0; i < desc->args.size(); ++i) {
        auto sub = description_dl(desc->args[i], reduced_model->args[i]);
        if (!sub) return sub;
        bits += *sub;
    }
    return Result<Bits>::ok(bits);
}

std::vector<std::pair<std::string, double>> Coder::choice_distribution(KindId kind,
                                                                       const Ctx& ctx) const {
    const Schema& s = dom_->schema();
    Choice c = choice_at(kind, ctx);
    std::vector<std::pair<std::string, double>> out;
    if (c.p_unknown > 0) out.push_back({"unknown", c.p_unknown});
    if (c.p_ref > 0)
        for (int i = 0; i < c.ref_targets; ++i)
            out.push_back({"ref#" + std::to_string(i), c.p_ref / c.ref_targets});
    if (c.p_apply > 0)
        for (int i = 0; i < c.apply_targets; ++i)
            out.push_back({"apply#" + std::to_string(i), c.p_apply / c.apply_targets});
    auto add_kind = [&](KindId k) {
        for (CtorId ct : s.kind(k).ctors)
            if (s.ctor(ct).weight > 0)
                out.push_back({s.ctor(ct).name, c.p_concrete * s.ctor(ct).weight / c.total_weight});
        if (s.kind(k).has_value && s.kind(k).value_weight > 0)
            out.push_back({"value:" + s.kind(k).name,
                           c.p_concrete * s.kind(k).value_weight / c.total_weight});
    };
    add_kind(kind);
    for (auto& [sup, sub] : s.subkinds)
        if (sup == kind) add_kind(sub);
    return out;
}

DLReport task_dl(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                 int alpha, int parse_limit) {
    Coder coder(d);
    DLReport rep;
    rep.alpha = alpha;
    auto mi = coder.model_dl(m.input, nullptr);
    EnvSignature sig = signature_of_model(d, m.input);
    auto mo = coder.model_dl(m.output, &sig);
    rep.model_in = mi ? *mi : kInfiniteDL;
    rep.model_out = mo ? *mo : kInfiniteDL;
    for (const auto& ex : train) {
        ExampleDL e = example_dl(d, m, ex, parse_limit);
        if (e.total() >= kInfiniteDL) {
            rep.data_in = kInfiniteDL;
            rep.data_out = kInfiniteDL;
            return rep;
        }
        rep.data_in += alpha * e.bits_in;
        rep.data_out += alpha * e.bits_out;
    }
    return rep;
}

Result<double> normalized_dl(const DLReport& report, const DLReport& baseline) {
    double bi = baseline.input_total(), bo = baseline.output_total();
    if (bi <= 0 || bo <= 0) return Result<double>::fail("zero baseline side");
    return Result<double>::ok(report.input_total() / bi + report.output_total() / bo);
}

Bits prediction_dl(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                   int alpha, int parse_limit) {
    Coder coder(d);
    auto mi = coder.model_dl(m.input, nullptr);
    EnvSignature sig = signature_of_model(d, m.input);
    auto mo = coder.model_dl(m.output, &sig);
    if (!mi || !mo) return kInfiniteDL;
    Bits bits = *mi + *mo;
    for (const auto& ex : train) {
        auto joints = describe(d, m, ex, parse_limit, 0);
        Bits best = kInfiniteDL;
        for (const auto& j : joints)
            best = std::min(best, rank_dl(j.rank_in) + j.bits_out);
        if (best >= kInfiniteDL) return kInfiniteDL;
        bits += alpha * best;
    }
    return bits;
}

} // namespace mdli
