#include "mdli/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

namespace mdli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kEps = 1e-9;

// ---------------------------------------------------------------------------
// Expression enumeration: references and depth-<=2 function compositions,
// evaluated into value tables per kept joint description.
// ---------------------------------------------------------------------------

struct ExprTable {
    struct Env {
        int example = 0;
        NodePtr desc_in;
        NodePtr desc_out;
    };
    std::vector<Env> envs;
    std::vector<NodePtr> exprs;
    std::vector<Bits> model_cost;
    // values[e][env]: evaluated description or null
    std::vector<std::vector<NodePtr>> values;
    // per env: value hash -> expr ids (built for the first example only)
    std::vector<std::unordered_map<uint64_t, std::vector<int>>> index;
    int first_example_envs = 0;
};

ExprTable build_expr_table(const RefineCtx& ctx) {
    ExprTable t;
    const Domain& d = ctx.domain;
    const Coder coder(d);

    for (size_t e = 0; e < ctx.joints.size(); ++e)
        for (const auto& j : ctx.joints[e].kept) {
            if (e == 0) ++t.first_example_envs;
            t.envs.push_back({int(e), j.desc_in, j.desc_out});
        }
    if (t.envs.empty()) return t;

    // component paths from the best joint of the first example
    auto comps = components_of(d, t.envs[0].desc_in);
    auto consts = d.expression_const_args(ctx);

    long budget = ctx.cfg.max_expressions;
    auto add_expr = [&](const NodePtr& n) -> int {
        if (long(t.exprs.size()) >= budget) return -1;
        auto cost = coder.node_dl(n, n->kind, Coder::Ctx{false, &ctx.sig});
        t.exprs.push_back(n);
        t.model_cost.push_back(cost ? *cost : kInfiniteDL);
        t.values.emplace_back(t.envs.size());
        return int(t.exprs.size()) - 1;
    };

    // level 0: references
    std::vector<int> level0;
    for (const auto& c : comps.comps) {
        int id = add_expr(make_ref(c.desc->kind, c.path));
        if (id < 0) break;
        for (size_t k = 0; k < t.envs.size(); ++k) {
            auto v = lookup(d, t.envs[k].desc_in, c.path);
            if (v && (*v)->is_ground()) t.values[id][k] = *v;
        }
        level0.push_back(id);
    }
    // constant arguments usable inside applications (not standalone)
    struct ConstArg {
        NodePtr node;
    };
    std::vector<ConstArg> const_args;
    for (const auto& c : consts) const_args.push_back({c});

    const auto& fns = d.functions();
    auto arg_candidates = [&](KindId kind, const std::vector<int>& pool, bool with_consts) {
        struct Cand {
            int expr = -1;       // index into t.exprs, or
            const NodePtr* cst;  // constant node
        };
        std::vector<Cand> cands;
        for (int id : pool)
            if (d.schema().kind_compatible(kind, t.exprs[id]->kind))
                cands.push_back({id, nullptr});
        if (with_consts)
            for (const auto& c : const_args)
                if (d.schema().kind_compatible(kind, c.node->kind)) cands.push_back({-1, &c.node});
        if (cands.size() > 24) cands.resize(24);
        return cands;
    };

    auto eval_apply = [&](FuncId f, const std::vector<int>& arg_exprs,
                          const std::vector<NodePtr>& arg_consts, size_t env) -> NodePtr {
        std::vector<NodePtr> args(arg_exprs.size());
        for (size_t a = 0; a < args.size(); ++a) {
            args[a] = arg_exprs[a] >= 0 ? t.values[size_t(arg_exprs[a])][env] : arg_consts[a];
            if (!args[a]) return nullptr;
        }
        auto r = fns.eval(f, args);
        return r ? *r : nullptr;
    };

    auto enumerate_level = [&](const std::vector<int>& pool, bool require_nested,
                               std::vector<int>& out_level) {
        for (size_t fi = 0; fi < fns.size() && long(t.exprs.size()) < budget; ++fi) {
            const auto& spec = fns[FuncId(fi)];
            if (!spec.reference_set) continue;
            size_t arity = spec.args.size();
            if (arity == 0 || arity > 3) continue;
            std::vector<std::vector<int>> slots_expr(arity);
            std::vector<std::vector<const NodePtr*>> slots_cst(arity);
            for (size_t a = 0; a < arity; ++a) {
                auto cands = arg_candidates(spec.args[a], pool, true);
                for (auto& c : cands) {
                    slots_expr[a].push_back(c.expr);
                    slots_cst[a].push_back(c.cst);
                }
                if (slots_expr[a].empty()) {
                    slots_expr.clear();
                    break;
                }
            }
            if (slots_expr.empty()) continue;
            std::vector<size_t> idx(arity, 0);
            while (long(t.exprs.size()) < budget) {
                std::vector<int> arg_ids(arity);
                std::vector<NodePtr> arg_nodes(arity), arg_csts(arity);
                bool nested = false, ok = true;
                for (size_t a = 0; a < arity; ++a) {
                    int ei = slots_expr[a][idx[a]];
                    arg_ids[a] = ei;
                    if (ei >= 0) {
                        arg_nodes[a] = t.exprs[size_t(ei)];
                        nested |= t.exprs[size_t(ei)]->tag == Tag::Apply;
                    } else {
                        arg_csts[a] = *slots_cst[a][idx[a]];
                        arg_nodes[a] = arg_csts[a];
                    }
                }
                if (require_nested && !nested) ok = false;
                // at least one non-constant argument
                bool any_ref = false;
                for (size_t a = 0; a < arity; ++a) any_ref |= arg_ids[a] >= 0;
                if (!any_ref) ok = false;
                if (ok) {
                    int id = add_expr(make_apply(spec.result, FuncId(fi), arg_nodes));
                    if (id < 0) return;
                    bool any_value = false;
                    for (size_t k = 0; k < t.envs.size(); ++k) {
                        t.values[size_t(id)][k] = eval_apply(FuncId(fi), arg_ids, arg_csts, k);
                        any_value |= t.values[size_t(id)][k] != nullptr;
                    }
                    if (!any_value) {
                        // evaluates nowhere: drop it
                        t.exprs.pop_back();
                        t.model_cost.pop_back();
                        t.values.pop_back();
                    } else {
                        out_level.push_back(id);
                    }
                }
                size_t a = arity;
                bool done = true;
                while (a > 0) {
                    --a;
                    if (++idx[a] < slots_expr[a].size()) {
                        done = false;
                        break;
                    }
                    idx[a] = 0;
                }
                if (done) break;
            }
        }
    };

    std::vector<int> level1, level2;
    enumerate_level(level0, false, level1);
    std::vector<int> pool01 = level0;
    pool01.insert(pool01.end(), level1.begin(), level1.end());
    enumerate_level(pool01, true, level2);

    // hash index over the first example's envs
    t.index.resize(t.envs.size());
    for (size_t id = 0; id < t.exprs.size(); ++id)
        for (int k = 0; k < t.first_example_envs; ++k)
            if (t.values[id][size_t(k)])
                t.index[size_t(k)][t.values[id][size_t(k)]->hash].push_back(int(id));
    return t;
}

// Expressions whose value equals the observed component at `path` in some
// kept joint of every example.
std::vector<int> admitted_exprs(const ExprTable& t, const RefineCtx& ctx, const Path& path,
                                KindId kind, int cap) {
    std::vector<int> result;
    if (t.envs.empty()) return result;
    const Domain& d = ctx.domain;
    // candidates from the first example
    std::vector<int> cands;
    for (int k = 0; k < t.first_example_envs; ++k) {
        auto target = lookup(d, t.envs[size_t(k)].desc_out, path);
        if (!target || !(*target)->is_ground()) continue;
        auto it = t.index[size_t(k)].find((*target)->hash);
        if (it == t.index[size_t(k)].end()) continue;
        for (int id : it->second) {
            if (!d.schema().kind_compatible(kind, t.exprs[size_t(id)]->kind)) continue;
            if (t.values[size_t(id)][size_t(k)] &&
                node_eq(t.values[size_t(id)][size_t(k)], *target))
                cands.push_back(id);
        }
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    int n_examples = int(ctx.joints.size());
    for (int id : cands) {
        bool all = true;
        for (int e = 1; e < n_examples && all; ++e) {
            bool found = false, defined = false;
            for (size_t k = 0; k < t.envs.size(); ++k) {
                if (t.envs[k].example != e) continue;
                auto target = lookup(d, t.envs[k].desc_out, path);
                if (!target) continue;
                defined = true;
                if (t.values[size_t(id)][k] && node_eq(t.values[size_t(id)][k], *target)) {
                    found = true;
                    break;
                }
            }
            all = !defined || found;
        }
        if (all) result.push_back(id);
    }
    std::sort(result.begin(), result.end(), [&](int a, int b) {
        if (t.model_cost[size_t(a)] != t.model_cost[size_t(b)])
            return t.model_cost[size_t(a)] < t.model_cost[size_t(b)];
        return a < b;
    });
    if (int(result.size()) > cap) result.resize(size_t(cap));
    return result;
}

// ---------------------------------------------------------------------------
// Generic refinement enumeration
// ---------------------------------------------------------------------------

// Examples where no kept description defines the path (an alternative took
// the other branch) do not constrain the refinement.
template <class Pred>
bool all_examples_match(const RefineCtx& ctx, Side side, const Path& path, Pred pred) {
    if (ctx.joints.empty()) return false;
    int constrained = 0;
    for (const auto& ej : ctx.joints) {
        bool found = false, defined = false;
        for (const auto& j : ej.kept) {
            const NodePtr& root = side == Side::Input ? j.desc_in : j.desc_out;
            auto sub = lookup(ctx.domain, root, path);
            if (!sub) continue;
            defined = true;
            if (pred(*sub)) {
                found = true;
                break;
            }
        }
        if (defined) {
            ++constrained;
            if (!found) return false;
        }
    }
    return constrained > 0;
}

std::string refinement_label(const Domain& d, const Refinement& r) {
    NodePrinter pr = d.printer();
    std::string target = side_name(r.side);
    if (r.op == Refinement::Op::InsertElem) {
        if (!r.path.empty()) target += "." + path_to_string(r.path);
        target += ".lay[" + std::to_string(r.pos) + "]";  // landing index
    } else if (r.op == Refinement::Op::RemoveElem) {
        target += (r.path.empty() ? "" : "." + path_to_string(r.path));
        return target + ".lay[" + std::to_string(r.pos) + "] removed";
    } else if (!r.path.empty()) {
        target += "." + path_to_string(r.path);
    }
    return target + " <- " + pr(r.node);
}

} // namespace

std::vector<Refinement> enumerate_refinements(const RefineCtx& ctx) {
    const Domain& d = ctx.domain;
    std::vector<Refinement> out;

    // domain-specific proposals (layer insertions, grid-root catalog, token
    // factorizations, Alt wraps)
    d.propose_refinements(ctx, out);

    ExprTable exprs = build_expr_table(ctx);

    for (Side side : {Side::Input, Side::Output}) {
        const NodePtr& root = side == Side::Input ? ctx.model.input : ctx.model.output;
        Path prefix;
        walk_model(d.schema(), root, prefix, [&](const Path& p, const NodePtr& n) {
            // (b) unknown -> pattern / constant, admitted when every example
            // has a kept description matching at this path
            if (n->tag == Tag::Unknown) {
                for (CtorId c : d.schema().kind(n->kind).ctors) {
                    const auto& spec = d.schema().ctor(c);
                    std::vector<NodePtr> args;
                    for (const auto& f : spec.fields) args.push_back(make_unknown(f.kind));
                    NodePtr tpl = make_pat(d.schema(), c, std::move(args));
                    if (all_examples_match(ctx, side, p, [&](const NodePtr& obs) {
                            return match_pattern(d, tpl, obs);
                        }))
                        out.push_back({Refinement::Op::Replace, side, p, tpl, 0, false, ""});
                }
                // constants observed in every example
                std::vector<NodePtr> consts;
                if (!ctx.joints.empty())
                    for (const auto& j : ctx.joints[0].kept) {
                        const NodePtr& r0 = side == Side::Input ? j.desc_in : j.desc_out;
                        auto obs = lookup(d, r0, p);
                        if (!obs || !(*obs)->is_ground()) continue;
                        bool dup = false;
                        for (const auto& c : consts) dup |= node_eq(c, *obs);
                        if (!dup) consts.push_back(*obs);
                    }
                int added = 0;
                for (const auto& c : consts) {
                    if (added >= 3) break;
                    if (all_examples_match(ctx, side, p,
                                           [&](const NodePtr& obs) { return node_eq(obs, c); })) {
                        bool dup = false;
                        for (const auto& r : out)
                            dup |= r.op == Refinement::Op::Replace && r.side == side &&
                                   r.path == p && node_eq(r.node, c);
                        if (!dup) {
                            out.push_back({Refinement::Op::Replace, side, p, c, 0, false, ""});
                            ++added;
                        }
                    }
                }
            }
            // (c) component -> expression, output side only
            if (side == Side::Output && n->tag != Tag::Ref && n->tag != Tag::Apply) {
                for (int id : admitted_exprs(exprs, ctx, p, n->kind, 6)) {
                    const NodePtr& e = exprs.exprs[size_t(id)];
                    if (node_eq(e, n)) continue;
                    out.push_back({Refinement::Op::Replace, side, p, e, 0, false, ""});
                }
            }
        });
    }

    // labels + dedupe, preserving order
    std::vector<Refinement> dedup;
    for (auto& r : out) {
        if (r.label.empty()) r.label = refinement_label(d, r);
        bool dup = false;
        for (const auto& q : dedup)
            dup |= q.op == r.op && q.side == r.side && q.path == r.path && q.pos == r.pos &&
                   ((q.node == nullptr && r.node == nullptr) ||
                    (q.node && r.node && node_eq(q.node, r.node)));
        if (!dup) dedup.push_back(std::move(r));
    }
    return dedup;
}

Bits estimate_gain(const RefineCtx& ctx, const Refinement& r) {
    const Domain& d = ctx.domain;
    Coder coder(d);
    const NodePtr& root = r.side == Side::Input ? ctx.model.input : ctx.model.output;
    const EnvSignature* env = r.side == Side::Output ? &ctx.sig : nullptr;
    Coder::Ctx mctx{true, env};

    if (r.op == Refinement::Op::InsertElem) {
        auto elem_cost = coder.node_dl(r.node, r.node->kind, mctx);
        Bits model_delta = elem_cost ? *elem_cost : kInfiniteDL;
        return (r.est_hint - model_delta);
    }
    if (r.op == Refinement::Op::RemoveElem) return 0;

    auto old_node = lookup(d, root, r.path);
    if (!old_node) return -kInfiniteDL;
    auto old_cost = coder.node_dl(*old_node, (*old_node)->kind, mctx);
    auto new_cost = coder.node_dl(r.node, (*old_node)->kind, mctx);
    Bits model_delta = (new_cost ? *new_cost : kInfiniteDL) - (old_cost ? *old_cost : 0);

    Bits desc_delta = 0;
    for (const auto& ej : ctx.joints) {
        if (ej.kept.empty()) continue;
        const auto& j = ej.kept[0];
        const NodePtr& droot = r.side == Side::Input ? j.desc_in : j.desc_out;
        auto obs = lookup(d, droot, r.path);
        if (!obs) continue;
        auto old_charge = coder.description_dl(*obs, *old_node);
        Bits oc = old_charge ? *old_charge : 0;
        Bits nc = 0;
        if (!r.node->is_ground() && !r.node->is_model_only()) {
            auto new_charge = coder.description_dl(*obs, r.node);
            nc = new_charge ? *new_charge : oc;
        }
        desc_delta += ctx.cfg.alpha * (oc - nc);
    }
    return desc_delta - model_delta;
}

namespace {

// Keeps output-side references bound to the same input components when the
// input layer list shifts. Returns null when a reference would be orphaned.
NodePtr renumber_refs(const Domain& d, const NodePtr& node, const Path& list_path,
                      const std::string& list_field, int pos, int delta, bool* orphaned) {
    if (node->tag == Tag::Ref) {
        const Path& p = node->ref;
        if (p.size() > list_path.size()) {
            bool prefix = true;
            for (size_t i = 0; i < list_path.size(); ++i) prefix &= p[i] == list_path[i];
            const PathSel& sel = p[list_path.size()];
            if (prefix && sel.field == list_field && sel.index >= 0) {
                if (delta < 0 && sel.index == pos) {
                    *orphaned = true;
                    return node;
                }
                if (sel.index >= pos + (delta < 0 ? 1 : 0)) {
                    Path q = p;
                    q[list_path.size()].index += delta;
                    return make_ref(node->kind, std::move(q));
                }
            }
        }
        return node;
    }
    if (node->args.empty()) return node;
    std::vector<NodePtr> args;
    bool changed = false;
    for (const auto& a : node->args) {
        NodePtr na = renumber_refs(d, a, list_path, list_field, pos, delta, orphaned);
        changed |= na != a;
        args.push_back(std::move(na));
    }
    if (!changed) return node;
    if (node->tag == Tag::Pat) return make_pat(d.schema(), node->ctor, std::move(args));
    return make_apply(node->kind, node->fn, std::move(args));
}

} // namespace

Result<TaskModel> apply_refinement(const Domain& d, const TaskModel& m, const Refinement& r) {
    const NodePtr& root = r.side == Side::Input ? m.input : m.output;
    Result<NodePtr> edited = Result<NodePtr>::fail("bad op");
    switch (r.op) {
        case Refinement::Op::Replace:
            edited = replace_at(d.schema(), root, r.path, [&](const NodePtr&) { return r.node; });
            break;
        case Refinement::Op::InsertElem:
            edited = insert_list_elem(d.schema(), root, r.path, r.pos, r.node);
            break;
        case Refinement::Op::RemoveElem:
            edited = remove_list_elem(d.schema(), root, r.path, r.pos);
            break;
    }
    if (!edited) return Result<TaskModel>::fail(edited.error);
    TaskModel out = m;
    (r.side == Side::Input ? out.input : out.output) = *edited;
    // input list edits shift layer indices; references in the output model
    // follow the component they pointed at
    if (r.side == Side::Input && r.op != Refinement::Op::Replace) {
        auto owner = lookup(d, root, r.path);
        if (owner && (*owner)->tag == Tag::Pat) {
            const auto& spec = d.schema().ctor((*owner)->ctor);
            if (spec.variadic) {
                bool orphaned = false;
                out.output = renumber_refs(d, out.output, r.path, spec.list_field, r.pos,
                                           r.op == Refinement::Op::InsertElem ? 1 : -1, &orphaned);
                if (orphaned)
                    return Result<TaskModel>::fail("reference into the removed element");
            }
        }
    }
    return Result<TaskModel>::ok(out);
}

namespace {

struct EvalOut {
    bool valid = false;
    DLReport rep;
    double lhat = 2.0;
    std::vector<ExampleJoints> joints;
};

EvalOut evaluate_model(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                       const LearnConfig& cfg, const DLReport* baseline) {
    EvalOut out;
    Coder coder(d);
    auto mi = coder.model_dl(m.input, nullptr);
    EnvSignature sig = signature_of_model(d, m.input);
    auto mo = coder.model_dl(m.output, &sig);
    if (!mi || !mo) return out;
    out.rep.alpha = cfg.alpha;
    out.rep.model_in = *mi;
    out.rep.model_out = *mo;
    for (const auto& ex : train) {
        auto joints = describe(d, m, ex, cfg.parse_limit, std::max(cfg.keep_descriptions, 1));
        if (joints.empty()) return out;
        out.rep.data_in += cfg.alpha * joints[0].bits_in;
        out.rep.data_out += cfg.alpha * joints[0].bits_out;
        out.joints.push_back({std::move(joints)});
    }
    if (baseline) {
        auto nl = normalized_dl(out.rep, *baseline);
        if (!nl) return out;
        out.lhat = *nl;
    }
    out.valid = true;
    return out;
}

struct BeamState {
    TaskModel model;
    EvalOut eval;
    std::vector<TraceStep> steps;
    uint64_t model_hash() const {
        return hash_combine(model.input->hash, model.output->hash);
    }
};

} // namespace

LearnResult learn(const Domain& d, const std::vector<Example>& train, const LearnConfig& cfg) {
    auto t0 = Clock::now();
    LearnResult res;
    TaskModel init{d.initial_model(train, false), d.initial_model(train, true)};

    EvalOut ev0 = evaluate_model(d, init, train, cfg, nullptr);
    res.baseline = ev0.rep;
    res.model = init;
    res.trace.steps.push_back({0, "(initial model)", 2.0});
    if (!ev0.valid) {
        res.trace.stop_reason = "no-improvement";
        res.seconds = seconds_since(t0);
        return res;
    }
    ev0.lhat = 2.0;

    std::vector<BeamState> frontier{{init, std::move(ev0), {}}};
    BeamState best = frontier[0];
    std::string stop_reason = "no-improvement";
    int width = std::max(1, cfg.beam_width);
    int step = 0;

    while (true) {
        if (seconds_since(t0) > cfg.learn_timeout) {
            stop_reason = "timeout";
            break;
        }
        ++step;
        struct Child {
            BeamState state;
            double parent_lhat;
            int order;
        };
        std::vector<Child> children;
        std::vector<uint64_t> seen_models;
        for (auto& st : frontier)
            seen_models.push_back(st.model_hash());

        int order = 0;
        bool evaluated_deferred = false;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& st : frontier) {
                EnvSignature sig = signature_of_model(d, st.model.input);
                RefineCtx ctx{d, st.model, train, st.eval.joints, sig, cfg};
                auto cands = enumerate_refinements(ctx);
                // pass 0: regular candidates; pass 1: deferred (Alt) ones
                std::vector<std::pair<Bits, int>> ranked;
                for (size_t i = 0; i < cands.size(); ++i) {
                    bool want = cfg.defer_alt ? (cands[i].deferred == (pass == 1)) : (pass == 0);
                    if (!want) continue;
                    ranked.push_back({estimate_gain(ctx, cands[i]), int(i)});
                }
                std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
                    if (a.first != b.first) return a.first > b.first;
                    const Refinement &ra = cands[size_t(a.second)], &rb = cands[size_t(b.second)];
                    if (ra.side != rb.side) return ra.side == Side::Input;
                    auto pa = path_to_string(ra.path), pb = path_to_string(rb.path);
                    if (pa != pb) return pa < pb;
                    return a.second < b.second;  // stable enumeration order
                });
                if (int(ranked.size()) > cfg.eval_top) ranked.resize(size_t(cfg.eval_top));
                for (auto& [gain, idx] : ranked) {
                    const Refinement& r = cands[size_t(idx)];
                    auto refined = apply_refinement(d, st.model, r);
                    if (!refined) continue;
                    uint64_t h = hash_combine((*refined).input->hash, (*refined).output->hash);
                    bool dup = false;
                    for (uint64_t sh : seen_models) dup |= sh == h;
                    if (dup) continue;
                    seen_models.push_back(h);
                    EvalOut ev = evaluate_model(d, *refined, train, cfg, &res.baseline);
                    if (!ev.valid) continue;
                    if (ev.lhat >= st.eval.lhat - kEps) continue;  // must strictly improve
                    Child ch{{*refined, std::move(ev), st.steps}, st.eval.lhat, order++};
                    ch.state.steps.push_back({step, r.label, ch.state.eval.lhat});
                    children.push_back(std::move(ch));
                }
                if (pass == 1) evaluated_deferred = true;
            }
            if (!children.empty() || !cfg.defer_alt) break;
            if (evaluated_deferred) break;
        }

        if (children.empty()) break;
        std::sort(children.begin(), children.end(), [](const Child& a, const Child& b) {
            if (a.state.eval.lhat != b.state.eval.lhat) return a.state.eval.lhat < b.state.eval.lhat;
            return a.order < b.order;
        });
        frontier.clear();
        for (auto& ch : children) {
            if (int(frontier.size()) >= width) break;
            frontier.push_back(std::move(ch.state));
        }
        if (frontier[0].eval.lhat < best.eval.lhat - kEps) best = frontier[0];
    }

    res.model = best.model;
    res.report = best.eval.rep;
    res.lhat = best.eval.lhat;
    res.joints = best.eval.joints;
    for (const auto& s : best.steps) res.trace.steps.push_back(s);
    res.trace.stop_reason = stop_reason;
    res.seconds = seconds_since(t0);
    return res;
}

namespace {

bool predictions_correct(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                         const LearnConfig& cfg) {
    for (const auto& ex : train) {
        auto preds = predict(d, m, ex.input, cfg.parse_limit, 1);
        if (preds.empty() || !Domain::datum_eq(preds[0].datum, ex.output)) return false;
    }
    return true;
}

} // namespace

PruneResult prune(const Domain& d, const TaskModel& m, const std::vector<Example>& train,
                  const LearnConfig& cfg) {
    auto t0 = Clock::now();
    PruneResult res{m, {}, 0};
    if (!predictions_correct(d, m, train, cfg)) {
        res.seconds = seconds_since(t0);
        return res;
    }
    Bits cur_dl = prediction_dl(d, res.model, train, cfg.alpha, cfg.parse_limit);
    int step = 0;
    while (seconds_since(t0) < cfg.prune_timeout) {
        // inverse refinements: input-side constructor/value -> unknown, or
        // layer removal; output components stay ground for prediction
        std::vector<Refinement> cands;
        Path prefix;
        walk_model(d.schema(), res.model.input, prefix, [&](const Path& p, const NodePtr& n) {
            if ((n->tag == Tag::Pat || n->tag == Tag::Val) && d.unknown_allowed(n->kind) &&
                !p.empty())
                cands.push_back({Refinement::Op::Replace, Side::Input, p, make_unknown(n->kind), 0,
                                 false, ""});
            if (n->tag == Tag::Pat && d.schema().ctor(n->ctor).variadic) {
                int len = n->list_len(d.schema());
                for (int k = 0; k < len; ++k)
                    cands.push_back({Refinement::Op::RemoveElem, Side::Input, p, nullptr, k, false, ""});
            }
        });
        std::sort(cands.begin(), cands.end(), [](const Refinement& a, const Refinement& b) {
            auto pa = path_to_string(a.path), pb = path_to_string(b.path);
            if (pa != pb) return pa < pb;
            return a.pos < b.pos;
        });

        bool applied = false;
        Bits best_dl = kInfiniteDL;
        Refinement best_r;
        TaskModel best_m;
        for (const auto& r : cands) {
            if (seconds_since(t0) > cfg.prune_timeout) break;
            auto cand = apply_refinement(d, res.model, r);
            if (!cand) continue;
            if (!predictions_correct(d, *cand, train, cfg)) continue;
            Bits dl = prediction_dl(d, *cand, train, cfg.alpha, cfg.parse_limit);
            if (dl > cur_dl + kEps) continue;  // prediction DL must not increase
            if (dl < best_dl - kEps) {
                best_dl = dl;
                best_r = r;
                best_m = *cand;
                applied = true;
            }
        }
        if (!applied) break;
        res.model = best_m;
        cur_dl = best_dl;
        best_r.label = refinement_label(d, best_r);
        res.steps.push_back({++step, best_r.label, double(best_dl)});
    }
    res.seconds = seconds_since(t0);
    return res;
}

} // namespace mdli
