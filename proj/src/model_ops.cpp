#include "mdli/model_ops.hpp"

namespace mdli {

NodePtr child_at(const Schema& s, const NodePtr& n, const PathSel& sel) {
    if (n->tag != Tag::Pat) return nullptr;
    const auto& spec = s.ctor(n->ctor);
    if (sel.index >= 0) {
        if (!spec.variadic || sel.field != spec.list_field) return nullptr;
        size_t idx = spec.fields.size() + size_t(sel.index);
        if (idx >= n->args.size()) return nullptr;
        return n->args[idx];
    }
    int fi = s.field_index(n->ctor, sel.field);
    if (fi < 0) return nullptr;
    return n->args[size_t(fi)];
}

Result<NodePtr> lookup(const Domain& d, const NodePtr& desc, const Path& p) {
    NodePtr cur = desc;
    for (const auto& sel : p) {
        NodePtr next = child_at(d.schema(), cur, sel);
        if (!next && sel.index < 0) {
            auto imp = d.implicit_component(cur, sel.field);
            if (imp) next = *imp;
        }
        if (!next)
            return Result<NodePtr>::fail("path not found: " + path_to_string(p));
        cur = next;
    }
    return Result<NodePtr>::ok(cur);
}

Result<NodePtr> resolve(const Domain& d, const NodePtr& model, const NodePtr& env) {
    switch (model->tag) {
        case Tag::Unknown:
        case Tag::Val:
            return Result<NodePtr>::ok(model);
        case Tag::Ref: {
            if (!env) return Result<NodePtr>::fail("dangling reference: !" + path_to_string(model->ref));
            auto sub = lookup(d, env, model->ref);
            if (!sub)
                return Result<NodePtr>::fail("dangling reference: !" + path_to_string(model->ref));
            if (!(*sub)->is_ground())
                return Result<NodePtr>::fail("reference to non-ground component");
            return sub;
        }
        case Tag::Apply: {
            std::vector<NodePtr> args;
            args.reserve(model->args.size());
            for (const auto& a : model->args) {
                auto r = resolve(d, a, env);
                if (!r) return r;
                if (!(*r)->is_ground())
                    return Result<NodePtr>::fail("function argument not ground");
                args.push_back(*r);
            }
            return d.functions().eval(model->fn, args);
        }
        case Tag::Pat: {
            auto special = d.resolve_special(model, env);
            if (special) return special;
            if (!special.error.empty()) return special;  // genuine failure
            bool changed = false;
            std::vector<NodePtr> args;
            args.reserve(model->args.size());
            for (const auto& a : model->args) {
                auto r = resolve(d, a, env);
                if (!r) return r;
                changed |= (*r != a);
                args.push_back(*r);
            }
            if (!changed) return Result<NodePtr>::ok(model);
            return Result<NodePtr>::ok(make_pat(d.schema(), model->ctor, std::move(args)));
        }
    }
    return Result<NodePtr>::fail("bad node");
}

bool match_pattern(const Domain& d, const NodePtr& pattern, const NodePtr& desc) {
    const Schema& s = d.schema();
    if (pattern->tag == Tag::Unknown)
        return s.kind_compatible(pattern->kind, desc->kind);
    if (pattern->tag == Tag::Ref || pattern->tag == Tag::Apply) return false;
    if (pattern->tag == Tag::Val)
        return (desc->tag == Tag::Val && value_eq(pattern->val, desc->val)) ||
               d.pattern_admits(pattern, desc);
    // Pat
    if (desc->tag != Tag::Pat || desc->ctor != pattern->ctor ||
        desc->args.size() != pattern->args.size())
        return d.pattern_admits(pattern, desc);
    for (size_t i = 0; i < pattern->args.size(); ++i)
        if (!match_pattern(d, pattern->args[i], desc->args[i])) return false;
    return true;
}

int EnvSignature::count_compatible(const Schema& s, KindId k) const {
    int n = 0;
    for (const auto& c : comps)
        if (s.kind_compatible(k, c.kind)) ++n;
    return n;
}

static void signature_walk(const Domain& d, const NodePtr& n, Path& prefix, bool is_root,
                           EnvSignature& out) {
    if (d.ref_kind_allowed(n->kind)) out.comps.push_back({prefix, n->kind});
    std::vector<std::pair<std::string, KindId>> imps;
    d.implicit_signature(n, is_root, imps);
    for (auto& [field, kind] : imps) {
        if (!d.ref_kind_allowed(kind)) continue;
        prefix.push_back({field, -1});
        out.comps.push_back({prefix, kind});
        prefix.pop_back();
    }
    if (n->tag != Tag::Pat) return;
    const auto& spec = d.schema().ctor(n->ctor);
    for (size_t i = 0; i < n->args.size(); ++i) {
        PathSel sel;
        if (i < spec.fields.size()) {
            sel.field = spec.fields[i].name;
        } else {
            sel.field = spec.list_field;
            sel.index = int(i - spec.fields.size());
        }
        prefix.push_back(sel);
        signature_walk(d, n->args[i], prefix, false, out);
        prefix.pop_back();
    }
}

EnvSignature signature_of_model(const Domain& d, const NodePtr& model) {
    EnvSignature sig;
    Path prefix;
    signature_walk(d, model, prefix, true, sig);
    return sig;
}

static void components_walk(const Domain& d, const NodePtr& n, Path& prefix, bool is_root,
                            EnvComponents& out) {
    if (d.ref_kind_allowed(n->kind)) out.comps.push_back({prefix, n});
    std::vector<std::pair<std::string, KindId>> imps;
    d.implicit_signature(n, is_root, imps);
    for (auto& [field, kind] : imps) {
        if (!d.ref_kind_allowed(kind)) continue;
        auto imp = d.implicit_component(n, field);
        if (!imp) continue;
        prefix.push_back({field, -1});
        out.comps.push_back({prefix, *imp});
        prefix.pop_back();
    }
    if (n->tag != Tag::Pat) return;
    const auto& spec = d.schema().ctor(n->ctor);
    for (size_t i = 0; i < n->args.size(); ++i) {
        PathSel sel;
        if (i < spec.fields.size()) {
            sel.field = spec.fields[i].name;
        } else {
            sel.field = spec.list_field;
            sel.index = int(i - spec.fields.size());
        }
        prefix.push_back(sel);
        components_walk(d, n->args[i], prefix, false, out);
        prefix.pop_back();
    }
}

EnvComponents components_of(const Domain& d, const NodePtr& desc) {
    EnvComponents out;
    Path prefix;
    components_walk(d, desc, prefix, true, out);
    return out;
}

void walk_model(const Schema& s, const NodePtr& n, Path& prefix,
                const std::function<void(const Path&, const NodePtr&)>& visit) {
    visit(prefix, n);
    if (n->tag != Tag::Pat) return;
    const auto& spec = s.ctor(n->ctor);
    for (size_t i = 0; i < n->args.size(); ++i) {
        PathSel sel;
        if (i < spec.fields.size()) {
            sel.field = spec.fields[i].name;
        } else {
            sel.field = spec.list_field;
            sel.index = int(i - spec.fields.size());
        }
        prefix.push_back(sel);
        walk_model(s, n->args[i], prefix, visit);
        prefix.pop_back();
    }
}

// Default implicit components: none.
Result<NodePtr> Domain::implicit_component(const NodePtr&, const std::string& field) const {
    return Result<NodePtr>::fail("path not found: " + field);
}

void Domain::implicit_signature(const NodePtr&, bool,
                                std::vector<std::pair<std::string, KindId>>&) const {}

} // namespace mdli
