#include "mdli/functions.hpp"

#include <algorithm>

namespace mdli {

std::vector<FuncId> FunctionRegistry::by_result(KindId k) const {
    std::vector<FuncId> out;
    for (size_t i = 0; i < fns.size(); ++i)
        if (schema->kind_compatible(k, fns[i].result)) out.push_back(FuncId(i));
    return out;
}

Result<FuncId> FunctionRegistry::find(const std::string& name,
                                      std::initializer_list<KindId> args) const {
    for (size_t i = 0; i < fns.size(); ++i) {
        if (fns[i].name != name || fns[i].args.size() != args.size()) continue;
        bool ok = true;
        size_t a = 0;
        for (KindId k : args) ok &= fns[i].args[a++] == k;
        if (ok) return Result<FuncId>::ok(FuncId(i));
    }
    return Result<FuncId>::fail("no function " + name + " with these argument kinds");
}

std::vector<std::string> FunctionRegistry::reference_names() const {
    std::vector<std::string> names;
    for (const auto& f : fns)
        if (f.reference_set) names.push_back(f.name);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

Result<NodePtr> FunctionRegistry::eval(FuncId id, std::span<const NodePtr> args) const {
    const auto& spec = fns[id];
    if (args.size() != spec.args.size())
        return Result<NodePtr>::fail(spec.name + ": arity mismatch");
    for (size_t i = 0; i < args.size(); ++i) {
        if (!schema->kind_compatible(spec.args[i], args[i]->kind))
            return Result<NodePtr>::fail(spec.name + ": argument kind mismatch");
        if (!args[i]->is_ground())
            return Result<NodePtr>::fail(spec.name + ": argument not ground");
    }
    return spec.impl(args);
}

} // namespace mdli
