#pragma once

#include <functional>
#include <span>

#include "mdli/node.hpp"

namespace mdli {

struct FuncSpec {
    std::string name;
    std::vector<KindId> args;
    KindId result;
    std::function<Result<NodePtr>(std::span<const NodePtr>)> impl;
    bool reference_set = true;  // part of the named default configuration
};

// Data-driven registry of primitive functions. Overloads are separate
// entries sharing a display name.
struct FunctionRegistry {
    const Schema* schema = nullptr;
    std::vector<FuncSpec> fns;

    FuncId add(FuncSpec f) {
        fns.push_back(std::move(f));
        return FuncId(fns.size() - 1);
    }
    const FuncSpec& operator[](FuncId id) const { return fns[id]; }
    size_t size() const { return fns.size(); }

    // Entries whose result kind is accepted at a hole of kind `k`.
    std::vector<FuncId> by_result(KindId k) const;
    // Entry with this display name and exact argument kinds.
    Result<FuncId> find(const std::string& name, std::initializer_list<KindId> args) const;
    // Distinct display names in the reference configuration.
    std::vector<std::string> reference_names() const;

    // Arity/kind-checked evaluation on ground argument descriptions.
    Result<NodePtr> eval(FuncId id, std::span<const NodePtr> args) const;
};

// The grid-domain registry (Table-2 families: arithmetic, geometry, colors
// and masks). The reference configuration has exactly 30 primitive names.
const FunctionRegistry& grid_functions();

} // namespace mdli
