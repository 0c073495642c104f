#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mdli {

using KindId = uint8_t;
using CtorId = uint16_t;
using FuncId = uint16_t;

struct FieldSpec {
    std::string name;
    KindId kind;
};

// A pattern constructor: typed fields, optionally followed by a homogeneous
// trailing list ("lay" for Layers). `weight` shapes the coding distribution
// among a kind's alternatives.
struct CtorSpec {
    std::string name;
    KindId result = 0;
    std::vector<FieldSpec> fields;
    bool variadic = false;
    std::string list_field;
    KindId list_kind = 0;
    double weight = 1.0;
};

struct KindSpec {
    std::string name;
    std::vector<CtorId> ctors;
    bool has_value = false;    // admits a primitive constant
    double value_weight = 1.0; // coding weight of the constant alternative
};

// Typed vocabulary of one domain: its kinds and pattern constructors.
struct Schema {
    std::vector<KindSpec> kinds;
    std::vector<CtorSpec> ctors;
    // (super, sub): a `sub` node is accepted where `super` is expected.
    std::vector<std::pair<KindId, KindId>> subkinds;

    KindId add_kind(const std::string& name, bool has_value = false, double value_weight = 1.0) {
        kinds.push_back({name, {}, has_value, value_weight});
        return KindId(kinds.size() - 1);
    }
    CtorId add_ctor(CtorSpec spec) {
        CtorId id = CtorId(ctors.size());
        kinds[spec.result].ctors.push_back(id);
        ctors.push_back(std::move(spec));
        return id;
    }
    const KindSpec& kind(KindId k) const { return kinds[k]; }
    const CtorSpec& ctor(CtorId c) const { return ctors[c]; }

    bool kind_compatible(KindId expected, KindId actual) const {
        if (expected == actual) return true;
        for (auto& [sup, sub] : subkinds)
            if (sup == expected && sub == actual) return true;
        return false;
    }

    int field_index(CtorId c, const std::string& name) const {
        const auto& spec = ctors[c];
        for (size_t i = 0; i < spec.fields.size(); ++i)
            if (spec.fields[i].name == name) return int(i);
        return -1;
    }
};

} // namespace mdli
