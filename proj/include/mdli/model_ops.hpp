#pragma once

#include "mdli/domain.hpp"

namespace mdli {

// Child of a Pat node addressed by one selector, or null.
NodePtr child_at(const Schema& s, const NodePtr& n, const PathSel& sel);

// Sub-description at the end of a path, including implicit components.
Result<NodePtr> lookup(const Domain& d, const NodePtr& desc, const Path& p);

// Reduced model: references replaced by the sub-description at their path,
// ground function applications evaluated. The result contains only
// Unknown/Val/Pat nodes. env may be null for input models.
Result<NodePtr> resolve(const Domain& d, const NodePtr& model, const NodePtr& env);

// True iff `desc` is an instance of `pattern` (unknowns match anything of a
// compatible kind, constructors and constants must agree recursively).
bool match_pattern(const Domain& d, const NodePtr& pattern, const NodePtr& desc);

// Reference signature of a model: the component paths and kinds its
// descriptions will expose, usable for coding output-side references.
struct EnvSignature {
    struct Comp {
        Path path;
        KindId kind;
    };
    std::vector<Comp> comps;
    int count_compatible(const Schema& s, KindId k) const;
};

EnvSignature signature_of_model(const Domain& d, const NodePtr& model);

// All components of a ground description: (path, sub-description) pairs,
// including implicit ones. Used for expression enumeration.
struct EnvComponents {
    struct Comp {
        Path path;
        NodePtr desc;
    };
    std::vector<Comp> comps;
};

EnvComponents components_of(const Domain& d, const NodePtr& desc);

// Paths of every node in a model, with the node itself (pre-order).
void walk_model(const Schema& s, const NodePtr& n, Path& prefix,
                const std::function<void(const Path&, const NodePtr&)>& visit);

} // namespace mdli
