#pragma once

#include <variant>

#include "mdli/functions.hpp"
#include "mdli/node.hpp"

namespace mdli {

// A task datum: an ARC grid or a row of strings.
using Datum = std::variant<Grid, Row>;

struct Example {
    Datum input;
    Datum output;
};

struct ParseResult {
    int rank = 0;     // 1-based, gapless
    NodePtr desc;     // fully grounded description
    Bits dl = 0;      // L(pi | M, env) + L(datum | pi), the ranking key
};

struct GenResult {
    int rank = 0;
    NodePtr desc;
    Datum datum;
};

struct Refinement;   // search.hpp
struct RefineCtx;    // search.hpp

// One instantiation of the engine: typed vocabulary, parsing, generation,
// value coding and refinement proposals. The search and coding modules only
// see this interface.
class Domain {
  public:
    virtual ~Domain() = default;

    virtual std::string name() const = 0;
    virtual const Schema& schema() const = 0;
    virtual const FunctionRegistry& functions() const = 0;
    virtual KindId root_kind() const = 0;
    virtual NodePtr initial_model(const std::vector<Example>& train, bool output_side) const = 0;

    // Coding cost of a primitive constant of the given kind.
    virtual Bits value_dl(const Value& v, KindId kind) const = 0;

    // Multi-valued parsing: groundings of resolve(model, env) against the
    // datum, at most `limit`, ranked by dl ascending.
    virtual std::vector<ParseResult> parse(const NodePtr& model, const NodePtr& env,
                                           const Datum& datum, int limit) const = 0;

    // Multi-valued generation: deterministic default grounding first; `rng`,
    // when given, drives random groundings after the defaults.
    virtual std::vector<GenResult> generate(const NodePtr& model, const NodePtr& env,
                                            int limit, Rng* rng) const = 0;

    virtual Result<Datum> render_datum(const NodePtr& desc) const = 0;

    // L(datum | pi): cost of the datum given the description, 0 iff exact.
    virtual Bits residual_dl(const Datum& datum, const NodePtr& desc) const = 0;

    // Literal coding cost of a datum, the fallback when no description exists.
    virtual Bits datum_literal_dl(const Datum& datum) const = 0;

    // Derived components of a ground description ("grid" of an object,
    // "size" of a Point). Fails when the field is not derivable.
    virtual Result<NodePtr> implicit_component(const NodePtr& desc, const std::string& field) const;

    // Derived components visible in a model's reference signature.
    virtual void implicit_signature(const NodePtr& model_node, bool is_root,
                                    std::vector<std::pair<std::string, KindId>>& out) const;

    // Extension point for matching beyond structural equality (a Regex token
    // model admitting its matched text).
    virtual bool pattern_admits(const NodePtr& /*pattern*/, const NodePtr& /*desc*/) const {
        return false;
    }

    // Grounding cost of a description admitted through pattern_admits.
    virtual Result<Bits> admitted_desc_dl(const NodePtr& /*pattern*/, const NodePtr& /*desc*/) const {
        return Result<Bits>::fail("description is not an instance of the model");
    }

    // Domain-specific refinement proposals (layer insertions, grid-root
    // patterns, token factorizations, Alt wraps).
    virtual void propose_refinements(const RefineCtx& ctx, std::vector<Refinement>& out) const = 0;

    // Constant nodes usable as expression arguments (small int factors,
    // observed token strings).
    virtual std::vector<NodePtr> expression_const_args(const RefineCtx&) const { return {}; }

    // Kinds a reference may point at (the strings domain restricts
    // references to tokens and conditions).
    virtual bool ref_kind_allowed(KindId) const { return true; }

    // Domain-specific reduction step applied before the generic one; an
    // unset result falls through (alternatives reduce to their taken branch
    // once the condition is ground).
    virtual Result<NodePtr> resolve_special(const NodePtr&, const NodePtr&) const {
        return Result<NodePtr>::fail("");
    }

    // Kinds where a learned model may carry an unknown.
    virtual bool unknown_allowed(KindId kind) const = 0;

    virtual NodePrinter printer() const = 0;

    virtual std::string datum_to_text(const Datum& d) const = 0;

    static bool datum_eq(const Datum& a, const Datum& b) { return a == b; }
};

const Domain& get_grid_domain();
const Domain& get_strings_domain();

} // namespace mdli
