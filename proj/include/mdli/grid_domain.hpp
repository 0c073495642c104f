#pragma once

#include "mdli/domain.hpp"
#include "mdli/grid_ops.hpp"

namespace mdli {

// Grid instantiation of the engine: object-centric parsing of ARC grids as
// stacks of single-colored layers over a background, plus tilings.
class GridDomain final : public Domain {
  public:
    std::string name() const override { return "grid"; }
    const Schema& schema() const override { return grid_schema().schema; }
    const FunctionRegistry& functions() const override { return grid_functions(); }
    KindId root_kind() const override { return grid_schema().kGrid; }
    NodePtr initial_model(const std::vector<Example>&, bool) const override {
        return make_unknown(grid_schema().kGrid);
    }

    Bits value_dl(const Value& v, KindId kind) const override;
    std::vector<ParseResult> parse(const NodePtr& model, const NodePtr& env, const Datum& datum,
                                   int limit) const override;
    std::vector<GenResult> generate(const NodePtr& model, const NodePtr& env, int limit,
                                    Rng* rng) const override;
    Result<Datum> render_datum(const NodePtr& desc) const override;
    Bits residual_dl(const Datum& datum, const NodePtr& desc) const override;
    Bits datum_literal_dl(const Datum& datum) const override {
        if (!std::holds_alternative<Grid>(datum)) return 0;
        return value_dl(Value{std::get<Grid>(datum)}, grid_schema().kRawGrid);
    }
    Result<NodePtr> implicit_component(const NodePtr& desc, const std::string& field) const override;
    void implicit_signature(const NodePtr& model_node, bool is_root,
                            std::vector<std::pair<std::string, KindId>>& out) const override;
    void propose_refinements(const RefineCtx& ctx, std::vector<Refinement>& out) const override;
    std::vector<NodePtr> expression_const_args(const RefineCtx&) const override;
    bool unknown_allowed(KindId kind) const override;
    NodePrinter printer() const override {
        NodePrinter p = grid_schema().printer();
        p.func_name = [](FuncId f) { return grid_functions()[f].name; };
        return p;
    }
    std::string datum_to_text(const Datum& d) const override;
};

} // namespace mdli
