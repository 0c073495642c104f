#pragma once

#include "mdli/domain.hpp"

namespace mdli {

// Typed vocabulary of the string-row domain. Tokens play the role of
// objects; cells factor into left ++ token ++ right.
struct StringSchema {
    Schema schema;

    KindId kRow, kCell, kToken, kRegex, kCond, kInt;
    CtorId cRow, cNil, cFactor, cAltCell, cAltCellThen, cAltCellElse;
    CtorId cRegexTok, cAltTok, cAltTokThen, cAltTokElse;
    CtorId cIdent, cLetters, cDecimal, cDigits, cSpaces;

    StringSchema();

    // all string literals carry the token kind, so values compare equal
    // across cell and token positions
    NodePtr token_lit(std::string s) const { return make_val(kToken, std::move(s)); }
    NodePtr cond_val(bool b) const { return make_val(kCond, b); }
    NodePtr nil() const { return make_pat(schema, cNil, {}); }
    NodePtr factor(NodePtr l, NodePtr t, NodePtr r) const {
        return make_pat(schema, cFactor, {std::move(l), std::move(t), std::move(r)});
    }
    NodePtr regex_tok(CtorId tag) const {
        return make_pat(schema, cRegexTok, {make_pat(schema, tag, {})});
    }
    NodePtr alt_cell(NodePtr c, NodePtr t, NodePtr e) const {
        return make_pat(schema, cAltCell, {std::move(c), std::move(t), std::move(e)});
    }
    NodePtr alt_tok(NodePtr c, NodePtr t, NodePtr e) const {
        return make_pat(schema, cAltTok, {std::move(c), std::move(t), std::move(e)});
    }
    // ground alternative: the condition value and the branch it selects
    NodePtr alt_taken_cell(bool cond, NodePtr taken) const {
        return make_pat(schema, cond ? cAltCellThen : cAltCellElse,
                        {cond_val(cond), std::move(taken)});
    }
    NodePtr alt_taken_tok(bool cond, NodePtr taken) const {
        return make_pat(schema, cond ? cAltTokThen : cAltTokElse,
                        {cond_val(cond), std::move(taken)});
    }
    NodePtr row(std::vector<NodePtr> cells) const {
        return make_pat(schema, cRow, std::move(cells));
    }

    NodePrinter printer() const;
};

const StringSchema& string_schema();

// Row-of-strings instantiation of the engine (FlashFill-style tasks). The
// search and coding modules are reused unmodified; this registers only
// types, parsing, generation and functions.
class StringsDomain final : public Domain {
  public:
    std::string name() const override { return "string"; }
    const Schema& schema() const override { return string_schema().schema; }
    const FunctionRegistry& functions() const override;
    KindId root_kind() const override { return string_schema().kRow; }
    NodePtr initial_model(const std::vector<Example>& train, bool output_side) const override;

    Bits value_dl(const Value& v, KindId kind) const override;
    std::vector<ParseResult> parse(const NodePtr& model, const NodePtr& env, const Datum& datum,
                                   int limit) const override;
    std::vector<GenResult> generate(const NodePtr& model, const NodePtr& env, int limit,
                                    Rng* rng) const override;
    Result<Datum> render_datum(const NodePtr& desc) const override;
    Bits residual_dl(const Datum& datum, const NodePtr& desc) const override;
    Bits datum_literal_dl(const Datum& datum) const override;
    Result<NodePtr> resolve_special(const NodePtr& model, const NodePtr& env) const override;
    bool pattern_admits(const NodePtr& pattern, const NodePtr& desc) const override;
    Result<Bits> admitted_desc_dl(const NodePtr& pattern, const NodePtr& desc) const override;
    bool ref_kind_allowed(KindId kind) const override;
    void propose_refinements(const RefineCtx& ctx, std::vector<Refinement>& out) const override;
    std::vector<NodePtr> expression_const_args(const RefineCtx& ctx) const override;
    bool unknown_allowed(KindId) const override { return false; }
    NodePrinter printer() const override {
        NodePrinter p = string_schema().printer();
        p.func_name = [this](FuncId f) { return functions()[f].name; };
        return p;
    }
    std::string datum_to_text(const Datum& d) const override;
};

} // namespace mdli
