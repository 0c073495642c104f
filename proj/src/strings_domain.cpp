#include "mdli/strings_domain.hpp"

#include <algorithm>
#include <cmath>

#include "mdli/coding.hpp"
#include "mdli/search.hpp"

namespace mdli {

namespace {

const StringSchema& ss() { return string_schema(); }

constexpr int kCellCandCap = 24;
constexpr int kRowComboCap = 128;
constexpr double kCharBits = 6.584962500721156;  // log2(96), printable ASCII

bool is_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident(char c) { return is_letter(c) || is_digit(c) || c == '_'; }
bool is_space(char c) { return c == ' ' || c == '\t'; }

struct RegexClass {
    CtorId tag;
    double char_bits;  // per-char class coding
};

double class_bits(CtorId tag) {
    const auto& S = ss();
    if (tag == S.cDigits) return std::log2(10.0);
    if (tag == S.cLetters) return std::log2(52.0);
    if (tag == S.cSpaces) return 1.0;  // space or tab
    if (tag == S.cDecimal) return std::log2(11.0);
    if (tag == S.cIdent) return std::log2(63.0);
    return kCharBits;
}

// Fixed character-class semantics of the regex tags.
bool full_match(CtorId tag, const std::string& s) {
    const auto& S = ss();
    if (s.empty()) return false;
    if (tag == S.cDigits) {
        for (char c : s)
            if (!is_digit(c)) return false;
        return true;
    }
    if (tag == S.cLetters) {
        for (char c : s)
            if (!is_letter(c)) return false;
        return true;
    }
    if (tag == S.cSpaces) {
        for (char c : s)
            if (!is_space(c)) return false;
        return true;
    }
    if (tag == S.cIdent) {
        if (is_digit(s[0])) return false;
        for (char c : s)
            if (!is_ident(c)) return false;
        return true;
    }
    if (tag == S.cDecimal) {
        size_t dot = s.find('.');
        if (dot == std::string::npos) return full_match(S.cDigits, s);
        if (dot == 0 || dot + 1 >= s.size()) return false;
        return full_match(S.cDigits, s.substr(0, dot)) &&
               full_match(S.cDigits, s.substr(dot + 1));
    }
    return false;
}

// Maximal matches of a regex tag, as (start, length) pairs in scan order.
std::vector<std::pair<int, int>> regex_matches(CtorId tag, const std::string& s) {
    const auto& S = ss();
    std::vector<std::pair<int, int>> out;
    int n = int(s.size());
    auto runs = [&](auto pred) {
        for (int i = 0; i < n;) {
            if (!pred(s[size_t(i)])) {
                ++i;
                continue;
            }
            int j = i;
            while (j < n && pred(s[size_t(j)])) ++j;
            out.push_back({i, j - i});
            i = j;
        }
    };
    if (tag == S.cDigits) {
        runs(is_digit);
    } else if (tag == S.cLetters) {
        runs(is_letter);
    } else if (tag == S.cSpaces) {
        runs(is_space);
    } else if (tag == S.cIdent) {
        for (int i = 0; i < n;) {
            if (!is_ident(s[size_t(i)]) || is_digit(s[size_t(i)])) {
                ++i;
                continue;
            }
            if (i > 0 && is_ident(s[size_t(i - 1)])) {
                ++i;
                continue;
            }
            int j = i;
            while (j < n && is_ident(s[size_t(j)])) ++j;
            out.push_back({i, j - i});
            i = j;
        }
    } else if (tag == S.cDecimal) {
        for (int i = 0; i < n;) {
            if (!is_digit(s[size_t(i)])) {
                ++i;
                continue;
            }
            int j = i;
            while (j < n && is_digit(s[size_t(j)])) ++j;
            if (j < n - 1 && s[size_t(j)] == '.' && is_digit(s[size_t(j + 1)])) {
                ++j;
                while (j < n && is_digit(s[size_t(j)])) ++j;
            }
            out.push_back({i, j - i});
            i = j;
        }
    }
    return out;
}

Result<std::string> render_cell(const NodePtr& n);

Result<std::string> render_token(const NodePtr& n) {
    const auto& S = ss();
    if (n->tag == Tag::Val && std::holds_alternative<std::string>(n->val))
        return Result<std::string>::ok(std::get<std::string>(n->val));
    if (n->tag == Tag::Pat && (n->ctor == S.cAltTokThen || n->ctor == S.cAltTokElse))
        return render_token(n->args[1]);
    if (n->tag == Tag::Pat && n->ctor == S.cAltTok) {
        const auto& cond = n->args[0];
        if (cond->tag != Tag::Val || !std::holds_alternative<bool>(cond->val))
            return Result<std::string>::fail("ungrounded condition");
        return render_token(n->args[std::get<bool>(cond->val) ? 1 : 2]);
    }
    return Result<std::string>::fail("ungrounded token");
}

Result<std::string> render_cell(const NodePtr& n) {
    const auto& S = ss();
    if (n->tag == Tag::Val && std::holds_alternative<std::string>(n->val))
        return Result<std::string>::ok(std::get<std::string>(n->val));
    if (n->tag != Tag::Pat) return Result<std::string>::fail("ungrounded cell");
    if (n->ctor == S.cNil) return Result<std::string>::ok("");
    if (n->ctor == S.cFactor) {
        auto l = render_cell(n->args[0]);
        auto t = render_token(n->args[1]);
        auto r = render_cell(n->args[2]);
        if (!l || !t || !r) return Result<std::string>::fail("ungrounded cell");
        return Result<std::string>::ok(*l + *t + *r);
    }
    if (n->ctor == S.cAltCellThen || n->ctor == S.cAltCellElse) return render_cell(n->args[1]);
    if (n->ctor == S.cAltCell) {
        const auto& cond = n->args[0];
        if (cond->tag != Tag::Val || !std::holds_alternative<bool>(cond->val))
            return Result<std::string>::fail("ungrounded condition");
        return render_cell(n->args[std::get<bool>(cond->val) ? 1 : 2]);
    }
    return Result<std::string>::fail("not a cell");
}

Bits literal_bits(const std::string& s) {
    return universal_int(long(s.size()) + 1) + double(s.size()) * kCharBits;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct CellParser {
    const Domain& dom;

    // (start, len, ground token description)
    std::vector<std::tuple<int, int, NodePtr>> token_occurrences(const NodePtr& tok,
                                                                 const std::string& s) {
        const auto& S = ss();
        std::vector<std::tuple<int, int, NodePtr>> out;
        if (tok->tag == Tag::Val && std::holds_alternative<std::string>(tok->val)) {
            const std::string& v = std::get<std::string>(tok->val);
            if (v.empty()) return out;
            size_t at = s.find(v);
            while (at != std::string::npos) {
                out.push_back({int(at), int(v.size()), tok});
                at = s.find(v, at + 1);  // overlapping occurrences allowed
            }
            return out;
        }
        if (tok->tag == Tag::Pat && tok->ctor == S.cRegexTok) {
            const auto& re = tok->args[0];
            if (re->tag != Tag::Pat) return out;
            for (auto [a, l] : regex_matches(re->ctor, s))
                out.push_back({a, l, S.token_lit(s.substr(size_t(a), size_t(l)))});
            return out;
        }
        if (tok->tag == Tag::Unknown) {
            for (CtorId tag : {S.cIdent, S.cLetters, S.cDecimal, S.cDigits, S.cSpaces})
                for (auto [a, l] : regex_matches(tag, s)) {
                    bool dup = false;
                    for (auto& [oa, ol, od] : out) dup |= oa == a && ol == l;
                    if (!dup) out.push_back({a, l, S.token_lit(s.substr(size_t(a), size_t(l)))});
                }
            return out;
        }
        if (tok->tag == Tag::Pat && tok->ctor == S.cAltTok) {
            const auto& cond = tok->args[0];
            auto branch = [&](bool b) {
                if (cond->tag == Tag::Val && std::holds_alternative<bool>(cond->val) &&
                    std::get<bool>(cond->val) != b)
                    return;
                for (auto& [a, l, d] : token_occurrences(tok->args[b ? 1 : 2], s))
                    out.push_back({a, l, S.alt_taken_tok(b, d)});
            };
            branch(true);
            branch(false);
            return out;
        }
        return out;
    }

    std::vector<NodePtr> parse_cell(const NodePtr& node, const std::string& s, int depth = 0) {
        const auto& S = ss();
        std::vector<NodePtr> out;
        if (depth > 12) return out;
        if (node->tag == Tag::Unknown) {
            out.push_back(S.token_lit(s));
            return out;
        }
        if (node->is_ground()) {
            // fixed content; the residual pays for any mismatch
            out.push_back(node);
            return out;
        }
        if (node->tag != Tag::Pat) return out;
        if (node->ctor == S.cNil) {
            if (s.empty()) out.push_back(node);
            return out;
        }
        if (node->ctor == S.cFactor) {
            auto occs = token_occurrences(node->args[1], s);
            for (auto& [a, l, tdesc] : occs) {
                auto lefts = parse_cell(node->args[0], s.substr(0, size_t(a)), depth + 1);
                if (lefts.empty()) continue;
                auto rights = parse_cell(node->args[2], s.substr(size_t(a + l)), depth + 1);
                for (const auto& L : lefts)
                    for (const auto& R : rights) {
                        out.push_back(S.factor(L, tdesc, R));
                        if (int(out.size()) >= kCellCandCap) return out;
                    }
            }
            return out;
        }
        if (node->ctor == S.cAltCell || node->ctor == S.cAltTok) {
            bool is_cell = node->ctor == S.cAltCell;
            const auto& cond = node->args[0];
            auto branch = [&](bool b) {
                if (cond->tag == Tag::Val && std::holds_alternative<bool>(cond->val) &&
                    std::get<bool>(cond->val) != b)
                    return;
                for (const auto& d : parse_cell(node->args[b ? 1 : 2], s, depth + 1)) {
                    out.push_back(is_cell ? S.alt_taken_cell(b, d) : S.alt_taken_tok(b, d));
                    if (int(out.size()) >= kCellCandCap) return;
                }
            };
            branch(true);
            branch(false);
            return out;
        }
        if (node->ctor == S.cAltCellThen || node->ctor == S.cAltCellElse ||
            node->ctor == S.cAltTokThen || node->ctor == S.cAltTokElse) {
            // a reduced alternative parses as its selected branch
            bool is_cell = node->ctor == S.cAltCellThen || node->ctor == S.cAltCellElse;
            bool then_side = node->ctor == S.cAltCellThen || node->ctor == S.cAltTokThen;
            for (const auto& d : parse_cell(node->args[1], s, depth + 1)) {
                out.push_back(is_cell ? S.alt_taken_cell(then_side, d)
                                      : S.alt_taken_tok(then_side, d));
                if (int(out.size()) >= kCellCandCap) break;
            }
            return out;
        }
        if (node->ctor == S.cRegexTok) {
            // a token model standing for a whole cell matches the full string
            for (auto& [a, l, tdesc] : token_occurrences(node, s))
                if (a == 0 && l == int(s.size())) out.push_back(tdesc);
            return out;
        }
        return out;
    }
};

} // namespace

StringSchema::StringSchema() {
    kRow = schema.add_kind("Row");
    kCell = schema.add_kind("Cell");
    kToken = schema.add_kind("Token", true);
    kRegex = schema.add_kind("Regex");
    kCond = schema.add_kind("Cond", true);
    kInt = schema.add_kind("Int", true);

    cRow = schema.add_ctor({.name = "Row",
                            .result = kRow,
                            .fields = {},
                            .variadic = true,
                            .list_field = "cell",
                            .list_kind = kCell});
    cNil = schema.add_ctor({.name = "Nil", .result = kCell});
    cFactor = schema.add_ctor({.name = "Factor",
                               .result = kCell,
                               .fields = {{"left", kCell}, {"token", kToken}, {"right", kCell}}});
    cAltCell = schema.add_ctor({.name = "Alt",
                                .result = kCell,
                                .fields = {{"cond", kCond}, {"then", kCell}, {"else", kCell}}});
    cAltCellThen = schema.add_ctor({.name = "Alt",
                                    .result = kCell,
                                    .fields = {{"cond", kCond}, {"then", kCell}},
                                    .weight = 0.0});
    cAltCellElse = schema.add_ctor({.name = "Alt",
                                    .result = kCell,
                                    .fields = {{"cond", kCond}, {"else", kCell}},
                                    .weight = 0.0});
    cRegexTok = schema.add_ctor({.name = "Regex",
                                 .result = kToken,
                                 .fields = {{"re", kRegex}}});
    cAltTok = schema.add_ctor({.name = "Alt",
                               .result = kToken,
                               .fields = {{"cond", kCond}, {"then", kToken}, {"else", kToken}}});
    cAltTokThen = schema.add_ctor({.name = "Alt",
                                   .result = kToken,
                                   .fields = {{"cond", kCond}, {"then", kToken}},
                                   .weight = 0.0});
    cAltTokElse = schema.add_ctor({.name = "Alt",
                                   .result = kToken,
                                   .fields = {{"cond", kCond}, {"else", kToken}},
                                   .weight = 0.0});
    cIdent = schema.add_ctor({.name = "Ident", .result = kRegex});
    cLetters = schema.add_ctor({.name = "Letters", .result = kRegex});
    cDecimal = schema.add_ctor({.name = "Decimal", .result = kRegex});
    cDigits = schema.add_ctor({.name = "Digits", .result = kRegex});
    cSpaces = schema.add_ctor({.name = "Spaces", .result = kRegex});

    // a bare token is valid cell content, so token-valued references and
    // expressions can replace whole cells
    schema.subkinds.push_back({kCell, kToken});
}

NodePrinter StringSchema::printer() const {
    return NodePrinter{&schema, nullptr, nullptr};
}

const StringSchema& string_schema() {
    static const StringSchema s;
    return s;
}

namespace {

FunctionRegistry build_string_functions() {
    const auto& S = ss();
    FunctionRegistry reg;
    reg.schema = &S.schema;
    using Args = std::span<const NodePtr>;
    using R = Result<NodePtr>;

    auto tok = [](const NodePtr& n) -> Result<std::string> {
        if (n->tag == Tag::Val && std::holds_alternative<std::string>(n->val))
            return Result<std::string>::ok(std::get<std::string>(n->val));
        return render_token(n);
    };
    auto str1 = [&](const std::string& name, auto fn) {
        reg.add({name, {ss().kToken}, ss().kToken, [fn, tok](Args a) -> R {
                     auto s = tok(a[0]);
                     if (!s) return R::fail(s.error);
                     return R::ok(ss().token_lit(fn(*s)));
                 }});
    };
    str1("uppercase", [](const std::string& s) {
        std::string o = s;
        for (char& c : o) c = char(std::toupper(uint8_t(c)));
        return o;
    });
    str1("lowercase", [](const std::string& s) {
        std::string o = s;
        for (char& c : o) c = char(std::tolower(uint8_t(c)));
        return o;
    });
    str1("filter_digits", [](const std::string& s) {
        std::string o;
        for (char c : s)
            if (is_digit(c)) o += c;
        return o;
    });
    str1("filter_letters", [](const std::string& s) {
        std::string o;
        for (char c : s)
            if (is_letter(c)) o += c;
        return o;
    });
    str1("filter_upper", [](const std::string& s) {
        std::string o;
        for (char c : s)
            if (c >= 'A' && c <= 'Z') o += c;
        return o;
    });
    str1("filter_lower", [](const std::string& s) {
        std::string o;
        for (char c : s)
            if (c >= 'a' && c <= 'z') o += c;
        return o;
    });
    reg.add({"length", {S.kToken}, S.kInt, [tok](Args a) -> R {
                 auto s = tok(a[0]);
                 if (!s) return R::fail(s.error);
                 return R::ok(make_val(ss().kInt, int(s->size())));
             }});
    reg.add({"to_string", {S.kInt}, S.kToken, [](Args a) -> R {
                 if (a[0]->tag != Tag::Val || !std::holds_alternative<int>(a[0]->val))
                     return R::fail("int expected");
                 return R::ok(ss().token_lit(std::to_string(std::get<int>(a[0]->val))));
             }});
    reg.add({"bool_to_string", {S.kCond}, S.kToken, [](Args a) -> R {
                 if (a[0]->tag != Tag::Val || !std::holds_alternative<bool>(a[0]->val))
                     return R::fail("bool expected");
                 return R::ok(ss().token_lit(std::get<bool>(a[0]->val) ? "true" : "false"));
             }});
    reg.add({"eq", {S.kToken, S.kToken}, S.kCond, [tok](Args a) -> R {
                 auto x = tok(a[0]), y = tok(a[1]);
                 if (!x || !y) return R::fail("token expected");
                 return R::ok(ss().cond_val(*x == *y));
             }});
    reg.add({"and", {S.kCond, S.kCond}, S.kCond, [](Args a) -> R {
                 if (a[0]->tag != Tag::Val || a[1]->tag != Tag::Val) return R::fail("bool expected");
                 return R::ok(ss().cond_val(std::get<bool>(a[0]->val) && std::get<bool>(a[1]->val)));
             }});
    reg.add({"or", {S.kCond, S.kCond}, S.kCond, [](Args a) -> R {
                 if (a[0]->tag != Tag::Val || a[1]->tag != Tag::Val) return R::fail("bool expected");
                 return R::ok(ss().cond_val(std::get<bool>(a[0]->val) || std::get<bool>(a[1]->val)));
             }});
    reg.add({"not", {S.kCond}, S.kCond, [](Args a) -> R {
                 if (a[0]->tag != Tag::Val) return R::fail("bool expected");
                 return R::ok(ss().cond_val(!std::get<bool>(a[0]->val)));
             }});
    return reg;
}

} // namespace

const FunctionRegistry& StringsDomain::functions() const {
    static const FunctionRegistry reg = build_string_functions();
    return reg;
}

NodePtr StringsDomain::initial_model(const std::vector<Example>& train, bool output_side) const {
    size_t arity = 1;
    if (!train.empty()) {
        const Datum& d = output_side ? train[0].output : train[0].input;
        if (std::holds_alternative<Row>(d)) arity = std::get<Row>(d).cells.size();
    }
    std::vector<NodePtr> cells;
    for (size_t i = 0; i < arity; ++i) cells.push_back(make_unknown(ss().kCell));
    return ss().row(std::move(cells));
}

Bits StringsDomain::value_dl(const Value& v, KindId kind) const {
    (void)kind;
    switch (v.index()) {
        case 0: {
            int n = std::get<int>(v);
            return n >= 0 ? universal_int(n + 1) : universal_int(1 - long(n)) + 1;
        }
        case 4: return literal_bits(std::get<std::string>(v));
        case 5: return 1.0;
        default: return kInfiniteDL;
    }
}

std::vector<ParseResult> StringsDomain::parse(const NodePtr& model, const NodePtr& env,
                                              const Datum& datum, int limit) const {
    std::vector<ParseResult> results;
    if (!std::holds_alternative<Row>(datum)) return results;
    const Row& row = std::get<Row>(datum);
    auto reduced = resolve(*this, model, env);
    if (!reduced) return results;
    const NodePtr& root = *reduced;
    if (root->tag != Tag::Pat || root->ctor != ss().cRow) return results;
    if (root->args.size() != row.cells.size()) return results;

    CellParser parser{*this};
    std::vector<std::vector<NodePtr>> per_cell;
    for (size_t c = 0; c < row.cells.size(); ++c) {
        auto cands = parser.parse_cell(root->args[c], row.cells[c]);
        if (cands.empty()) return results;
        per_cell.push_back(std::move(cands));
    }
    std::vector<NodePtr> combos;
    std::vector<size_t> idx(per_cell.size(), 0);
    while (int(combos.size()) < kRowComboCap) {
        std::vector<NodePtr> cells;
        for (size_t c = 0; c < per_cell.size(); ++c) cells.push_back(per_cell[c][idx[c]]);
        combos.push_back(ss().row(std::move(cells)));
        size_t c = per_cell.size();
        bool done = true;
        while (c > 0) {
            --c;
            if (++idx[c] < per_cell[c].size()) {
                done = false;
                break;
            }
            idx[c] = 0;
        }
        if (done) break;
    }

    Coder coder(*this);
    struct Scored {
        NodePtr desc;
        Bits dl;
        int order;
    };
    std::vector<Scored> scored;
    for (size_t i = 0; i < combos.size(); ++i) {
        auto ddl = coder.description_dl(combos[i], root);
        if (!ddl) continue;
        Bits res = residual_dl(datum, combos[i]);
        if (res >= kInfiniteDL) continue;
        scored.push_back({combos[i], *ddl + res, int(i)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.dl != b.dl) return a.dl < b.dl;
        return a.order < b.order;
    });
    if (int(scored.size()) > limit) scored.resize(size_t(limit));
    for (size_t i = 0; i < scored.size(); ++i)
        results.push_back({int(i) + 1, scored[i].desc, scored[i].dl});
    return results;
}

Result<Datum> StringsDomain::render_datum(const NodePtr& desc) const {
    if (desc->tag != Tag::Pat || desc->ctor != ss().cRow)
        return Result<Datum>::fail("not a row description");
    Row row;
    for (const auto& c : desc->args) {
        auto s = render_cell(c);
        if (!s) return Result<Datum>::fail(s.error);
        row.cells.push_back(*s);
    }
    return Result<Datum>::ok(Datum{std::move(row)});
}

Bits StringsDomain::residual_dl(const Datum& datum, const NodePtr& desc) const {
    if (!std::holds_alternative<Row>(datum)) return kInfiniteDL;
    const Row& row = std::get<Row>(datum);
    auto rendered = render_datum(desc);
    if (!rendered) return kInfiniteDL;
    const Row& r = std::get<Row>(*rendered);
    if (r.cells.size() != row.cells.size()) return kInfiniteDL;
    long d = 0;
    Bits per = 0;
    for (size_t c = 0; c < row.cells.size(); ++c) {
        if (r.cells[c] == row.cells[c]) continue;
        ++d;
        per += std::log2(double(row.cells.size())) + literal_bits(row.cells[c]);
    }
    if (d == 0) return 0.0;
    return universal_int(d + 1) - universal_int(1) + per;
}

bool StringsDomain::pattern_admits(const NodePtr& pattern, const NodePtr& desc) const {
    const auto& S = ss();
    if (pattern->tag == Tag::Pat && pattern->ctor == S.cNil)
        return desc->tag == Tag::Val && std::holds_alternative<std::string>(desc->val) &&
               std::get<std::string>(desc->val).empty();
    if (pattern->tag == Tag::Pat && pattern->ctor == S.cRegexTok) {
        if (desc->tag != Tag::Val || !std::holds_alternative<std::string>(desc->val)) return false;
        const auto& re = pattern->args[0];
        if (re->tag != Tag::Pat) return false;
        return full_match(re->ctor, std::get<std::string>(desc->val));
    }
    if (pattern->tag == Tag::Pat &&
        (pattern->ctor == S.cAltCell || pattern->ctor == S.cAltTok)) {
        bool is_cell = pattern->ctor == S.cAltCell;
        if (desc->tag != Tag::Pat) return false;
        bool then_side;
        if (desc->ctor == (is_cell ? S.cAltCellThen : S.cAltTokThen))
            then_side = true;
        else if (desc->ctor == (is_cell ? S.cAltCellElse : S.cAltTokElse))
            then_side = false;
        else
            return false;
        if (!match_pattern(*this, pattern->args[0], desc->args[0])) return false;
        return match_pattern(*this, pattern->args[then_side ? 1 : 2], desc->args[1]);
    }
    return false;
}

Result<Bits> StringsDomain::admitted_desc_dl(const NodePtr& pattern, const NodePtr& desc) const {
    const auto& S = ss();
    Coder coder(*this);
    if (pattern->tag == Tag::Pat && pattern->ctor == S.cNil) {
        if (pattern_admits(pattern, desc)) return Result<Bits>::ok(0.0);
        return Result<Bits>::fail("not admitted");
    }
    if (pattern->tag == Tag::Pat && pattern->ctor == S.cRegexTok) {
        if (!pattern_admits(pattern, desc)) return Result<Bits>::fail("not admitted");
        const std::string& s = std::get<std::string>(desc->val);
        return Result<Bits>::ok(universal_int(long(s.size()) + 1) +
                                double(s.size()) * class_bits(pattern->args[0]->ctor));
    }
    if (pattern->tag == Tag::Pat &&
        (pattern->ctor == S.cAltCell || pattern->ctor == S.cAltTok)) {
        bool is_cell = pattern->ctor == S.cAltCell;
        if (desc->tag != Tag::Pat) return Result<Bits>::fail("not admitted");
        bool then_side;
        if (desc->ctor == (is_cell ? S.cAltCellThen : S.cAltTokThen))
            then_side = true;
        else if (desc->ctor == (is_cell ? S.cAltCellElse : S.cAltTokElse))
            then_side = false;
        else
            return Result<Bits>::fail("not admitted");
        auto cond_bits = coder.description_dl(desc->args[0], pattern->args[0]);
        if (!cond_bits) return cond_bits;
        auto branch_bits = coder.description_dl(desc->args[1], pattern->args[then_side ? 1 : 2]);
        if (!branch_bits) return branch_bits;
        return Result<Bits>::ok(*cond_bits + *branch_bits);
    }
    return Result<Bits>::fail("not admitted");
}

bool StringsDomain::ref_kind_allowed(KindId kind) const {
    return kind == ss().kToken || kind == ss().kCond;
}

Result<NodePtr> StringsDomain::resolve_special(const NodePtr& model, const NodePtr& env) const {
    const auto& S = ss();
    if (model->tag != Tag::Pat ||
        (model->ctor != S.cAltCell && model->ctor != S.cAltTok))
        return Result<NodePtr>::fail("");
    auto cond = resolve(*this, model->args[0], env);
    if (!cond) return Result<NodePtr>::fail("");  // fall through, parse both branches
    if ((*cond)->tag != Tag::Val || !std::holds_alternative<bool>((*cond)->val))
        return Result<NodePtr>::fail("");
    // a ground condition selects its branch; only that branch is resolved
    bool then_side = std::get<bool>((*cond)->val);
    auto branch = resolve(*this, model->args[then_side ? 1 : 2], env);
    if (!branch) return branch;
    bool is_cell = model->ctor == S.cAltCell;
    return Result<NodePtr>::ok(is_cell ? S.alt_taken_cell(then_side, *branch)
                                       : S.alt_taken_tok(then_side, *branch));
}

Bits StringsDomain::datum_literal_dl(const Datum& datum) const {
    if (!std::holds_alternative<Row>(datum)) return 0;
    Bits bits = 0;
    for (const auto& s : std::get<Row>(datum).cells) bits += literal_bits(s);
    return bits;
}

std::vector<GenResult> StringsDomain::generate(const NodePtr& model, const NodePtr& env, int limit,
                                               Rng* rng) const {
    (void)rng;  // string generation has no random mode beyond defaults
    std::vector<GenResult> results;
    auto reduced = resolve(*this, model, env);
    if (!reduced) return results;
    // ground remaining unknowns with empty strings / true conditions
    std::function<NodePtr(const NodePtr&)> fill = [&](const NodePtr& n) -> NodePtr {
        if (n->tag == Tag::Unknown) {
            if (n->kind == ss().kCell) return ss().token_lit("");
            if (n->kind == ss().kToken) return ss().token_lit("");
            if (n->kind == ss().kCond) return ss().cond_val(true);
            return n;
        }
        if (n->tag != Tag::Pat) return n;
        std::vector<NodePtr> args;
        bool changed = false;
        for (const auto& a : n->args) {
            args.push_back(fill(a));
            changed |= args.back() != a;
        }
        return changed ? make_pat(schema(), n->ctor, std::move(args)) : n;
    };
    NodePtr ground = fill(*reduced);
    auto datum = render_datum(ground);
    if (!datum) return results;
    results.push_back({1, ground, *datum});
    (void)limit;
    return results;
}

std::string StringsDomain::datum_to_text(const Datum& d) const {
    if (!std::holds_alternative<Row>(d)) return "";
    const Row& row = std::get<Row>(d);
    std::string out;
    for (size_t i = 0; i < row.cells.size(); ++i) {
        if (i) out += " | ";
        out += "\"" + row.cells[i] + "\"";
    }
    return out;
}

namespace {

// Longest substrings common to every string, plus single separator chars.
std::vector<std::string> common_substrings(const std::vector<std::string>& strs, size_t cap) {
    std::vector<std::string> out;
    if (strs.empty()) return out;
    const std::string& base = *std::min_element(
        strs.begin(), strs.end(),
        [](const std::string& a, const std::string& b) { return a.size() < b.size(); });
    auto in_all = [&](const std::string& sub) {
        for (const auto& s : strs)
            if (s.find(sub) == std::string::npos) return false;
        return true;
    };
    std::vector<std::string> cands;
    for (size_t len = base.size(); len >= 1 && cands.size() < cap * 4; --len)
        for (size_t at = 0; at + len <= base.size(); ++at) {
            std::string sub = base.substr(at, len);
            if (!in_all(sub)) continue;
            bool covered = false;
            for (const auto& c : cands) covered |= c.find(sub) != std::string::npos && len < c.size();
            if (!covered) cands.push_back(sub);
        }
    std::sort(cands.begin(), cands.end(), [](const std::string& a, const std::string& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (const auto& c : cands) {
        if (out.size() >= cap) break;
        out.push_back(c);
    }
    return out;
}

} // namespace

void StringsDomain::propose_refinements(const RefineCtx& ctx, std::vector<Refinement>& out) const {
    const auto& S = ss();
    NodePrinter pr = printer();
    auto add = [&](Side side, const Path& p, NodePtr node, bool deferred) {
        Refinement r{Refinement::Op::Replace, side, p, std::move(node), 0, deferred, ""};
        r.label = std::string(side_name(side)) + (p.empty() ? "" : "." + path_to_string(p)) +
                  " <- " + pr(r.node);
        out.push_back(std::move(r));
    };

    struct TokenCand {
        NodePtr node;
        std::vector<bool> coverage;
        bool full = false;
        bool at_start = false, at_end = false, spans = false;
        int covered = 0;
    };

    for (Side side : {Side::Input, Side::Output}) {
        const NodePtr& root = side == Side::Input ? ctx.model.input : ctx.model.output;
        Path prefix;
        walk_model(schema(), root, prefix, [&](const Path& p, const NodePtr& n) {
            if (n->tag == Tag::Unknown && n->kind == S.kCell) {
                // observed strings at this path; examples where an
                // alternative hides the path do not constrain it
                std::vector<std::string> observed;
                std::vector<size_t> obs_example;
                for (size_t e = 0; e < ctx.joints.size(); ++e) {
                    if (ctx.joints[e].kept.empty()) continue;
                    const auto& j = ctx.joints[e].kept[0];
                    const NodePtr& droot = side == Side::Input ? j.desc_in : j.desc_out;
                    auto obs = lookup(*this, droot, p);
                    if (!obs) continue;
                    if ((*obs)->tag != Tag::Val ||
                        !std::holds_alternative<std::string>((*obs)->val))
                        return;
                    observed.push_back(std::get<std::string>((*obs)->val));
                    obs_example.push_back(e);
                }
                if (observed.empty()) return;
                size_t n_ex = observed.size();
                bool any_empty = false, any_filled = false;
                for (const auto& s : observed) (s.empty() ? any_empty : any_filled) = true;

                CellParser parser{*this};
                // occurrence-based coverage; flags hold over covered examples
                auto coverage_of = [&](const NodePtr& tok) {
                    TokenCand c{tok, std::vector<bool>(n_ex, false), true, true, true, true, 0};
                    for (size_t e = 0; e < n_ex; ++e) {
                        auto occs = parser.token_occurrences(tok, observed[e]);
                        if (occs.empty()) {
                            c.full = false;
                            continue;
                        }
                        c.coverage[e] = true;
                        ++c.covered;
                        bool start = false, end = false, span = false;
                        for (auto& [a, l, d] : occs) {
                            start |= a == 0;
                            end |= a + l == int(observed[e].size());
                            span |= a == 0 && l == int(observed[e].size());
                        }
                        c.at_start &= start;
                        c.at_end &= end;
                        c.spans &= span;
                    }
                    if (c.covered == 0) c.at_start = c.at_end = c.spans = false;
                    return c;
                };
                // per-example values of a referenced input token
                auto ref_cand = [&](const Path& rp) {
                    TokenCand c{make_ref(S.kToken, rp), std::vector<bool>(n_ex, false),
                                true, true, true, true, 0};
                    for (size_t e = 0; e < n_ex; ++e) {
                        auto v = lookup(*this, ctx.joints[obs_example[e]].kept[0].desc_in, rp);
                        if (!v || (*v)->tag != Tag::Val ||
                            !std::holds_alternative<std::string>((*v)->val)) {
                            c.full = false;
                            continue;
                        }
                        const std::string& tok = std::get<std::string>((*v)->val);
                        const std::string& s = observed[e];
                        if (tok.empty() || s.find(tok) == std::string::npos) {
                            c.full = false;
                            continue;
                        }
                        c.coverage[e] = true;
                        ++c.covered;
                        c.at_start &= s.rfind(tok, 0) == 0;
                        c.at_end &= s.compare(s.size() - tok.size(), tok.size(), tok) == 0;
                        c.spans &= s == tok;
                    }
                    if (c.covered == 0) c.at_start = c.at_end = c.spans = false;
                    return c;
                };

                std::vector<TokenCand> tokens;
                for (CtorId tag : {S.cIdent, S.cLetters, S.cDecimal, S.cDigits, S.cSpaces}) {
                    TokenCand c = coverage_of(S.regex_tok(tag));
                    if (c.covered > 0) tokens.push_back(std::move(c));
                }
                std::vector<std::string> filled;
                for (const auto& s : observed)
                    if (!s.empty()) filled.push_back(s);
                for (const auto& sub : common_substrings(filled, 12))
                    tokens.push_back(coverage_of(S.token_lit(sub)));
                if (side == Side::Output && !ctx.joints.empty() && !ctx.joints[0].kept.empty()) {
                    auto comps = components_of(*this, ctx.joints[0].kept[0].desc_in);
                    for (const auto& c : comps.comps) {
                        if (c.desc->tag != Tag::Val ||
                            !std::holds_alternative<std::string>(c.desc->val))
                            continue;
                        TokenCand rc = ref_cand(c.path);
                        if (rc.covered > 0) tokens.push_back(std::move(rc));
                    }
                }

                auto factor_variants = [&](const NodePtr& tok, bool spans, bool at_start,
                                           bool at_end, bool deferred) {
                    std::vector<NodePtr> vs;
                    if (spans) vs.push_back(S.factor(S.nil(), tok, S.nil()));
                    if (at_start) vs.push_back(S.factor(S.nil(), tok, make_unknown(S.kCell)));
                    if (at_end) vs.push_back(S.factor(make_unknown(S.kCell), tok, S.nil()));
                    vs.push_back(S.factor(make_unknown(S.kCell), tok, make_unknown(S.kCell)));
                    for (auto& v : vs) add(side, p, std::move(v), deferred);
                };

                for (const auto& t : tokens) {
                    if (t.full && t.covered == int(n_ex) && !any_empty)
                        factor_variants(t.node, t.spans, t.at_start, t.at_end, false);
                    // optionals: the token describes the non-empty examples,
                    // the empty ones take the Nil branch
                    if (any_empty && any_filled && t.covered > 0) {
                        bool covers_filled = true;
                        for (size_t e = 0; e < n_ex; ++e)
                            if (!observed[e].empty() && !t.coverage[e]) covers_filled = false;
                        if (covers_filled) {
                            std::vector<NodePtr> vs;
                            if (t.spans) vs.push_back(S.factor(S.nil(), t.node, S.nil()));
                            if (t.at_start)
                                vs.push_back(S.factor(S.nil(), t.node, make_unknown(S.kCell)));
                            if (t.at_end)
                                vs.push_back(S.factor(make_unknown(S.kCell), t.node, S.nil()));
                            vs.push_back(
                                S.factor(make_unknown(S.kCell), t.node, make_unknown(S.kCell)));
                            for (auto& v : vs)
                                add(side, p,
                                    S.alt_cell(make_unknown(S.kCond), std::move(v), S.nil()),
                                    true);
                        }
                    }
                }

                // alternatives pairing tokens that split the examples
                int pairs = 0;
                std::vector<TokenCand> pool = tokens;
                for (const auto& t : tokens) {
                    if (t.covered == int(n_ex) || t.covered == 0) continue;
                    // constants shared by the uncovered examples complete a pair
                    std::vector<std::string> rest;
                    for (size_t e = 0; e < n_ex; ++e)
                        if (!t.coverage[e]) rest.push_back(observed[e]);
                    for (const auto& sub : common_substrings(rest, 2))
                        pool.push_back(coverage_of(S.token_lit(sub)));
                    if (pool.size() > 40) break;
                }
                for (size_t a = 0; a < pool.size() && pairs < 8; ++a) {
                    if (pool[a].covered == int(n_ex) || pool[a].covered == 0) continue;
                    for (size_t b = 0; b < pool.size() && pairs < 8; ++b) {
                        if (a == b || pool[b].covered == 0) continue;
                        bool complement = true;
                        for (size_t e = 0; e < n_ex; ++e)
                            complement &= pool[a].coverage[e] || pool[b].coverage[e];
                        if (!complement) continue;
                        NodePtr alt = S.alt_tok(make_unknown(S.kCond), pool[a].node, pool[b].node);
                        bool spans = pool[a].spans && pool[b].spans;
                        bool at_start = pool[a].at_start && pool[b].at_start;
                        bool at_end = pool[a].at_end && pool[b].at_end;
                        factor_variants(alt, spans, at_start, at_end, true);
                        ++pairs;
                    }
                }
            }
            // optionals: wrap an existing component, Alt(?, M, Nil)
            if (n->tag == Tag::Pat && n->ctor == S.cFactor) {
                add(side, p, S.alt_cell(make_unknown(S.kCond), n, S.nil()), true);
                add(side, p, S.alt_cell(make_unknown(S.kCond), n, make_unknown(S.kCell)), true);
            }
        });
    }
}

std::vector<NodePtr> StringsDomain::expression_const_args(const RefineCtx& ctx) const {
    std::vector<NodePtr> out;
    std::vector<std::string> seen;
    for (const auto& ej : ctx.joints) {
        for (const auto& j : ej.kept) {
            auto comps = components_of(*this, j.desc_in);
            for (const auto& c : comps.comps) {
                if (c.desc->tag != Tag::Val || !std::holds_alternative<std::string>(c.desc->val))
                    continue;
                const auto& s = std::get<std::string>(c.desc->val);
                if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
                seen.push_back(s);
                out.push_back(ss().token_lit(s));
                if (out.size() >= 12) return out;
            }
        }
    }
    return out;
}

const Domain& get_strings_domain() {
    static StringsDomain d;
    return d;
}

} // namespace mdli
