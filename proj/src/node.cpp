#include "mdli/node.hpp"

#include <sstream>

namespace mdli {

const std::string& color_name(Color c) {
    static const std::string names[kNumColors] = {
        "black", "blue", "red", "green", "yellow",
        "grey", "fuchsia", "orange", "teal", "brown"};
    return names[c.v % kNumColors];
}

int color_from_name(const std::string& name) {
    for (int i = 0; i < kNumColors; ++i)
        if (color_name(Color{uint8_t(i)}) == name) return i;
    return -1;
}

std::array<uint8_t, 3> color_rgb(Color c) {
    static const std::array<uint8_t, 3> palette[kNumColors] = {
        {0x00, 0x00, 0x00}, {0x00, 0x74, 0xD9}, {0xFF, 0x41, 0x36},
        {0x2E, 0xCC, 0x40}, {0xFF, 0xDC, 0x00}, {0xAA, 0xAA, 0xAA},
        {0xF0, 0x12, 0xBE}, {0xFF, 0x85, 0x1B}, {0x7F, 0xDB, 0xFF},
        {0x87, 0x0C, 0x25}};
    return palette[c.v % kNumColors];
}

uint64_t value_hash(const Value& v) {
    uint64_t h = hash_combine(0xabcd, v.index());
    switch (v.index()) {
        case 0: return hash_combine(h, uint64_t(int64_t(std::get<int>(v))));
        case 1: return hash_combine(h, std::get<Color>(v).v);
        case 2: {
            const auto& b = std::get<Bitmap>(v);
            h = hash_combine(h, b.h);
            h = hash_combine(h, b.w);
            for (uint8_t x : b.bits) h = hash_combine(h, x);
            return h;
        }
        case 3: {
            const auto& g = std::get<Grid>(v);
            h = hash_combine(h, g.h);
            h = hash_combine(h, g.w);
            for (uint8_t x : g.cells) h = hash_combine(h, x);
            return h;
        }
        case 4: return hash_combine(h, std::hash<std::string>{}(std::get<std::string>(v)));
        case 5: return hash_combine(h, std::get<bool>(v) ? 1 : 2);
    }
    return h;
}

std::string value_to_string(const Value& v) {
    switch (v.index()) {
        case 0: return std::to_string(std::get<int>(v));
        case 1: return color_name(std::get<Color>(v));
        case 2: {
            const auto& b = std::get<Bitmap>(v);
            std::string s = "bits" + std::to_string(b.h) + "x" + std::to_string(b.w) + "[";
            for (uint8_t x : b.bits) s += x ? '1' : '0';
            return s + "]";
        }
        case 3: {
            const auto& g = std::get<Grid>(v);
            std::string s = "grid" + std::to_string(g.h) + "x" + std::to_string(g.w) + "[";
            for (int i = 0; i < g.h; ++i) {
                if (i) s += '|';
                for (int j = 0; j < g.w; ++j) s += char('0' + g.at(i, j));
            }
            return s + "]";
        }
        case 4: return "\"" + std::get<std::string>(v) + "\"";
        case 5: return std::get<bool>(v) ? "true" : "false";
    }
    return "?";
}

std::string path_to_string(const Path& p) {
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) s += '.';
        s += p[i].field;
        if (p[i].index >= 0) s += "[" + std::to_string(p[i].index) + "]";
    }
    return s;
}

Result<Path> path_from_string(const std::string& s) {
    Path p;
    size_t i = 0;
    while (i < s.size()) {
        size_t start = i;
        while (i < s.size() && s[i] != '.' && s[i] != '[') ++i;
        if (i == start) return Result<Path>::fail("empty path selector in '" + s + "'");
        PathSel sel;
        sel.field = s.substr(start, i - start);
        if (i < s.size() && s[i] == '[') {
            size_t close = s.find(']', i);
            if (close == std::string::npos) return Result<Path>::fail("unclosed index in '" + s + "'");
            sel.index = std::stoi(s.substr(i + 1, close - i - 1));
            i = close + 1;
        }
        p.push_back(std::move(sel));
        if (i < s.size()) {
            if (s[i] != '.') return Result<Path>::fail("expected '.' in '" + s + "'");
            ++i;
        }
    }
    return Result<Path>::ok(std::move(p));
}

static uint64_t node_hash(const Node& n) {
    uint64_t h = hash_combine(uint64_t(n.tag) * 31 + 7, n.kind);
    switch (n.tag) {
        case Tag::Unknown: break;
        case Tag::Val: h = hash_combine(h, value_hash(n.val)); break;
        case Tag::Pat: h = hash_combine(h, n.ctor); break;
        case Tag::Apply: h = hash_combine(h, 0x5151 + n.fn); break;
        case Tag::Ref: {
            for (const auto& sel : n.ref) {
                h = hash_combine(h, std::hash<std::string>{}(sel.field));
                h = hash_combine(h, uint64_t(int64_t(sel.index)));
            }
            break;
        }
    }
    for (const auto& a : n.args) h = hash_combine(h, a->hash);
    return h;
}

bool Node::is_ground() const {
    if (tag == Tag::Unknown || tag == Tag::Ref || tag == Tag::Apply) return false;
    for (const auto& a : args)
        if (!a->is_ground()) return false;
    return true;
}

bool Node::is_model_only() const {
    if (tag == Tag::Ref || tag == Tag::Apply) return true;
    for (const auto& a : args)
        if (a->is_model_only()) return true;
    return false;
}

NodePtr make_unknown(KindId kind) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Unknown;
    n->kind = kind;
    n->hash = node_hash(*n);
    return n;
}

NodePtr make_val(KindId kind, Value v) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Val;
    n->kind = kind;
    n->val = std::move(v);
    n->hash = node_hash(*n);
    return n;
}

NodePtr make_pat(const Schema& s, CtorId ctor, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Pat;
    n->kind = s.ctor(ctor).result;
    n->ctor = ctor;
    n->args = std::move(args);
    n->hash = node_hash(*n);
    return n;
}

NodePtr make_ref(KindId kind, Path p) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Ref;
    n->kind = kind;
    n->ref = std::move(p);
    n->hash = node_hash(*n);
    return n;
}

NodePtr make_apply(KindId kind, FuncId fn, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Apply;
    n->kind = kind;
    n->fn = fn;
    n->args = std::move(args);
    n->hash = node_hash(*n);
    return n;
}

bool node_eq(const Node& a, const Node& b) {
    if (a.tag != b.tag || a.kind != b.kind || a.hash != b.hash) return false;
    if (a.args.size() != b.args.size()) return false;
    switch (a.tag) {
        case Tag::Val:
            if (!value_eq(a.val, b.val)) return false;
            break;
        case Tag::Pat:
            if (a.ctor != b.ctor) return false;
            break;
        case Tag::Apply:
            if (a.fn != b.fn) return false;
            break;
        case Tag::Ref:
            if (!(a.ref == b.ref)) return false;
            break;
        case Tag::Unknown:
            break;
    }
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!node_eq(*a.args[i], *b.args[i])) return false;
    return true;
}

// Maps one selector to an argument slot of a Pat node; -1 when absent.
static int arg_index(const Schema& s, const Node& n, const PathSel& sel) {
    if (n.tag != Tag::Pat) return -1;
    const auto& spec = s.ctor(n.ctor);
    if (sel.index >= 0) {
        if (!spec.variadic || sel.field != spec.list_field) return -1;
        int idx = int(spec.fields.size()) + sel.index;
        if (idx >= int(n.args.size())) return -1;
        return idx;
    }
    return s.field_index(n.ctor, sel.field);
}

Result<NodePtr> replace_at(const Schema& s, const NodePtr& root, const Path& path,
                           const std::function<NodePtr(const NodePtr&)>& edit) {
    if (path.empty()) return Result<NodePtr>::ok(edit(root));
    int idx = arg_index(s, *root, path.front());
    if (idx < 0)
        return Result<NodePtr>::fail("path not found: " + path_to_string(path));
    Path rest(path.begin() + 1, path.end());
    auto sub = replace_at(s, root->args[idx], rest, edit);
    if (!sub) return sub;
    auto args = root->args;
    args[size_t(idx)] = *sub;
    return Result<NodePtr>::ok(make_pat(s, root->ctor, std::move(args)));
}

Result<NodePtr> insert_list_elem(const Schema& s, const NodePtr& root, const Path& path,
                                 int pos, const NodePtr& elem) {
    return replace_at(s, root, path, [&](const NodePtr& n) -> NodePtr {
        if (n->tag != Tag::Pat || !s.ctor(n->ctor).variadic) return n;
        auto args = n->args;
        int fixed = int(s.ctor(n->ctor).fields.size());
        int len = int(args.size()) - fixed;
        int at = fixed + std::max(0, std::min(pos, len));
        args.insert(args.begin() + at, elem);
        return make_pat(s, n->ctor, std::move(args));
    });
}

Result<NodePtr> remove_list_elem(const Schema& s, const NodePtr& root, const Path& path, int pos) {
    bool removed = false;
    auto res = replace_at(s, root, path, [&](const NodePtr& n) -> NodePtr {
        if (n->tag != Tag::Pat || !s.ctor(n->ctor).variadic) return n;
        int fixed = int(s.ctor(n->ctor).fields.size());
        int len = int(n->args.size()) - fixed;
        if (pos < 0 || pos >= len) return n;
        auto args = n->args;
        args.erase(args.begin() + fixed + pos);
        removed = true;
        return make_pat(s, n->ctor, std::move(args));
    });
    if (res && !removed) return Result<NodePtr>::fail("no list element at " + path_to_string(path));
    return res;
}

std::string NodePrinter::operator()(const NodePtr& n) const {
    switch (n->tag) {
        case Tag::Unknown: return "?";
        case Tag::Val: return print_value ? print_value(n->val, n->kind) : value_to_string(n->val);
        case Tag::Ref: return "!" + path_to_string(n->ref);
        case Tag::Apply: {
            std::string s = (func_name ? func_name(n->fn) : "fn" + std::to_string(n->fn)) + "(";
            for (size_t i = 0; i < n->args.size(); ++i) {
                if (i) s += ", ";
                s += (*this)(n->args[i]);
            }
            return s + ")";
        }
        case Tag::Pat: {
            const auto& spec = schema->ctor(n->ctor);
            if (n->args.empty() && !spec.variadic) return spec.name;
            std::string s = spec.name + "(";
            for (size_t i = 0; i < spec.fields.size(); ++i) {
                if (i) s += ", ";
                s += (*this)(n->args[i]);
            }
            if (spec.variadic) {
                if (!spec.fields.empty()) s += ", ";
                s += "[";
                for (size_t i = spec.fields.size(); i < n->args.size(); ++i) {
                    if (i > spec.fields.size()) s += ", ";
                    s += (*this)(n->args[i]);
                }
                s += "]";
            }
            return s + ")";
        }
    }
    return "?";
}

} // namespace mdli
