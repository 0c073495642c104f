#include <algorithm>
#include <array>

#include "mdli/functions.hpp"
#include "mdli/grid_ops.hpp"

namespace mdli {

namespace {

using Args = std::span<const NodePtr>;
using R = Result<NodePtr>;

const GridSchema& gs() { return grid_schema(); }

R vec_result(Vec v) { return R::ok(gs().vec(v.i, v.j)); }
R int_result(int n) { return R::ok(make_val(gs().kInt, n)); }

Result<Vec> shape_size(const NodePtr& shape) {
    if (shape->tag == Tag::Pat && shape->ctor == gs().cPoint) return Result<Vec>::ok(Vec{1, 1});
    if (shape->tag == Tag::Pat && shape->ctor == gs().cRectangle) return gs().as_vec(shape->args[0]);
    return Result<Vec>::fail("not a shape");
}

Result<NodePtr> object_shape(const NodePtr& obj) {
    if (obj->tag != Tag::Pat || obj->ctor != gs().cColored)
        return Result<NodePtr>::fail("not an object");
    return Result<NodePtr>::ok(obj->args[0]);
}

struct LayerInfo {
    Vec pos;
    NodePtr object;
    Vec size;
};

Result<LayerInfo> layer_info(const NodePtr& layer) {
    if (layer->tag != Tag::Pat || layer->ctor != gs().cLayer)
        return Result<LayerInfo>::fail("not a layer");
    auto pos = gs().as_vec(layer->args[0]);
    if (!pos) return Result<LayerInfo>::fail(pos.error);
    auto sh = object_shape(layer->args[1]);
    if (!sh) return Result<LayerInfo>::fail(sh.error);
    auto size = shape_size(*sh);
    if (!size) return Result<LayerInfo>::fail(size.error);
    return Result<LayerInfo>::ok(LayerInfo{*pos, layer->args[1], *size});
}

Result<Grid> raw(const NodePtr& n) {
    if (n->tag != Tag::Val || !std::holds_alternative<Grid>(n->val))
        return Result<Grid>::fail("not a raw grid");
    return Result<Grid>::ok(std::get<Grid>(n->val));
}

Result<Bitmap> mask_bitmap_at(const NodePtr& mask, Vec size) {
    const Bitmap* bmp = nullptr;
    auto tag = mask_tag_of(gs(), mask, &bmp);
    if (!tag) return Result<Bitmap>::fail(tag.error);
    Bitmap out(size.i, size.j);
    for (int i = 0; i < size.i; ++i)
        for (int j = 0; j < size.j; ++j) {
            auto m = mask_member(*tag, bmp, size, i, j);
            if (!m) return Result<Bitmap>::fail(m.error);
            out.set(i, j, *m ? 1 : 0);
        }
    return Result<Bitmap>::ok(std::move(out));
}

enum class Sym { FlipH, FlipV, Rot90, Rot180 };

Vec sym_size(Sym s, Vec size) {
    return (s == Sym::Rot90) ? Vec{size.j, size.i} : size;
}

// source coordinates for destination (i,j)
Vec sym_src(Sym s, Vec size, int i, int j) {
    switch (s) {
        case Sym::FlipH: return {i, size.j - 1 - j};
        case Sym::FlipV: return {size.i - 1 - i, j};
        case Sym::Rot90: return {size.i - 1 - j, i};  // clockwise quarter turn
        case Sym::Rot180: return {size.i - 1 - i, size.j - 1 - j};
    }
    return {i, j};
}

Grid sym_grid(Sym s, const Grid& g) {
    Vec ns = sym_size(s, {g.h, g.w});
    Grid out(ns.i, ns.j);
    for (int i = 0; i < out.h; ++i)
        for (int j = 0; j < out.w; ++j) {
            Vec src = sym_src(s, {g.h, g.w}, i, j);
            out.set(i, j, g.at(src.i, src.j));
        }
    return out;
}

Bitmap sym_bitmap(Sym s, const Bitmap& b) {
    Vec ns = sym_size(s, {b.h, b.w});
    Bitmap out(ns.i, ns.j);
    for (int i = 0; i < out.h; ++i)
        for (int j = 0; j < out.w; ++j) {
            Vec src = sym_src(s, {b.h, b.w}, i, j);
            out.set(i, j, b.at(src.i, src.j));
        }
    return out;
}

R sym_mask(Sym s, const NodePtr& mask, Vec size) {
    if (mask->tag == Tag::Pat) {
        CtorId c = mask->ctor;
        if (c == gs().cFull || c == gs().cBorder) return R::ok(mask);
        if (c == gs().cEvenCheckboard || c == gs().cOddCheckboard) {
            int shift = 0;  // parity change of (i+j) under the symmetry
            switch (s) {
                case Sym::FlipH: shift = (size.j - 1) % 2; break;
                case Sym::FlipV: shift = (size.i - 1) % 2; break;
                case Sym::Rot90: shift = (size.i - 1) % 2; break;
                case Sym::Rot180: shift = (size.i + size.j) % 2; break;
            }
            bool swap = shift != 0;
            if (!swap) return R::ok(mask);
            return R::ok(gs().mask_named(c == gs().cEvenCheckboard ? gs().cOddCheckboard
                                                                   : gs().cEvenCheckboard));
        }
    }
    auto b = mask_bitmap_at(mask, size);
    if (!b) return R::fail(b.error);
    return R::ok(gs().mask_bitmap(sym_bitmap(s, *b)));
}

R sym_shape(Sym s, const NodePtr& shape) {
    if (shape->tag == Tag::Pat && shape->ctor == gs().cPoint) return R::ok(shape);
    auto size = shape_size(shape);
    if (!size) return R::fail(size.error);
    auto m = sym_mask(s, shape->args[1], *size);
    if (!m) return m;
    Vec ns = sym_size(s, *size);
    return R::ok(gs().rectangle(gs().vec(ns.i, ns.j), *m));
}

R apply_sym(Sym s, const NodePtr& x) {
    if (x->kind == gs().kRawGrid) {
        auto g = raw(x);
        if (!g) return R::fail(g.error);
        return R::ok(gs().raw_grid(sym_grid(s, *g)));
    }
    if (x->kind == gs().kObject) {
        auto sh = object_shape(x);
        if (!sh) return R::fail(sh.error);
        auto ns = sym_shape(s, *sh);
        if (!ns) return ns;
        return R::ok(gs().colored(*ns, x->args[1]));
    }
    return sym_shape(s, x);
}

R scale_shape(const NodePtr& shape, Vec factor) {
    if (factor.i < 1 || factor.j < 1) return R::fail("scale factor must be positive");
    auto size = shape_size(shape);
    if (!size) return R::fail(size.error);
    Vec ns{size->i * factor.i, size->j * factor.j};
    if (ns.i > 30 || ns.j > 30) return R::fail("scaled shape exceeds grid bounds");
    if (shape->ctor == gs().cPoint)
        return R::ok(gs().rectangle(gs().vec(ns.i, ns.j), gs().mask_named(gs().cFull)));
    const NodePtr& mask = shape->args[1];
    if (mask->tag == Tag::Pat && mask->ctor == gs().cFull)
        return R::ok(gs().rectangle(gs().vec(ns.i, ns.j), mask));
    auto b = mask_bitmap_at(mask, *size);
    if (!b) return R::fail(b.error);
    Bitmap nb(ns.i, ns.j);
    for (int i = 0; i < ns.i; ++i)
        for (int j = 0; j < ns.j; ++j) nb.set(i, j, b->at(i / factor.i, j / factor.j));
    return R::ok(gs().rectangle(gs().vec(ns.i, ns.j), gs().mask_bitmap(std::move(nb))));
}

R scale_value(const NodePtr& x, Vec factor) {
    if (x->kind == gs().kRawGrid) {
        auto g = raw(x);
        if (!g) return R::fail(g.error);
        if (g->h * factor.i > 30 || g->w * factor.j > 30)
            return R::fail("scaled grid exceeds grid bounds");
        Grid out(g->h * factor.i, g->w * factor.j);
        for (int i = 0; i < out.h; ++i)
            for (int j = 0; j < out.w; ++j) out.set(i, j, g->at(i / factor.i, j / factor.j));
        return R::ok(gs().raw_grid(std::move(out)));
    }
    if (x->kind == gs().kObject) {
        auto sh = object_shape(x);
        if (!sh) return R::fail(sh.error);
        auto ns = scale_shape(*sh, factor);
        if (!ns) return ns;
        return R::ok(gs().colored(*ns, x->args[1]));
    }
    return scale_shape(x, factor);
}

R extend_shape(const NodePtr& shape, Vec target) {
    if (target.i < 1 || target.j < 1 || target.i > 30 || target.j > 30)
        return R::fail("bad extension size");
    if (shape->tag != Tag::Pat || shape->ctor != gs().cRectangle)
        return R::fail("extension requires a rectangle shape");
    auto size = shape_size(shape);
    if (!size) return R::fail(size.error);
    const NodePtr& mask = shape->args[1];
    if (mask->tag == Tag::Pat &&
        (mask->ctor == gs().cFull || mask->ctor == gs().cEvenCheckboard ||
         mask->ctor == gs().cOddCheckboard))
        return R::ok(gs().rectangle(gs().vec(target.i, target.j), mask));
    if (mask->tag == Tag::Pat && mask->ctor == gs().cBorder)
        return R::fail("border mask is not periodic");
    auto b = mask_bitmap_at(mask, *size);
    if (!b) return R::fail(b.error);
    Bitmap nb(target.i, target.j);
    for (int i = 0; i < target.i; ++i)
        for (int j = 0; j < target.j; ++j) nb.set(i, j, b->at(i % b->h, j % b->w));
    return R::ok(gs().rectangle(gs().vec(target.i, target.j), gs().mask_bitmap(std::move(nb))));
}

Result<int> exact_div(int a, int b) {
    if (b == 0) return Result<int>::fail("division by zero");
    if (a % b != 0) return Result<int>::fail("division not exact");
    return Result<int>::ok(a / b);
}

int majority(const Grid& g) {
    std::array<int, kNumColors> counts{};
    for (uint8_t c : g.cells) counts[c % kNumColors]++;
    int best = 0;
    for (int c = 1; c < kNumColors; ++c)
        if (counts[c] > counts[best]) best = c;
    return best;
}

FunctionRegistry build_registry() {
    FunctionRegistry reg;
    const auto& G = gs();
    reg.schema = &G.schema;
    KindId kInt = G.kInt, kVec = G.kVector, kCol = G.kColor, kObj = G.kObject;
    KindId kShape = G.kShape, kLayer = G.kLayer, kRaw = G.kRawGrid, kMask = G.kMask;

    auto int2 = [&](const std::string& name, auto fn, bool ref = true) {
        reg.add({name, {kInt, kInt}, kInt,
                 [fn](Args a) -> R {
                     auto x = gs().as_int(a[0]), y = gs().as_int(a[1]);
                     if (!x || !y) return R::fail("int arguments expected");
                     auto r = fn(*x, *y);
                     if (!r) return R::fail(r.error);
                     return int_result(*r);
                 },
                 ref});
        reg.add({name, {kVec, kVec}, kVec,
                 [fn](Args a) -> R {
                     auto x = gs().as_vec(a[0]), y = gs().as_vec(a[1]);
                     if (!x || !y) return R::fail("vector arguments expected");
                     auto ri = fn(x->i, y->i), rj = fn(x->j, y->j);
                     if (!ri || !rj) return R::fail(ri ? rj.error : ri.error);
                     return vec_result({*ri, *rj});
                 },
                 ref});
    };
    auto ok_int = [](int v) { return Result<int>::ok(v); };

    int2("add", [ok_int](int a, int b) { return ok_int(a + b); });
    int2("sub", [ok_int](int a, int b) { return ok_int(a - b); });
    int2("min", [ok_int](int a, int b) { return ok_int(std::min(a, b)); });
    int2("max", [ok_int](int a, int b) { return ok_int(std::max(a, b)); });
    int2("span", [ok_int](int a, int b) { return ok_int(std::abs(a - b) + 1); });
    int2("average", [](int a, int b) { return exact_div(a + b, 2); });

    // product/division by a small constant; the constant is the second arg
    reg.add({"mul", {kInt, kInt}, kInt, [](Args a) -> R {
                 auto x = gs().as_int(a[0]), k = gs().as_int(a[1]);
                 if (!x || !k) return R::fail("int arguments expected");
                 if (std::abs(*x * *k) > 10000) return R::fail("product overflow");
                 return int_result(*x * *k);
             }});
    reg.add({"mul", {kVec, kInt}, kVec, [](Args a) -> R {
                 auto v = gs().as_vec(a[0]);
                 auto k = gs().as_int(a[1]);
                 if (!v || !k) return R::fail("bad mul arguments");
                 return vec_result({v->i * *k, v->j * *k});
             }});
    reg.add({"div", {kInt, kInt}, kInt, [](Args a) -> R {
                 auto x = gs().as_int(a[0]), k = gs().as_int(a[1]);
                 if (!x || !k) return R::fail("int arguments expected");
                 auto r = exact_div(*x, *k);
                 if (!r) return R::fail(r.error);
                 return int_result(*r);
             }});
    reg.add({"div", {kVec, kInt}, kVec, [](Args a) -> R {
                 auto v = gs().as_vec(a[0]);
                 auto k = gs().as_int(a[1]);
                 if (!v || !k) return R::fail("bad div arguments");
                 auto ri = exact_div(v->i, *k), rj = exact_div(v->j, *k);
                 if (!ri || !rj) return R::fail("division not exact");
                 return vec_result({*ri, *rj});
             }});

    reg.add({"proj_i", {kVec}, kInt, [](Args a) -> R {
                 auto v = gs().as_vec(a[0]);
                 if (!v) return R::fail(v.error);
                 return int_result(v->i);
             }});
    reg.add({"proj_j", {kVec}, kInt, [](Args a) -> R {
                 auto v = gs().as_vec(a[0]);
                 if (!v) return R::fail(v.error);
                 return int_result(v->j);
             }});

    auto size_impl = [](Args a) -> R {
        const NodePtr& x = a[0];
        if (x->kind == gs().kRawGrid) {
            auto g = raw(x);
            if (!g) return R::fail(g.error);
            return vec_result({g->h, g->w});
        }
        NodePtr shape = x;
        if (x->kind == gs().kObject) {
            auto sh = object_shape(x);
            if (!sh) return R::fail(sh.error);
            shape = *sh;
        }
        auto s = shape_size(shape);
        if (!s) return R::fail(s.error);
        return vec_result(*s);
    };
    reg.add({"size", {kObj}, kVec, size_impl});
    reg.add({"size", {kShape}, kVec, size_impl});
    reg.add({"size", {kRaw}, kVec, size_impl});

    auto area_impl = [](Args a) -> R {
        NodePtr shape = a[0];
        if (shape->kind == gs().kObject) {
            auto sh = object_shape(shape);
            if (!sh) return R::fail(sh.error);
            shape = *sh;
        }
        auto cells = shape_cells(gs(), shape);
        if (!cells) return R::fail(cells.error);
        return int_result(int(cells->second.size()));
    };
    reg.add({"area", {kObj}, kInt, area_impl});
    reg.add({"area", {kShape}, kInt, area_impl});

    reg.add({"pos_min", {kLayer}, kVec, [](Args a) -> R {
                 auto li = layer_info(a[0]);
                 if (!li) return R::fail(li.error);
                 return vec_result(li->pos);
             }});
    reg.add({"pos_max", {kLayer}, kVec, [](Args a) -> R {
                 auto li = layer_info(a[0]);
                 if (!li) return R::fail(li.error);
                 return vec_result({li->pos.i + li->size.i - 1, li->pos.j + li->size.j - 1});
             }});
    reg.add({"pos_mid", {kLayer}, kVec,
             [](Args a) -> R {
                 auto li = layer_info(a[0]);
                 if (!li) return R::fail(li.error);
                 auto mi = exact_div(2 * li->pos.i + li->size.i - 1, 2);
                 auto mj = exact_div(2 * li->pos.j + li->size.j - 1, 2);
                 if (!mi || !mj) return R::fail("median position not integral");
                 return vec_result({*mi, *mj});
             },
             /*reference_set=*/false});

    reg.add({"strip", {kRaw}, kRaw, [](Args a) -> R {
                 auto g = raw(a[0]);
                 if (!g) return R::fail(g.error);
                 int bg = majority(*g);
                 int i0 = g->h, j0 = g->w, i1 = -1, j1 = -1;
                 for (int i = 0; i < g->h; ++i)
                     for (int j = 0; j < g->w; ++j)
                         if (g->at(i, j) != bg) {
                             i0 = std::min(i0, i);
                             j0 = std::min(j0, j);
                             i1 = std::max(i1, i);
                             j1 = std::max(j1, j);
                         }
                 if (i1 < 0) return R::fail("nothing to strip");
                 Grid out(i1 - i0 + 1, j1 - j0 + 1);
                 for (int i = 0; i < out.h; ++i)
                     for (int j = 0; j < out.w; ++j) out.set(i, j, g->at(i0 + i, j0 + j));
                 return R::ok(gs().raw_grid(std::move(out)));
             }});

    reg.add({"crop", {kRaw, kLayer}, kRaw, [](Args a) -> R {
                 auto g = raw(a[0]);
                 auto li = layer_info(a[1]);
                 if (!g || !li) return R::fail(g ? li.error : g.error);
                 Vec pos = li->pos, size = li->size;
                 auto sh = object_shape(li->object);
                 // a frame (border mask) crops to its interior
                 if (sh && (*sh)->ctor == gs().cRectangle) {
                     const NodePtr& mask = (*sh)->args[1];
                     if (mask->tag == Tag::Pat && mask->ctor == gs().cBorder) {
                         pos = {pos.i + 1, pos.j + 1};
                         size = {size.i - 2, size.j - 2};
                     }
                 }
                 if (size.i < 1 || size.j < 1) return R::fail("empty crop");
                 if (pos.i < 0 || pos.j < 0 || pos.i + size.i > g->h || pos.j + size.j > g->w)
                     return R::fail("crop out of bounds");
                 Grid out(size.i, size.j);
                 for (int i = 0; i < size.i; ++i)
                     for (int j = 0; j < size.j; ++j) out.set(i, j, g->at(pos.i + i, pos.j + j));
                 return R::ok(gs().raw_grid(std::move(out)));
             }});

    reg.add({"translation", {kLayer, kLayer}, kVec, [](Args a) -> R {
                 auto x = layer_info(a[0]), y = layer_info(a[1]);
                 if (!x || !y) return R::fail("layer arguments expected");
                 return vec_result(y->pos - x->pos);
             }});

    auto scale_by_impl = [](Args a) -> R {
        auto k = gs().as_int(a[1]);
        if (!k) return R::fail(k.error);
        return scale_value(a[0], {*k, *k});
    };
    reg.add({"scale_by", {kShape, kInt}, kShape, scale_by_impl});
    reg.add({"scale_by", {kObj, kInt}, kObj, scale_by_impl});
    reg.add({"scale_by", {kRaw, kInt}, kRaw, scale_by_impl});

    auto scale_to_impl = [](Args a) -> R {
        auto t = gs().as_vec(a[1]);
        if (!t) return R::fail(t.error);
        NodePtr x = a[0];
        auto cur = (x->kind == gs().kObject)
                       ? [&]() -> Result<Vec> {
                             auto sh = object_shape(x);
                             if (!sh) return Result<Vec>::fail(sh.error);
                             return shape_size(*sh);
                         }()
                       : shape_size(x);
        if (!cur) return R::fail(cur.error);
        auto fi = exact_div(t->i, cur->i), fj = exact_div(t->j, cur->j);
        if (!fi || !fj || *fi < 1 || *fj < 1) return R::fail("scaling not exact");
        return scale_value(x, {*fi, *fj});
    };
    reg.add({"scale_to", {kShape, kVec}, kShape, scale_to_impl});
    reg.add({"scale_to", {kObj, kVec}, kObj, scale_to_impl});

    auto extend_impl = [](Args a) -> R {
        auto t = gs().as_vec(a[1]);
        if (!t) return R::fail(t.error);
        if (a[0]->kind == gs().kObject) {
            auto sh = object_shape(a[0]);
            if (!sh) return R::fail(sh.error);
            auto ns = extend_shape(*sh, *t);
            if (!ns) return ns;
            return R::ok(gs().colored(*ns, a[0]->args[1]));
        }
        return extend_shape(a[0], *t);
    };
    reg.add({"extend", {kShape, kVec}, kShape, extend_impl});
    reg.add({"extend", {kObj, kVec}, kObj, extend_impl});

    reg.add({"tile", {kRaw, kVec}, kRaw, [](Args a) -> R {
                 auto g = raw(a[0]);
                 auto k = gs().as_vec(a[1]);
                 if (!g || !k) return R::fail("bad tile arguments");
                 if (k->i < 1 || k->j < 1) return R::fail("tile factors must be positive");
                 if (g->h * k->i > 30 || g->w * k->j > 30) return R::fail("tiling exceeds grid bounds");
                 Grid out(g->h * k->i, g->w * k->j);
                 for (int i = 0; i < out.h; ++i)
                     for (int j = 0; j < out.w; ++j) out.set(i, j, g->at(i % g->h, j % g->w));
                 return R::ok(gs().raw_grid(std::move(out)));
             }});

    auto add_sym = [&](const std::string& name, Sym s) {
        auto impl = [s](Args a) -> R { return apply_sym(s, a[0]); };
        reg.add({name, {kRaw}, kRaw, impl});
        reg.add({name, {kShape}, kShape, impl});
        reg.add({name, {kObj}, kObj, impl});
    };
    add_sym("flip_h", Sym::FlipH);
    add_sym("flip_v", Sym::FlipV);
    add_sym("rot90", Sym::Rot90);
    add_sym("rot180", Sym::Rot180);

    reg.add({"coloring", {kObj, kCol}, kObj, [](Args a) -> R {
                 auto sh = object_shape(a[0]);
                 if (!sh) return R::fail(sh.error);
                 return R::ok(gs().colored(*sh, a[1]));
             }});

    reg.add({"swap_colors", {kRaw, kCol, kCol}, kRaw, [](Args a) -> R {
                 auto g = raw(a[0]);
                 auto c1 = gs().as_color(a[1]), c2 = gs().as_color(a[2]);
                 if (!g || !c1 || !c2) return R::fail("bad swap_colors arguments");
                 Grid out = *g;
                 for (auto& c : out.cells) {
                     if (c == c1->v)
                         c = c2->v;
                     else if (c == c2->v)
                         c = c1->v;
                 }
                 return R::ok(gs().raw_grid(std::move(out)));
             }});

    reg.add({"color_count", {kRaw, kCol}, kInt,
             [](Args a) -> R {
                 auto g = raw(a[0]);
                 auto c = gs().as_color(a[1]);
                 if (!g || !c) return R::fail("bad color_count arguments");
                 int n = 0;
                 for (uint8_t x : g->cells) n += x == c->v;
                 return int_result(n);
             },
             /*reference_set=*/false});

    reg.add({"majority_color", {kRaw}, kCol, [](Args a) -> R {
                 auto g = raw(a[0]);
                 if (!g) return R::fail(g.error);
                 return R::ok(gs().color(majority(*g)));
             }});

    auto mask_op = [&](const std::string& name, auto fn, bool ref) {
        reg.add({name, {kMask, kMask}, kMask,
                 [fn](Args a) -> R {
                     const Bitmap* b1 = nullptr;
                     const Bitmap* b2 = nullptr;
                     auto t1 = mask_tag_of(gs(), a[0], &b1);
                     auto t2 = mask_tag_of(gs(), a[1], &b2);
                     if (!t1 || !t2 || *t1 != MaskTag::Bitmap || *t2 != MaskTag::Bitmap)
                         return R::fail("mask operations need bitmap masks");
                     if (b1->h != b2->h || b1->w != b2->w) return R::fail("mask size mismatch");
                     Bitmap out(b1->h, b1->w);
                     for (size_t i = 0; i < out.bits.size(); ++i)
                         out.bits[i] = fn(b1->bits[i], b2->bits[i]);
                     return R::ok(gs().mask_bitmap(std::move(out)));
                 },
                 ref});
    };
    mask_op("mask_and", [](uint8_t a, uint8_t b) { return uint8_t(a & b); }, true);
    mask_op("mask_or", [](uint8_t a, uint8_t b) { return uint8_t(a | b); }, true);
    mask_op("mask_xor", [](uint8_t a, uint8_t b) { return uint8_t(a ^ b); }, false);

    return reg;
}

} // namespace

const FunctionRegistry& grid_functions() {
    static const FunctionRegistry reg = build_registry();
    return reg;
}

} // namespace mdli
