#include "mdli/grid_ops.hpp"

#include <algorithm>

namespace mdli {

GridSchema::GridSchema() {
    kGrid = schema.add_kind("Grid");
    kLayer = schema.add_kind("Layer");
    kObject = schema.add_kind("Object");
    kShape = schema.add_kind("Shape");
    kMask = schema.add_kind("Mask");
    kVector = schema.add_kind("Vector");
    kInt = schema.add_kind("Int", true);
    kColor = schema.add_kind("Color", true);
    kBitmap = schema.add_kind("Bitmap", true);
    kRawGrid = schema.add_kind("RawGrid", true);
    // a raw grid value is accepted wherever a grid is expected
    schema.subkinds.push_back({kGrid, kRawGrid});

    cLayers = schema.add_ctor({.name = "Layers",
                               .result = kGrid,
                               .fields = {{"size", kVector}, {"color", kColor}},
                               .variadic = true,
                               .list_field = "lay",
                               .list_kind = kLayer});
    cTiling = schema.add_ctor({.name = "Tiling",
                               .result = kGrid,
                               .fields = {{"grid", kGrid}, {"size", kVector}}});
    cLayer = schema.add_ctor({.name = "Layer",
                              .result = kLayer,
                              .fields = {{"pos", kVector}, {"object", kObject}}});
    cColored = schema.add_ctor({.name = "Colored",
                                .result = kObject,
                                .fields = {{"shape", kShape}, {"color", kColor}}});
    cPoint = schema.add_ctor({.name = "Point", .result = kShape});
    cRectangle = schema.add_ctor({.name = "Rectangle",
                                  .result = kShape,
                                  .fields = {{"size", kVector}, {"mask", kMask}}});
    // Two-level mask coding: bitmap vs named, then uniform among the named
    // masks. Registered masks can grow without touching the coder.
    cBitmapMask = schema.add_ctor({.name = "Bitmap",
                                   .result = kMask,
                                   .fields = {{"bitmap", kBitmap}},
                                   .weight = 4.0});
    cFull = schema.add_ctor({.name = "Full", .result = kMask});
    cBorder = schema.add_ctor({.name = "Border", .result = kMask});
    cEvenCheckboard = schema.add_ctor({.name = "EvenCheckboard", .result = kMask});
    cOddCheckboard = schema.add_ctor({.name = "OddCheckboard", .result = kMask});
    cVec = schema.add_ctor({.name = "Vec",
                            .result = kVector,
                            .fields = {{"i", kInt}, {"j", kInt}}});
}

Result<Vec> GridSchema::as_vec(const NodePtr& n) const {
    if (n->tag != Tag::Pat || n->ctor != cVec) return Result<Vec>::fail("not a Vec");
    auto i = as_int(n->args[0]);
    auto j = as_int(n->args[1]);
    if (!i || !j) return Result<Vec>::fail("Vec components not ground");
    return Result<Vec>::ok(Vec{*i, *j});
}

Result<int> GridSchema::as_int(const NodePtr& n) const {
    if (n->tag != Tag::Val || !std::holds_alternative<int>(n->val))
        return Result<int>::fail("not an int value");
    return Result<int>::ok(std::get<int>(n->val));
}

Result<Color> GridSchema::as_color(const NodePtr& n) const {
    if (n->tag != Tag::Val || !std::holds_alternative<Color>(n->val))
        return Result<Color>::fail("not a color value");
    return Result<Color>::ok(std::get<Color>(n->val));
}

std::string GridSchema::print_value(const Value& v, KindId) const {
    return value_to_string(v);
}

NodePrinter GridSchema::printer() const {
    return NodePrinter{&schema,
                       [this](const Value& v, KindId k) { return print_value(v, k); },
                       nullptr};
}

const GridSchema& grid_schema() {
    static const GridSchema s;
    return s;
}

std::vector<GridPart> segment_grid(const Grid& g, std::optional<Color> background) {
    std::vector<GridPart> parts;
    std::vector<uint8_t> seen(size_t(g.h) * g.w, 0);
    std::vector<Vec> stack;
    for (int i = 0; i < g.h; ++i) {
        for (int j = 0; j < g.w; ++j) {
            if (seen[size_t(i) * g.w + j]) continue;
            uint8_t c = g.at(i, j);
            if (background && background->v == c) {
                seen[size_t(i) * g.w + j] = 1;
                continue;
            }
            GridPart part;
            part.color = Color{c};
            stack.assign(1, Vec{i, j});
            seen[size_t(i) * g.w + j] = 1;
            Vec lo{i, j}, hi{i, j};
            while (!stack.empty()) {
                Vec p = stack.back();
                stack.pop_back();
                part.cells.push_back(p);
                lo.i = std::min(lo.i, p.i);
                lo.j = std::min(lo.j, p.j);
                hi.i = std::max(hi.i, p.i);
                hi.j = std::max(hi.j, p.j);
                const Vec nbrs[4] = {{p.i - 1, p.j}, {p.i + 1, p.j}, {p.i, p.j - 1}, {p.i, p.j + 1}};
                for (Vec q : nbrs) {
                    if (!g.in_bounds(q.i, q.j)) continue;
                    if (seen[size_t(q.i) * g.w + q.j]) continue;
                    if (g.at(q.i, q.j) != c) continue;
                    seen[size_t(q.i) * g.w + q.j] = 1;
                    stack.push_back(q);
                }
            }
            std::sort(part.cells.begin(), part.cells.end());
            part.bbox_pos = lo;
            part.bbox_size = {hi.i - lo.i + 1, hi.j - lo.j + 1};
            part.bbox_bitmap = Bitmap(part.bbox_size.i, part.bbox_size.j);
            for (Vec p : part.cells) part.bbox_bitmap.set(p.i - lo.i, p.j - lo.j, 1);
            parts.push_back(std::move(part));
        }
    }
    // scan order of the first cell
    std::sort(parts.begin(), parts.end(), [](const GridPart& a, const GridPart& b) {
        return a.cells.front() < b.cells.front();
    });
    return parts;
}

Result<bool> mask_member(MaskTag mask, const Bitmap* bitmap, Vec size, int i, int j) {
    if (i < 0 || j < 0 || i >= size.i || j >= size.j)
        return Result<bool>::fail("mask coordinates out of range");
    switch (mask) {
        case MaskTag::Bitmap:
            if (!bitmap || bitmap->h != size.i || bitmap->w != size.j)
                return Result<bool>::fail("bitmap size mismatch");
            return Result<bool>::ok(bitmap->at(i, j) != 0);
        case MaskTag::Full: return Result<bool>::ok(true);
        case MaskTag::Border:
            return Result<bool>::ok(i == 0 || j == 0 || i == size.i - 1 || j == size.j - 1);
        case MaskTag::EvenCheckboard: return Result<bool>::ok((i + j) % 2 == 0);
        case MaskTag::OddCheckboard: return Result<bool>::ok((i + j) % 2 == 1);
    }
    return Result<bool>::fail("unknown mask");
}

Result<MaskTag> mask_tag_of(const GridSchema& gs, const NodePtr& mask, const Bitmap** bitmap) {
    *bitmap = nullptr;
    if (mask->tag != Tag::Pat) return Result<MaskTag>::fail("ungrounded mask");
    if (mask->ctor == gs.cFull) return Result<MaskTag>::ok(MaskTag::Full);
    if (mask->ctor == gs.cBorder) return Result<MaskTag>::ok(MaskTag::Border);
    if (mask->ctor == gs.cEvenCheckboard) return Result<MaskTag>::ok(MaskTag::EvenCheckboard);
    if (mask->ctor == gs.cOddCheckboard) return Result<MaskTag>::ok(MaskTag::OddCheckboard);
    if (mask->ctor == gs.cBitmapMask) {
        const auto& arg = mask->args[0];
        if (arg->tag != Tag::Val || !std::holds_alternative<Bitmap>(arg->val))
            return Result<MaskTag>::fail("ungrounded bitmap");
        *bitmap = &std::get<Bitmap>(arg->val);
        return Result<MaskTag>::ok(MaskTag::Bitmap);
    }
    return Result<MaskTag>::fail("unknown mask constructor");
}

// Cells of a shape relative to its own top-left corner, plus its size.
Result<std::pair<Vec, std::vector<Vec>>> shape_cells(const GridSchema& gs, const NodePtr& shape) {
    using R = Result<std::pair<Vec, std::vector<Vec>>>;
    if (shape->tag != Tag::Pat) return R::fail("ungrounded shape");
    if (shape->ctor == gs.cPoint) return R::ok({Vec{1, 1}, {Vec{0, 0}}});
    if (shape->ctor != gs.cRectangle) return R::fail("unknown shape constructor");
    auto size = gs.as_vec(shape->args[0]);
    if (!size) return R::fail("ungrounded description");
    if (size->i <= 0 || size->j <= 0) return R::fail("degenerate grid");
    const Bitmap* bmp = nullptr;
    auto tag = mask_tag_of(gs, shape->args[1], &bmp);
    if (!tag) return R::fail(tag.error);
    std::vector<Vec> cells;
    for (int i = 0; i < size->i; ++i)
        for (int j = 0; j < size->j; ++j) {
            auto m = mask_member(*tag, bmp, *size, i, j);
            if (!m) return R::fail(m.error);
            if (*m) cells.push_back({i, j});
        }
    return R::ok({*size, std::move(cells)});
}

Result<RenderOut> render(const NodePtr& desc) {
    const auto& gs = grid_schema();
    if (desc->tag == Tag::Val && std::holds_alternative<Grid>(desc->val)) {
        const Grid& g = std::get<Grid>(desc->val);
        if (g.h <= 0 || g.w <= 0) return Result<RenderOut>::fail("degenerate grid");
        return Result<RenderOut>::ok(RenderOut{g, 0});
    }
    if (desc->tag != Tag::Pat) return Result<RenderOut>::fail("ungrounded description");
    if (desc->ctor == gs.cTiling) {
        auto inner = render(desc->args[0]);
        if (!inner) return inner;
        auto size = gs.as_vec(desc->args[1]);
        if (!size) return Result<RenderOut>::fail("ungrounded description");
        if (size->i <= 0 || size->j <= 0) return Result<RenderOut>::fail("degenerate grid");
        Grid out(size->i, size->j);
        const Grid& in = inner->grid;
        for (int i = 0; i < out.h; ++i)
            for (int j = 0; j < out.w; ++j) out.set(i, j, in.at(i % in.h, j % in.w));
        return Result<RenderOut>::ok(RenderOut{std::move(out), inner->clipped});
    }
    if (desc->ctor != gs.cLayers) return Result<RenderOut>::fail("not a grid description");
    auto size = gs.as_vec(desc->args[0]);
    auto bg = gs.as_color(desc->args[1]);
    if (!size || !bg) return Result<RenderOut>::fail("ungrounded description");
    if (size->i <= 0 || size->j <= 0) return Result<RenderOut>::fail("degenerate grid");
    RenderOut out{Grid(size->i, size->j, bg->v), 0};
    // last list element first, so lay[0] ends up topmost
    for (int li = int(desc->args.size()) - 1; li >= 2; --li) {
        const auto& layer = desc->args[size_t(li)];
        if (layer->tag != Tag::Pat || layer->ctor != gs.cLayer)
            return Result<RenderOut>::fail("ungrounded description");
        auto pos = gs.as_vec(layer->args[0]);
        const auto& object = layer->args[1];
        if (!pos || object->tag != Tag::Pat || object->ctor != gs.cColored)
            return Result<RenderOut>::fail("ungrounded description");
        auto cells = shape_cells(gs, object->args[0]);
        auto col = gs.as_color(object->args[1]);
        if (!cells || !col) return Result<RenderOut>::fail(cells ? col.error : cells.error);
        for (Vec rel : cells->second) {
            int i = pos->i + rel.i, j = pos->j + rel.j;
            if (out.grid.in_bounds(i, j))
                out.grid.set(i, j, col->v);
            else
                ++out.clipped;
        }
    }
    return Result<RenderOut>::ok(std::move(out));
}

Result<std::vector<CellDelta>> grid_diff(const Grid& g, const NodePtr& pi) {
    auto r = render(pi);
    if (!r) return Result<std::vector<CellDelta>>::fail(r.error);
    const Grid& p = r->grid;
    std::vector<CellDelta> deltas;
    int H = std::max(g.h, p.h), W = std::max(g.w, p.w);
    for (int i = 0; i < H; ++i)
        for (int j = 0; j < W; ++j) {
            bool ing = g.in_bounds(i, j), inp = p.in_bounds(i, j);
            if (ing && inp) {
                if (g.at(i, j) != p.at(i, j)) deltas.push_back({{i, j}, Color{g.at(i, j)}});
            } else if (ing) {
                deltas.push_back({{i, j}, Color{g.at(i, j)}});
            } else if (inp) {
                deltas.push_back({{i, j}, Color{p.at(i, j)}});
            }
        }
    return Result<std::vector<CellDelta>>::ok(std::move(deltas));
}

std::string grid_ascii(const Grid& g) {
    std::string s;
    s.reserve(size_t(g.h) * (g.w + 1));
    for (int i = 0; i < g.h; ++i) {
        for (int j = 0; j < g.w; ++j) s += char('0' + g.at(i, j));
        s += '\n';
    }
    return s;
}

} // namespace mdli
