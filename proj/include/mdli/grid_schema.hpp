#pragma once

#include "mdli/node.hpp"
#include "mdli/schema.hpp"

namespace mdli {

// Typed vocabulary of the grid domain. Kind and constructor ids are fixed at
// construction; use grid_schema() for the shared instance.
struct GridSchema {
    Schema schema;

    KindId kGrid, kLayer, kObject, kShape, kMask, kVector, kInt, kColor, kBitmap, kRawGrid;
    CtorId cLayers, cTiling, cLayer, cColored, cPoint, cRectangle;
    CtorId cBitmapMask, cFull, cBorder, cEvenCheckboard, cOddCheckboard;
    CtorId cVec;

    GridSchema();

    NodePtr vec(int i, int j) const {
        return make_pat(schema, cVec,
                        {make_val(kInt, i), make_val(kInt, j)});
    }
    NodePtr color(int c) const { return make_val(kColor, Color{uint8_t(c)}); }
    NodePtr raw_grid(Grid g) const { return make_val(kRawGrid, std::move(g)); }
    NodePtr point() const { return make_pat(schema, cPoint, {}); }
    NodePtr mask_named(CtorId m) const { return make_pat(schema, m, {}); }
    NodePtr mask_bitmap(Bitmap b) const {
        return make_pat(schema, cBitmapMask, {make_val(kBitmap, std::move(b))});
    }
    NodePtr rectangle(NodePtr size, NodePtr mask) const {
        return make_pat(schema, cRectangle, {std::move(size), std::move(mask)});
    }
    NodePtr colored(NodePtr shape, NodePtr color) const {
        return make_pat(schema, cColored, {std::move(shape), std::move(color)});
    }
    NodePtr layer(NodePtr pos, NodePtr object) const {
        return make_pat(schema, cLayer, {std::move(pos), std::move(object)});
    }
    NodePtr layers(NodePtr size, NodePtr color, std::vector<NodePtr> lay) const {
        std::vector<NodePtr> args{std::move(size), std::move(color)};
        for (auto& l : lay) args.push_back(std::move(l));
        return make_pat(schema, cLayers, std::move(args));
    }
    NodePtr tiling(NodePtr grid, NodePtr size) const {
        return make_pat(schema, cTiling, {std::move(grid), std::move(size)});
    }

    // Extracts a concrete Vec from a ground Vec(i,j) pattern or fails.
    Result<Vec> as_vec(const NodePtr& n) const;
    Result<int> as_int(const NodePtr& n) const;
    Result<Color> as_color(const NodePtr& n) const;

    std::string print_value(const Value& v, KindId kind) const;
    NodePrinter printer() const;
};

const GridSchema& grid_schema();

} // namespace mdli
