#pragma once

#include <optional>

#include "mdli/grid_schema.hpp"

namespace mdli {

// Maximal 4-connected single-color component of a grid.
struct GridPart {
    Color color;
    std::vector<Vec> cells;   // scan order
    Vec bbox_pos;             // top-left of the tight bounding box
    Vec bbox_size;
    Bitmap bbox_bitmap;       // part cells within the bounding box
};

// All maximal 4-connected single-color parts, excluding cells of the
// background color when given. Parts are ordered by the scan order of their
// first (topmost-leftmost) cell.
std::vector<GridPart> segment_grid(const Grid& g, std::optional<Color> background);

enum class MaskTag { Bitmap, Full, Border, EvenCheckboard, OddCheckboard };

// Membership of cell (i,j) in a mask of the given size. (i,j) must be within
// 0..size-1; the bitmap variant must match the size.
Result<bool> mask_member(MaskTag mask, const Bitmap* bitmap, Vec size, int i, int j);

// Classifies a ground mask node; for bitmap masks, *bitmap points into the node.
Result<MaskTag> mask_tag_of(const GridSchema& gs, const NodePtr& mask, const Bitmap** bitmap);

// Cells of a ground shape relative to its top-left corner, with its size.
Result<std::pair<Vec, std::vector<Vec>>> shape_cells(const GridSchema& gs, const NodePtr& shape);

struct RenderOut {
    Grid grid;
    int clipped = 0;  // object cells falling outside the grid
};

// Converts a fully grounded grid description into a concrete grid.
// Layers paint from the last list element to the first, so lay[0] is topmost.
Result<RenderOut> render(const NodePtr& desc);

// Cell where the rendered description disagrees with the reference grid.
struct CellDelta {
    Vec pos;
    Color color;
    bool operator==(const CellDelta&) const = default;
};

// Deltas over the union extent of g and render(pi): mismatched cells, cells
// of g not covered by the rendering, and rendered cells outside g. Positions
// outside g carry the rendered color.
Result<std::vector<CellDelta>> grid_diff(const Grid& g, const NodePtr& pi);

std::string grid_ascii(const Grid& g);

} // namespace mdli
