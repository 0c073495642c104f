#pragma once

#include "mdli/values.hpp"

namespace mdli {

// Writes the grid as an RGB PNG using the canonical ARC palette, `scale`
// pixels per cell.
Result<bool> write_png(const std::string& path, const Grid& g, int scale = 16);

} // namespace mdli
