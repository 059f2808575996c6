#pragma once

#include <vector>

#include "tilesds/grid.hpp"

namespace tilesds {

// Ordered tiling of an H x W grid by a square sliding window: every tile has
// side exactly `window`, consecutive anchors are `stride` apart, and tiles are
// listed in row-major order of their top-left corners. Construction guarantees
// every pixel is covered by at least one tile. Immutable once built.
struct TilingPlan {
    int grid_height = 0;
    int grid_width = 0;
    int window = 0;
    int stride = 0;
    std::vector<Region> tiles;

    int tile_count() const { return static_cast<int>(tiles.size()); }
};

// Top-left offsets along one axis: candidates 0, s, 2s, ...; the first
// candidate that would overflow (p + window > dim) is replaced by the single
// clamped offset dim - window. Offsets are sorted and duplicate-free.
std::vector<int> axis_offsets(int dim, int window, int stride);

// Builds the plan. Rejects window > min(height, width) and any combination
// whose offsets leave a coverage hole (possible only when stride > window).
TilingPlan plan_tiles(int height, int width, int window, int stride);

}  // namespace tilesds
