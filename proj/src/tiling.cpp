#include "tilesds/tiling.hpp"

#include <stdexcept>
#include <string>

namespace tilesds {

std::vector<int> axis_offsets(int dim, int window, int stride) {
    if (window <= 0 || window > dim) {
        throw std::invalid_argument("axis_offsets: window must be in [1, dim]");
    }
    if (stride < 1) throw std::invalid_argument("axis_offsets: stride must be >= 1");

    std::vector<int> offsets;
    for (int p = 0;; p += stride) {
        if (p + window >= dim) {
            // Clamp the final offset so the last tile ends flush with the
            // grid edge, keeping the window size unchanged.
            if (offsets.empty() || offsets.back() != dim - window) {
                offsets.push_back(dim - window);
            }
            break;
        }
        offsets.push_back(p);
    }

    // A hole can only open when stride > window; fail instead of producing a
    // plan whose weight map would contain zeros.
    for (std::size_t i = 1; i < offsets.size(); ++i) {
        if (offsets[i] > offsets[i - 1] + window) {
            throw std::invalid_argument(
                "axis_offsets: stride " + std::to_string(stride) +
                " leaves uncovered pixels between offsets " +
                std::to_string(offsets[i - 1]) + " and " + std::to_string(offsets[i]));
        }
    }
    return offsets;
}

TilingPlan plan_tiles(int height, int width, int window, int stride) {
    const std::vector<int> rows = axis_offsets(height, window, stride);
    const std::vector<int> cols = axis_offsets(width, window, stride);

    TilingPlan plan;
    plan.grid_height = height;
    plan.grid_width = width;
    plan.window = window;
    plan.stride = stride;
    plan.tiles.reserve(rows.size() * cols.size());
    for (int top : rows) {
        for (int left : cols) {
            plan.tiles.push_back(Region{top, left, window});
        }
    }
    return plan;
}

}  // namespace tilesds
