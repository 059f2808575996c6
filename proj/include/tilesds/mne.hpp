#pragma once

#include "tilesds/estimator.hpp"
#include "tilesds/grid.hpp"
#include "tilesds/tiling.hpp"

namespace tilesds {

// Running sum of per-tile estimates, pasted additively at their tile regions.
struct EstimateAccumulator {
    LatentGrid sum;

    EstimateAccumulator(int height, int width, int channels)
        : sum(height, width, channels) {}
};

// Per-pixel count of tiles accumulated so far. After a full pass over a plan
// every entry equals the number of tiles covering that pixel (and is >= 1).
struct WeightMap {
    LatentGrid counts;

    WeightMap(int height, int width, int channels)
        : counts(height, width, channels) {}
};

// Crops tile `tile_index` (0-based) out of the noisy latent and runs the
// estimator on exactly that window-sized tensor; the estimator never sees
// anything larger. Estimator failures are rethrown with the tile index.
LatentGrid estimate_tile(const NoiseEstimator& estimator, const LatentGrid& noisy,
                         const TilingPlan& plan, int tile_index,
                         const EstimatorContext& ctx);

// Adds the estimate into the accumulator at tile `tile_index` and bumps the
// weight map by one over the same region.
void accumulate(EstimateAccumulator& acc, WeightMap& weights,
                const TilingPlan& plan, int tile_index,
                const LatentGrid& estimate);

// The consolidation pass: zero-initialized sums and counts, one
// estimate/accumulate per tile committed in plan order, then the pixel-wise
// average sum / counts. Output at a pixel is the arithmetic mean of the
// estimates of all tiles covering it.
LatentGrid consolidate(const LatentGrid& noisy, const NoiseEstimator& estimator,
                       const TilingPlan& plan, const EstimatorContext& ctx);

}  // namespace tilesds
