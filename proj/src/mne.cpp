#include "tilesds/mne.hpp"

#include <stdexcept>
#include <string>

namespace tilesds {

namespace {

const Region& checked_tile(const TilingPlan& plan, int tile_index) {
    if (tile_index < 0 || tile_index >= plan.tile_count()) {
        throw std::out_of_range("tile index " + std::to_string(tile_index) +
                                " outside plan with " +
                                std::to_string(plan.tile_count()) + " tiles");
    }
    return plan.tiles[static_cast<std::size_t>(tile_index)];
}

}  // namespace

LatentGrid estimate_tile(const NoiseEstimator& estimator, const LatentGrid& noisy,
                         const TilingPlan& plan, int tile_index,
                         const EstimatorContext& ctx) {
    const Region& region = checked_tile(plan, tile_index);
    if (plan.grid_height != noisy.height() || plan.grid_width != noisy.width()) {
        throw std::invalid_argument("estimate_tile: plan does not match grid");
    }
    const LatentGrid tile = crop(noisy, region);
    LatentGrid estimate;
    try {
        estimate = estimator.estimate(tile, ctx);
    } catch (const std::exception& e) {
        throw std::runtime_error("estimator failed on tile " +
                                 std::to_string(tile_index) + ": " + e.what());
    }
    if (!estimate.same_shape(tile)) {
        throw std::runtime_error("estimator returned wrong shape on tile " +
                                 std::to_string(tile_index));
    }
    return estimate;
}

void accumulate(EstimateAccumulator& acc, WeightMap& weights,
                const TilingPlan& plan, int tile_index,
                const LatentGrid& estimate) {
    const Region& region = checked_tile(plan, tile_index);
    if (estimate.height() != region.size || estimate.width() != region.size ||
        estimate.channels() != acc.sum.channels()) {
        throw std::invalid_argument("accumulate: estimate shape mismatch");
    }
    paste_add(acc.sum, region, estimate);
    for (int r = region.top; r < region.top + region.size; ++r) {
        for (int c = region.left; c < region.left + region.size; ++c) {
            for (int ch = 0; ch < weights.counts.channels(); ++ch) {
                weights.counts.at(r, c, ch) += 1.0;
            }
        }
    }
}

LatentGrid consolidate(const LatentGrid& noisy, const NoiseEstimator& estimator,
                       const TilingPlan& plan, const EstimatorContext& ctx) {
    if (plan.grid_height != noisy.height() || plan.grid_width != noisy.width()) {
        throw std::invalid_argument("consolidate: plan does not match grid");
    }
    EstimateAccumulator acc(noisy.height(), noisy.width(), noisy.channels());
    WeightMap weights(noisy.height(), noisy.width(), noisy.channels());
    for (int m = 0; m < plan.tile_count(); ++m) {
        accumulate(acc, weights, plan, m,
                   estimate_tile(estimator, noisy, plan, m, ctx));
    }
    return elementwise_div(acc.sum, weights.counts);
}

}  // namespace tilesds
