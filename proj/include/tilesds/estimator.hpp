#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tilesds/diffusion.hpp"
#include "tilesds/grid.hpp"

namespace tilesds {

// Everything an estimator is allowed to see besides the tile itself: the
// diffusion timestep and an opaque condition token. No global position.
struct EstimatorContext {
    int timestep = 1;
    std::string condition;
};

// Per-tile noise estimator. Implementations must be pure (identical tile and
// context give identical output), shape-preserving, and safe for concurrent
// calls on distinct tiles.
class NoiseEstimator {
public:
    virtual ~NoiseEstimator() = default;

    virtual LatentGrid estimate(const LatentGrid& tile,
                                const EstimatorContext& ctx) const = 0;

    // Name plus parameter summary, for logs and manifests.
    virtual std::string describe() const = 0;
};

// Ignores its input and returns a tile filled with `value`.
std::shared_ptr<NoiseEstimator> constant_estimator(double value);

// Closed-form optimal denoiser for a spatially uniform Gaussian prior
// N(mean, I): estimate(x) = (x - sqrt(alpha_bar[t]) * mean) /
// sqrt(1 - alpha_bar[t]). Pointwise, so tiled and full-grid runs agree.
std::shared_ptr<NoiseEstimator> gaussian_prior_estimator(
    double mean, DiffusionSchedule schedule);

// Per-channel box blur with the window clamped to the tile (averages over the
// valid intersection). Its (2r+1)-wide receptive field makes tile-boundary
// artifacts visible, which is exactly what the seam experiments need.
std::shared_ptr<NoiseEstimator> box_blur_estimator(int radius);

struct SpyRecord {
    int height = 0;
    int width = 0;
    int channels = 0;
    // FNV-1a over the tile bytes; lets tests match calls to plan tiles
    // without giving the estimator any positional information.
    std::uint64_t content_hash = 0;
};

std::uint64_t grid_content_hash(const LatentGrid& grid);

// Delegates to an inner estimator while recording the shape of every input it
// sees. Appends are synchronized so concurrent tile calls stay safe.
class SpyEstimator : public NoiseEstimator {
public:
    explicit SpyEstimator(std::shared_ptr<const NoiseEstimator> inner);

    LatentGrid estimate(const LatentGrid& tile,
                        const EstimatorContext& ctx) const override;
    std::string describe() const override;

    std::vector<SpyRecord> records() const;
    int call_count() const;
    void reset();

private:
    std::shared_ptr<const NoiseEstimator> inner_;
    mutable std::mutex mutex_;
    mutable std::vector<SpyRecord> records_;
};

}  // namespace tilesds
