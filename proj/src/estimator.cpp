#include "tilesds/estimator.hpp"

#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tilesds {

namespace {

class ConstantEstimator final : public NoiseEstimator {
public:
    explicit ConstantEstimator(double value) : value_(value) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("constant_estimator: value must be finite");
        }
    }

    LatentGrid estimate(const LatentGrid& tile,
                        const EstimatorContext&) const override {
        return LatentGrid(tile.height(), tile.width(), tile.channels(), value_);
    }

    std::string describe() const override {
        std::ostringstream oss;
        oss << "constant(c=" << value_ << ")";
        return oss.str();
    }

private:
    double value_;
};

class GaussianPriorEstimator final : public NoiseEstimator {
public:
    GaussianPriorEstimator(double mean, DiffusionSchedule schedule)
        : mean_(mean), schedule_(std::move(schedule)) {
        if (!std::isfinite(mean)) {
            throw std::invalid_argument("gaussian_prior_estimator: mean must be finite");
        }
    }

    LatentGrid estimate(const LatentGrid& tile,
                        const EstimatorContext& ctx) const override {
        const double ab = schedule_.alpha_bar(ctx.timestep);
        const double scaled_mean = std::sqrt(ab) * mean_;
        const double sigma = std::sqrt(1.0 - ab);
        LatentGrid out(tile.height(), tile.width(), tile.channels());
        for (std::size_t i = 0; i < tile.size(); ++i) {
            out[i] = (tile[i] - scaled_mean) / sigma;
        }
        return out;
    }

    std::string describe() const override {
        std::ostringstream oss;
        oss << "gaussian_prior(mean=" << mean_ << ", T=" << schedule_.num_steps()
            << ")";
        return oss.str();
    }

private:
    double mean_;
    DiffusionSchedule schedule_;
};

class BoxBlurEstimator final : public NoiseEstimator {
public:
    explicit BoxBlurEstimator(int radius) : radius_(radius) {
        if (radius < 1) {
            throw std::invalid_argument("box_blur_estimator: radius must be >= 1");
        }
    }

    LatentGrid estimate(const LatentGrid& tile,
                        const EstimatorContext&) const override {
        const int h = tile.height();
        const int w = tile.width();
        if (2 * radius_ + 1 > h || 2 * radius_ + 1 > w) {
            throw std::invalid_argument(
                "box_blur_estimator: window wider than the tile");
        }
        LatentGrid out(h, w, tile.channels());
        // One summed-area table per channel; windows are clamped to the tile
        // and divided by their valid area.
        std::vector<double> integral(static_cast<std::size_t>(h + 1) * (w + 1));
        const auto idx = [w](int r, int c) {
            return static_cast<std::size_t>(r) * (w + 1) + c;
        };
        for (int ch = 0; ch < tile.channels(); ++ch) {
            for (int r = 0; r < h; ++r) {
                double row_sum = 0.0;
                for (int c = 0; c < w; ++c) {
                    row_sum += tile.at(r, c, ch);
                    integral[idx(r + 1, c + 1)] = integral[idx(r, c + 1)] + row_sum;
                }
            }
            for (int r = 0; r < h; ++r) {
                const int r0 = std::max(0, r - radius_);
                const int r1 = std::min(h - 1, r + radius_);
                for (int c = 0; c < w; ++c) {
                    const int c0 = std::max(0, c - radius_);
                    const int c1 = std::min(w - 1, c + radius_);
                    const double sum = integral[idx(r1 + 1, c1 + 1)] -
                                       integral[idx(r0, c1 + 1)] -
                                       integral[idx(r1 + 1, c0)] +
                                       integral[idx(r0, c0)];
                    out.at(r, c, ch) = sum / ((r1 - r0 + 1) * (c1 - c0 + 1));
                }
            }
        }
        return out;
    }

    std::string describe() const override {
        std::ostringstream oss;
        oss << "box_blur(radius=" << radius_ << ")";
        return oss.str();
    }

private:
    int radius_;
};

}  // namespace

std::shared_ptr<NoiseEstimator> constant_estimator(double value) {
    return std::make_shared<ConstantEstimator>(value);
}

std::shared_ptr<NoiseEstimator> gaussian_prior_estimator(
    double mean, DiffusionSchedule schedule) {
    return std::make_shared<GaussianPriorEstimator>(mean, std::move(schedule));
}

std::shared_ptr<NoiseEstimator> box_blur_estimator(int radius) {
    return std::make_shared<BoxBlurEstimator>(radius);
}

std::uint64_t grid_content_hash(const LatentGrid& grid) {
    std::uint64_t h = 1469598103934665603ull;
    for (double v : grid.data()) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof(bytes));
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ull;
        }
    }
    return h;
}

SpyEstimator::SpyEstimator(std::shared_ptr<const NoiseEstimator> inner)
    : inner_(std::move(inner)) {
    if (!inner_) throw std::invalid_argument("SpyEstimator: null inner estimator");
}

LatentGrid SpyEstimator::estimate(const LatentGrid& tile,
                                  const EstimatorContext& ctx) const {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        records_.push_back(SpyRecord{tile.height(), tile.width(), tile.channels(),
                                     grid_content_hash(tile)});
    }
    return inner_->estimate(tile, ctx);
}

std::string SpyEstimator::describe() const {
    return "spy(" + inner_->describe() + ")";
}

std::vector<SpyRecord> SpyEstimator::records() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return records_;
}

int SpyEstimator::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return static_cast<int>(records_.size());
}

void SpyEstimator::reset() {
    std::lock_guard<std::mutex> lock(mutex_);
    records_.clear();
}

}  // namespace tilesds
