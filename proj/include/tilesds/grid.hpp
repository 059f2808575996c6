#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace tilesds {

// Dense H x W x C tensor of doubles in row-major (row, column, channel)
// order. This is the substrate for latents, noise tensors, weight maps and
// rendered images alike. Plain value type: copy freely, share read-only.
class LatentGrid {
public:
    LatentGrid() = default;
    LatentGrid(int height, int width, int channels, double fill = 0.0);

    int height() const { return height_; }
    int width() const { return width_; }
    int channels() const { return channels_; }
    std::size_t size() const { return data_.size(); }

    double& at(int row, int col, int channel) {
        return data_[index(row, col, channel)];
    }
    double at(int row, int col, int channel) const {
        return data_[index(row, col, channel)];
    }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const LatentGrid& other) const {
        return height_ == other.height_ && width_ == other.width_ &&
               channels_ == other.channels_;
    }
    bool all_finite() const;

    std::size_t index(int row, int col, int channel) const {
        return (static_cast<std::size_t>(row) * width_ + col) * channels_ +
               channel;
    }

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

// Square size x size window anchored at (top, left). Centers are derived, not
// stored, so even window sides carry no half-pixel ambiguity.
struct Region {
    int top = 0;
    int left = 0;
    int size = 0;

    double center_row() const { return top + size / 2.0; }
    double center_col() const { return left + size / 2.0; }

    bool fits(int grid_height, int grid_width) const {
        return top >= 0 && left >= 0 && size > 0 &&
               top + size <= grid_height && left + size <= grid_width;
    }
};

// Copies the region out of the grid; the source is untouched.
LatentGrid crop(const LatentGrid& grid, const Region& region);

// Adds the tile onto the target region (target += tile inside the region,
// untouched elsewhere). The tile must be exactly region.size square with the
// target's channel count.
void paste_add(LatentGrid& target, const Region& region, const LatentGrid& tile);

// Pointwise quotient. Every denominator entry must be > 0; a zero entry means
// some pixel was never covered by a tile and is rejected.
LatentGrid elementwise_div(const LatentGrid& num, const LatentGrid& den);

double max_abs_diff(const LatentGrid& a, const LatentGrid& b);
double max_abs(const LatentGrid& g);
double l2_norm(const LatentGrid& g);

// Binary grid file: three little-endian uint32 dims (H, W, C), then
// H*W*C little-endian float64 values in row-major order. Bit-exact.
void write_grid(const LatentGrid& grid, const std::string& path);
LatentGrid read_grid(const std::string& path);

}  // namespace tilesds
