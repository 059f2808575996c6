#include "tilesds/grid.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "grid files are little-endian; big-endian hosts need swapping");

namespace tilesds {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

}  // namespace

LatentGrid::LatentGrid(int height, int width, int channels, double fill)
    : height_(height), width_(width), channels_(channels) {
    require(height > 0 && width > 0 && channels > 0,
            "LatentGrid: dimensions must be positive");
    data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

bool LatentGrid::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

LatentGrid crop(const LatentGrid& grid, const Region& region) {
    if (!region.fits(grid.height(), grid.width())) {
        throw std::out_of_range("crop: region out of grid bounds");
    }
    LatentGrid out(region.size, region.size, grid.channels());
    for (int r = 0; r < region.size; ++r) {
        for (int c = 0; c < region.size; ++c) {
            for (int ch = 0; ch < grid.channels(); ++ch) {
                out.at(r, c, ch) = grid.at(region.top + r, region.left + c, ch);
            }
        }
    }
    return out;
}

void paste_add(LatentGrid& target, const Region& region, const LatentGrid& tile) {
    if (!region.fits(target.height(), target.width())) {
        throw std::out_of_range("paste_add: region out of grid bounds");
    }
    require(tile.height() == region.size && tile.width() == region.size &&
                tile.channels() == target.channels(),
            "paste_add: tile shape does not match region");
    for (int r = 0; r < region.size; ++r) {
        for (int c = 0; c < region.size; ++c) {
            for (int ch = 0; ch < target.channels(); ++ch) {
                target.at(region.top + r, region.left + c, ch) += tile.at(r, c, ch);
            }
        }
    }
}

LatentGrid elementwise_div(const LatentGrid& num, const LatentGrid& den) {
    require(num.same_shape(den), "elementwise_div: shape mismatch");
    LatentGrid out(num.height(), num.width(), num.channels());
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (!(den[i] > 0.0)) {
            throw std::domain_error(
                "elementwise_div: non-positive denominator entry "
                "(tile coverage hole?)");
        }
        out[i] = num[i] / den[i];
    }
    return out;
}

double max_abs_diff(const LatentGrid& a, const LatentGrid& b) {
    require(a.same_shape(b), "max_abs_diff: shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

double max_abs(const LatentGrid& g) {
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        worst = std::max(worst, std::abs(g[i]));
    }
    return worst;
}

double l2_norm(const LatentGrid& g) {
    double sum = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) sum += g[i] * g[i];
    return std::sqrt(sum);
}

void write_grid(const LatentGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_grid: cannot open " + path);
    const std::uint32_t dims[3] = {static_cast<std::uint32_t>(grid.height()),
                                   static_cast<std::uint32_t>(grid.width()),
                                   static_cast<std::uint32_t>(grid.channels())};
    out.write(reinterpret_cast<const char*>(dims), sizeof(dims));
    out.write(reinterpret_cast<const char*>(grid.data().data()),
              static_cast<std::streamsize>(grid.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write_grid: write failed for " + path);
}

LatentGrid read_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_grid: cannot open " + path);
    std::uint32_t dims[3] = {0, 0, 0};
    in.read(reinterpret_cast<char*>(dims), sizeof(dims));
    if (!in) throw std::runtime_error("read_grid: truncated header in " + path);
    LatentGrid grid(static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                    static_cast<int>(dims[2]));
    in.read(reinterpret_cast<char*>(grid.data().data()),
            static_cast<std::streamsize>(grid.size() * sizeof(double)));
    if (!in) throw std::runtime_error("read_grid: truncated data in " + path);
    return grid;
}

}  // namespace tilesds
