#include "tilesds/image_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tilesds {

std::vector<unsigned char> ppm_bytes(const LatentGrid& image) {
    if (image.channels() != 3) {
        throw std::invalid_argument("ppm_bytes: image must have 3 channels");
    }
    const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                               std::to_string(image.height()) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.reserve(bytes.size() + image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const double v = image[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument(
                "ppm_bytes: pixel values must be in [0, 1]");
        }
        bytes.push_back(static_cast<unsigned char>(std::floor(v * 255.0 + 0.5)));
    }
    return bytes;
}

void write_ppm(const LatentGrid& image, const std::string& path) {
    const std::vector<unsigned char> bytes = ppm_bytes(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
}

}  // namespace tilesds
