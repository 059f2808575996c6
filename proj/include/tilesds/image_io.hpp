#pragma once

#include <string>
#include <vector>

#include "tilesds/grid.hpp"

namespace tilesds {

// Encodes a 3-channel grid with values in [0, 1] as a binary PPM (P6, 8-bit).
// Bytes are round-half-up of value * 255, so 0.5 encodes as 128. Bit-exact
// for identical inputs.
std::vector<unsigned char> ppm_bytes(const LatentGrid& image);

void write_ppm(const LatentGrid& image, const std::string& path);

}  // namespace tilesds
