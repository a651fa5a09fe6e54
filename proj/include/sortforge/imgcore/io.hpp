#pragma once

#include "sortforge/imgcore/image.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sortforge::imgcore {

/// Reads a PNG or binary PPM (P6) image, chosen by file extension.
/// Grayscale PNGs are expanded to RGB; 16-bit PNGs are reduced to 8-bit.
RasterImage read_image(const std::string& path);

/// Writes PNG (RGB or RGBA) or binary PPM (P6, RGB only) by extension.
void write_image(const std::string& path, const RasterImage& img);

/// Masks serialize as single-channel 8-bit PNG with values {0, 255}.
/// On read, samples >= 128 count as set.
BinaryMask read_mask(const std::string& path);
void write_mask(const std::string& path, const BinaryMask& mask);

/// 16-bit single-channel PNG, used for alpha mattes (alpha * 65535, rounded).
struct Gray16 {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> samples;
};
Gray16 read_gray16(const std::string& path);
void write_gray16(const std::string& path, const Gray16& img);

} // namespace sortforge::imgcore
