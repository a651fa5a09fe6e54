#include "sortforge/imgcore/image.hpp"

#include <algorithm>
#include <stdexcept>

namespace sortforge::imgcore {

RasterImage::RasterImage(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("image dimensions must be at least 1x1");
    if (channels != 3 && channels != 4)
        throw std::invalid_argument("image must have 3 or 4 channels");
    data_.assign(static_cast<std::size_t>(width) * height * channels, 0);
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("mask dimensions must be at least 1x1");
    bits_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BoundingBox tight_bounds(const BinaryMask& mask) {
    int x0 = mask.width(), y0 = mask.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.get(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (x1 < 0) throw std::invalid_argument("tight_bounds: empty mask");
    return BoundingBox{x0, y0, x1 + 1, y1 + 1};
}

} // namespace sortforge::imgcore
