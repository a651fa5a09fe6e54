#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sortforge::imgcore {

/// 8-bit-per-channel raster image, row-major, 3 (RGB) or 4 (RGBA) channels.
class RasterImage {
public:
    RasterImage(int width, int height, int channels);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }

    std::uint8_t& at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }
    std::uint8_t at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
    }

    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    bool same_size(const RasterImage& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

private:
    int width_;
    int height_;
    int channels_;
    std::vector<std::uint8_t> data_;
};

/// One boolean per pixel; dimensions match the image it annotates.
class BinaryMask {
public:
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return width_; }
    int height() const { return height_; }

    bool get(int x, int y) const {
        return bits_[static_cast<std::size_t>(y) * width_ + x] != 0;
    }
    void set(int x, int y, bool value) {
        bits_[static_cast<std::size_t>(y) * width_ + x] = value ? 1 : 0;
    }

    /// Number of set pixels.
    std::size_t count() const;
    bool empty() const { return count() == 0; }

    bool same_size(const BinaryMask& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }
    bool operator==(const BinaryMask& other) const {
        return width_ == other.width_ && height_ == other.height_ && bits_ == other.bits_;
    }

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> bits_;
};

/// Pixel box, inclusive min, exclusive max.
struct BoundingBox {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    int width() const { return x_max - x_min; }
    int height() const { return y_max - y_min; }
    bool valid() const { return x_min < x_max && y_min < y_max; }
    bool operator==(const BoundingBox&) const = default;
};

/// Tight bounding box of the set pixels. Throws if the mask is empty.
BoundingBox tight_bounds(const BinaryMask& mask);

/// Whole-image box for an image or mask.
inline BoundingBox full_box(int width, int height) { return BoundingBox{0, 0, width, height}; }

} // namespace sortforge::imgcore
