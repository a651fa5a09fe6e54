#pragma once

#include "sortforge/imgcore/image.hpp"

#include <cstdint>
#include <tuple>
#include <vector>

namespace sortforge::extraction {

enum class TriLabel : std::uint8_t { BACKGROUND = 0, UNKNOWN = 1, FOREGROUND = 2 };

// Three-way pixel labeling that seeds the matting solve: FOREGROUND and
// BACKGROUND are hard constraints, UNKNOWN is solved for.
class Trimap {
public:
    Trimap(int width, int height)
        : width_(width), height_(height),
          labels_(static_cast<std::size_t>(width) * height, TriLabel::BACKGROUND) {}

    int width() const { return width_; }
    int height() const { return height_; }
    TriLabel at(int x, int y) const {
        return labels_[static_cast<std::size_t>(y) * width_ + x];
    }
    void set(int x, int y, TriLabel label) {
        labels_[static_cast<std::size_t>(y) * width_ + x] = label;
    }
    std::size_t count(TriLabel label) const;

private:
    int width_;
    int height_;
    std::vector<TriLabel> labels_;
};

// Per-pixel opacity in [0,1].
class AlphaMatte {
public:
    AlphaMatte(int width, int height)
        : width_(width), height_(height),
          alpha_(static_cast<std::size_t>(width) * height, 0.0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    double at(int x, int y) const {
        return alpha_[static_cast<std::size_t>(y) * width_ + x];
    }
    void set(int x, int y, double a) {
        alpha_[static_cast<std::size_t>(y) * width_ + x] = a;
    }

private:
    int width_;
    int height_;
    std::vector<double> alpha_;
};

// Keyed color volume in hue/saturation/value space. A pixel is keyed out
// when its hue lies within hue_tolerance of key_hue AND its saturation and
// value both clear the minimum thresholds.
struct ChromaKeySpec {
    double key_hue = 120.0;        // degrees, green screen
    double hue_tolerance = 30.0;   // degrees
    double min_saturation = 0.25;  // [0,1]
    double min_value = 0.15;       // [0,1]
};

// Marks candidate object pixels: everything that does NOT match the keyed
// color volume. Throws std::invalid_argument on non-3-channel input.
imgcore::BinaryMask chroma_key(const imgcore::RasterImage& img, const ChromaKeySpec& spec);

// Builds a trimap from an approximate mask: FOREGROUND = eroded mask,
// BACKGROUND = complement of the dilated mask, UNKNOWN = the band between.
// Throws std::invalid_argument on an empty mask or band_radius < 1, and
// std::runtime_error("object too thin for band radius") when erosion
// removes every pixel.
Trimap make_trimap(const imgcore::BinaryMask& approx_mask, int band_radius);

// Solves for alpha over the UNKNOWN pixels using a local-window matting
// Laplacian with the FOREGROUND/BACKGROUND labels as boundary conditions.
// Constraint pixels come back exact; everything is clamped to [0,1]. With
// no UNKNOWN pixels the trimap is cast directly to {0,1}. Throws
// std::runtime_error carrying the residual when the solver fails to
// converge within its iteration budget.
struct MatteParams {
    int window_radius = 1;     // local window half-size (1 -> 3x3)
    double epsilon = 1e-5;     // Laplacian regularization
    int max_iterations = 2000;
    double tolerance = 1e-5;   // relative residual target
};
AlphaMatte matte(const imgcore::RasterImage& img, const Trimap& trimap,
                 const MatteParams& params = {});

// Full object extraction: intersect the approximate mask with the chroma
// mask, keep the largest connected component, matte across its band, and
// return (final mask, matte, tight bounding box). The final mask is the
// chroma mask intersected with the matte's support (alpha > 0.5). Throws
// std::runtime_error("no object found") when the conjunction is empty.
std::tuple<imgcore::BinaryMask, AlphaMatte, imgcore::BoundingBox>
extract_region(const imgcore::RasterImage& img, const imgcore::BinaryMask& chroma_mask,
               const imgcore::BinaryMask& approx_mask, int band_radius,
               const MatteParams& params = {});

} // namespace sortforge::extraction
