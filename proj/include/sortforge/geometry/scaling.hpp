#pragma once

#include "sortforge/imgcore/image.hpp"

#include <utility>

namespace sortforge::geometry {

// Camera-to-board distances for the source (capture) and target (sorting)
// scenes, in meters.
struct ScaleCalibration {
    double d_s = 0.0;
    double d_t = 0.0;
};

// Ratio applied to object pixel dimensions when moving from the source to
// the target scene. Defaults to d_t / d_s; with invert = true returns
// d_s / d_t, the ratio a pinhole camera would apply for a farther target.
// Throws std::invalid_argument on non-positive distances.
double scale_factor(const ScaleCalibration& cal, bool invert = false);

// Rescales image and mask by factor k about the center of the mask's
// bounding box, keeping the canvas dimensions: the object grows or shrinks
// in place. Bilinear sampling for the image (edge-clamped), nearest for the
// mask. Throws std::invalid_argument when k <= 0, the mask is empty, or the
// scaled object region would round below 1x1 pixels.
std::pair<imgcore::RasterImage, imgcore::BinaryMask>
scale_image(const imgcore::RasterImage& img, const imgcore::BinaryMask& mask, double k);

} // namespace sortforge::geometry
