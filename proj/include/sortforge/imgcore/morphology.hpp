#pragma once

#include "sortforge/imgcore/image.hpp"

namespace sortforge::imgcore {

/// Binary dilation with a square structuring element of side 2*radius+1.
/// Pixels outside the image are treated as unset, so masks never grow past
/// image bounds. radius 0 is the identity.
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Binary erosion, dual of dilate. Pixels outside the image are treated as
/// set, so the border alone never erodes a pixel.
BinaryMask erode(const BinaryMask& mask, int radius);

/// Pixelwise conjunction. Throws on dimension mismatch.
BinaryMask mask_and(const BinaryMask& a, const BinaryMask& b);

BinaryMask mask_complement(const BinaryMask& mask);

/// Retains only the largest 8-connected component; empty input stays empty.
/// Ties go to the component encountered first in row-major order.
BinaryMask largest_component(const BinaryMask& mask);

} // namespace sortforge::imgcore
