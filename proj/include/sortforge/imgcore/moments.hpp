#pragma once

#include "sortforge/imgcore/image.hpp"

#include <cstdint>

namespace sortforge::imgcore {

/// Area, centroid, and second-order shape statistics of a silhouette.
struct ImageMoments {
    std::int64_t area = 0;
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    /// Unit eigenvector of the central second-moment matrix with the larger
    /// eigenvalue. Sign is canonical: positive x component, or positive y
    /// when the x component is zero.
    double axis_x = 1.0;
    double axis_y = 0.0;
    double mu20 = 0.0;
    double mu02 = 0.0;
    double mu11 = 0.0;

    /// True when the second-moment eigenvalues coincide and the principal
    /// axis direction is arbitrary (reported as (1, 0)).
    bool isotropic = false;
};

/// Moments of the set pixels. Throws "empty silhouette" on an empty mask.
ImageMoments moments(const BinaryMask& mask);

} // namespace sortforge::imgcore
