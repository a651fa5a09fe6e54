#pragma once

#include "sortforge/geometry/pose.hpp"
#include "sortforge/imgcore/image.hpp"

namespace sortforge::geometry {

// Pinhole camera with square pixels: u = focal*x/z + cx, v = focal*y/z + cy.
// width/height give the mask raster the projection is drawn into.
struct PinholeIntrinsics {
    double focal = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
};

// Physical bounding cuboid of an object, centered on its own origin,
// extents in meters along the object axes.
struct ModelExtent {
    double w = 0.0;
    double h = 0.0;
    double d = 0.0;
};

// Projects the eight corners of the object's bounding cuboid through the
// pinhole model and fills their convex hull. `pose` must carry object-frame
// points into the camera frame. Throws std::invalid_argument on non-positive
// focal/raster dimensions or negative extents, std::runtime_error
// ("object behind camera") when any corner has non-positive depth.
imgcore::BinaryMask project_mask(const ModelExtent& extent, const RigidPose& pose,
                                 const PinholeIntrinsics& intrinsics);

} // namespace sortforge::geometry
