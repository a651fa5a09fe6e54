#include "sortforge/geometry/projection.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

namespace sortforge::geometry {

namespace {

struct Point2 {
    double x;
    double y;
};

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; returns the hull in counter-clockwise order
// (collinear points dropped). Degenerate inputs yield fewer than 3 points.
std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2& a, const Point2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

imgcore::BinaryMask project_mask(const ModelExtent& extent, const RigidPose& pose,
                                 const PinholeIntrinsics& intrinsics) {
    if (intrinsics.focal <= 0.0)
        throw std::invalid_argument("project_mask: focal length must be positive");
    if (intrinsics.width < 1 || intrinsics.height < 1)
        throw std::invalid_argument("project_mask: raster dimensions must be positive");
    if (extent.w < 0.0 || extent.h < 0.0 || extent.d < 0.0)
        throw std::invalid_argument("project_mask: extents must be non-negative");

    std::vector<Point2> projected;
    projected.reserve(8);
    for (int i = 0; i < 8; ++i) {
        const Eigen::Vector3d corner((i & 1 ? 0.5 : -0.5) * extent.w,
                                     (i & 2 ? 0.5 : -0.5) * extent.h,
                                     (i & 4 ? 0.5 : -0.5) * extent.d);
        const Eigen::Vector3d cam = pose.rotation * corner + pose.translation;
        if (cam.z() <= 0.0) throw std::runtime_error("object behind camera");
        projected.push_back({intrinsics.focal * cam.x() / cam.z() + intrinsics.cx,
                             intrinsics.focal * cam.y() / cam.z() + intrinsics.cy});
    }

    const std::vector<Point2> hull = convex_hull(std::move(projected));
    imgcore::BinaryMask mask(intrinsics.width, intrinsics.height);
    if (hull.size() < 3) return mask;  // degenerate hull covers no pixel area

    double lo_x = hull[0].x, hi_x = hull[0].x, lo_y = hull[0].y, hi_y = hull[0].y;
    for (const Point2& p : hull) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const int x_begin = std::max(0, static_cast<int>(std::floor(lo_x - 0.5)));
    const int x_end = std::min(intrinsics.width, static_cast<int>(std::ceil(hi_x + 0.5)));
    const int y_begin = std::max(0, static_cast<int>(std::floor(lo_y - 0.5)));
    const int y_end = std::min(intrinsics.height, static_cast<int>(std::ceil(hi_y + 0.5)));

    // A pixel belongs to the hull when its center lies inside or on the
    // boundary (CCW orientation: non-negative cross products all around).
    for (int y = y_begin; y < y_end; ++y)
        for (int x = x_begin; x < x_end; ++x) {
            const Point2 p{x + 0.5, y + 0.5};
            bool inside = true;
            for (std::size_t i = 0; i < hull.size() && inside; ++i) {
                const Point2& a = hull[i];
                const Point2& b = hull[(i + 1) % hull.size()];
                if (cross(a, b, p) < -1e-9) inside = false;
            }
            if (inside) mask.set(x, y, true);
        }
    return mask;
}

} // namespace sortforge::geometry
