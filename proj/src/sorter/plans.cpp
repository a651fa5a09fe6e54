#include "sortforge/sorter/sorter.hpp"

#include "sortforge/imgcore/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace sortforge::sorter {

std::pair<double, double> virtual_com(const imgcore::BinaryMask& silhouette) {
    const imgcore::ImageMoments m = imgcore::moments(silhouette);
    return {m.centroid_x, m.centroid_y};
}

GraspPlan grasp_plan(const imgcore::BinaryMask& silhouette) {
    const imgcore::ImageMoments m = imgcore::moments(silhouette);
    GraspPlan plan;
    plan.center_x = m.centroid_x;
    plan.center_y = m.centroid_y;
    if (m.isotropic) {
        // No principal direction to be perpendicular to; grasp vertically.
        plan.dir_x = 0.0;
        plan.dir_y = 1.0;
        plan.axis_fallback = true;
    } else {
        // Rotate the principal axis a quarter turn.
        plan.dir_x = -m.axis_y;
        plan.dir_y = m.axis_x;
    }
    return plan;
}

PushPlan push_plan(const imgcore::BinaryMask& silhouette, double bin_x, double bin_y) {
    const auto [cx, cy] = virtual_com(silhouette);
    const double dx = bin_x - cx;
    const double dy = bin_y - cy;
    const double norm = std::hypot(dx, dy);
    if (norm < 1e-12) throw std::runtime_error("zero push vector");
    PushPlan plan;
    plan.start_x = cx;
    plan.start_y = cy;
    plan.dir_x = dx / norm;
    plan.dir_y = dy / norm;
    return plan;
}

} // namespace sortforge::sorter
