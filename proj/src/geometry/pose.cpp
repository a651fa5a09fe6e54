#include "sortforge/geometry/pose.hpp"

#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace sortforge::geometry {

RigidPose identity_pose(const FrameId& frame) {
    RigidPose p;
    p.from = frame;
    p.to = frame;
    return p;
}

void validate_pose(const RigidPose& pose) {
    if (pose.from.empty() || pose.to.empty())
        throw std::invalid_argument("pose: frame labels must be non-empty");
    const Eigen::Matrix3d gram = pose.rotation.transpose() * pose.rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("pose: rotation is not orthonormal");
    if (std::abs(pose.rotation.determinant() - 1.0) > 1e-9)
        throw std::invalid_argument("pose: rotation determinant is not +1");
}

RigidPose compose(const RigidPose& a, const RigidPose& b) {
    if (a.to != b.from)
        throw std::invalid_argument("compose: frame mismatch: '" + a.to + "' vs '" + b.from + "'");
    RigidPose out;
    out.from = a.from;
    out.to = b.to;
    out.rotation = a.rotation * b.rotation;
    out.translation = a.rotation * b.translation + a.translation;
    return out;
}

RigidPose inverse(const RigidPose& pose) {
    RigidPose out;
    out.from = pose.to;
    out.to = pose.from;
    out.rotation = pose.rotation.transpose();
    out.translation = -(out.rotation * pose.translation);
    return out;
}

Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& axis_angle) {
    const double angle = axis_angle.norm();
    if (angle < 1e-12) return Eigen::Matrix3d::Identity();
    const Eigen::Vector3d axis = axis_angle / angle;
    Eigen::Matrix3d skew;
    skew << 0.0, -axis.z(), axis.y(),
            axis.z(), 0.0, -axis.x(),
            -axis.y(), axis.x(), 0.0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * skew +
           (1.0 - std::cos(angle)) * skew * skew;
}

} // namespace sortforge::geometry
