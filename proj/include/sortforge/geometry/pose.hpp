#pragma once

#include <Eigen/Core>

#include <string>

namespace sortforge::geometry {

// Symbolic coordinate-frame label ("camera", "marker", "object", ...).
using FrameId = std::string;

// Rigid transform carrying points expressed in the `to` frame into the
// `from` frame: p_from = rotation * p_to + translation.
struct RigidPose {
    FrameId from;
    FrameId to;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
};

// Identity transform between a frame and itself.
RigidPose identity_pose(const FrameId& frame);

// Throws std::invalid_argument when the rotation is not orthonormal with
// determinant +1 (tolerance 1e-9) or a frame label is empty.
void validate_pose(const RigidPose& pose);

// Chains two transforms: requires a.to == b.from and yields a pose carrying
// b.to coordinates into a.from. Throws std::invalid_argument naming both
// frames on a mismatch.
RigidPose compose(const RigidPose& a, const RigidPose& b);

// Inverse transform (swaps the frame labels).
RigidPose inverse(const RigidPose& pose);

// Rodrigues conversion from an axis-angle vector (direction = axis, norm =
// angle in radians) to a rotation matrix. The zero vector maps to identity.
Eigen::Matrix3d axis_angle_to_matrix(const Eigen::Vector3d& axis_angle);

} // namespace sortforge::geometry
