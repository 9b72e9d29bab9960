#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "artic/se3.hpp"

namespace artic {

inline constexpr int kBodyJointCount = 24;

/// 24-joint kinematic tree with rest-pose bone offsets (child joint
/// position minus parent joint position, meters).
struct Skeleton {
    std::vector<std::string> joint_names;  // exactly 24
    std::vector<int> parents;              // parent index, -1 for the root
    std::vector<Vec3> rest_offsets;        // 24 x 3

    /// The humanoid fixture used throughout the tests: ~1.7 m T-pose,
    /// facing +X with +Y up and the left side toward +Z, pelvis at the
    /// body-frame origin.
    static Skeleton default_tpose();

    /// Index of a joint name; throws SchemaError if absent.
    int index_of(const std::string& name) const;

    /// Exactly 24 joints, a single root at index 0, parent[k] < k.
    void validate() const;
};

/// Axis-angle body pose: 24 rotation 3-vectors (direction = axis,
/// magnitude = angle, canonicalized to magnitude <= pi), 10 opaque shape
/// scalars carried through untouched, and the body's global placement.
struct BodyPose {
    std::array<Vec3, kBodyJointCount> thetas;
    std::array<double, 10> beta{};
    SE3 global;

    // Eigen vectors do not zero-initialize on their own.
    BodyPose() { thetas.fill(Vec3::Zero()); }

    /// Wraps every axis-angle magnitude into (-pi, pi].
    void canonicalize();
};

/// World positions of all 24 joints. The root sits at the global
/// translation with orientation global_rotation * Rodrigues(theta_0);
/// children accumulate G_k = G_parent * Rodrigues(theta_k),
/// p_k = p_parent + G_parent * rest_offset_k.
std::array<Vec3, kBodyJointCount> forward_kinematics(const Skeleton& skel,
                                                     const BodyPose& pose);

/// Positions plus accumulated world orientations (used by the analytic
/// refinement gradient).
struct FkResult {
    std::array<Vec3, kBodyJointCount> positions;
    std::array<Rot3, kBodyJointCount> orientations;
};

FkResult forward_kinematics_full(const Skeleton& skel, const BodyPose& pose);

/// Rotation for one axis-angle 3-vector (identity at the zero vector).
Rot3 axis_angle_rotation(const Vec3& theta);

/// Hand-tuned riding posture for the default T-pose skeleton: torso
/// leaned forward, arms reaching the handlebar, legs on the cranks,
/// pelvis planted at `seat`. Start pose for the seat/handle/pedal
/// alignment benchmark and the fixture emitted by make-fixtures.
BodyPose make_riding_pose(const Vec3& seat);

/// The five joints the seat/handle/pedal alignment objective uses.
struct ContactJoints {
    Vec3 l_wrist, r_wrist, pelvis, l_ankle, r_ankle;

    std::array<Vec3, 5> as_array() const {
        return {l_wrist, r_wrist, pelvis, l_ankle, r_ankle};
    }
};

ContactJoints extract_contact_joints(const Skeleton& skel,
                                     const std::array<Vec3, kBodyJointCount>& joints);

/// Crank angle from the ankle positions (canonical bicycle frame):
/// atan2 of the left-minus-right ankle delta projected on the X-Y plane.
/// Zero means the left crank points along +X. Throws
/// DegenerateGeometryError when the projections coincide.
double derive_pedal_angle(const Vec3& l_ankle, const Vec3& r_ankle);

/// Steering angle from the wrist positions (canonical bicycle frame):
/// signed angle of the left-minus-right handlebar line projected on the
/// X-Z plane, measured from +Z. Zero means the handlebar lies along Z.
double derive_steering_angle(const Vec3& l_wrist, const Vec3& r_wrist);

BodyPose load_body_pose(const std::filesystem::path& path);
void save_body_pose(const BodyPose& pose, const std::filesystem::path& path);

Skeleton load_skeleton(const std::filesystem::path& path);
void save_skeleton(const Skeleton& skel, const std::filesystem::path& path);

}  // namespace artic
