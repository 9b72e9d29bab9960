#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "artic/keypoints.hpp"
#include "artic/splat.hpp"

namespace artic {

/// The bicycle's eight pose scalars: crank angle, steering angle, body
/// rotations about the world X/Y/Z axes, body translation. Radians and
/// meters; angles are interpreted modulo 2*pi.
struct BikePose8DoF {
    double theta_p = 0.0;
    double theta_s = 0.0;
    double theta_x = 0.0;
    double theta_y = 0.0;
    double theta_z = 0.0;
    Vec3 translation = Vec3::Zero();
};

/// The three rigid bike parts plus their canonical keypoints.
struct BikeParts {
    GaussianSet frame_rear;
    GaussianSet pedals;
    GaussianSet steering_front;
    KeypointSet keypoints;

    /// Required keypoints present, pedal axle on the vertical through the
    /// origin (within 1e-3 in X and Z). Throws SchemaError otherwise.
    void validate() const;
};

/// Rotation by theta_s about the steering shaft line through k_s1 (top)
/// and k_s2 (bottom), realized as the planar Z-conjugation
/// T(k_s1) Rz(theta_vy) Rx(theta_s) Rz(-theta_vy) T(-k_s1) with
/// theta_vy = atan2(v_y, v_x) for v = (k_s1-k_s2)/||.||. That
/// decomposition is exact for shafts in the X-Y plane; for |v_z| > 1e-3
/// a warning is emitted and the transform falls back to the general
/// axis-angle rotation about v through k_s1. Both shaft points are fixed
/// points of the result. Coincident keypoints throw
/// DegenerateGeometryError.
SE3 steering_transform(double theta_s, const Vec3& k_s1, const Vec3& k_s2);

/// Rotation by theta_p about the Z axis through the pedal shaft centroid:
/// T(v_p) Rz(theta_p) T(-v_p).
SE3 pedal_transform(double theta_p, const Vec3& v_p);

/// Body placement T(t) Rz(theta_Z) Ry(theta_Y) Rx(theta_X): rotations
/// about the world axes in X-then-Y-then-Z order, then translation.
SE3 global_transform(const BikePose8DoF& pose);

/// Articulates in the canonical frame and then applies the global
/// placement: steering part by Hg*Hs, pedals by Hg*Hp, frame by Hg.
/// Splats are concatenated (frame_rear, pedals, steering_front);
/// handle/steer-axle keypoints follow Hg*Hs, pedal_L/pedal_R follow
/// Hg*Hp, every other keypoint follows Hg.
std::pair<GaussianSet, KeypointSet> compose_bike(const BikeParts& parts,
                                                 const BikePose8DoF& pose,
                                                 ShMode sh_mode = ShMode::Full);

/// Deterministic procedural bicycle fixture: wheel tori, frame tubes,
/// cranks with pedal platforms, fork and handlebar, sampled as `density`
/// splats per part (SH degree 1), with keypoints placed analytically on
/// the generating geometry. The steering shaft is vertical (v_z = 0) and
/// passes through the front axle. Same seed, same bits.
BikeParts make_toy_bike(std::uint64_t seed, int density);

/// Directory layout: frame_rear.ply, pedals.ply, steering_front.ply,
/// keypoints.json.
BikeParts load_bike_parts(const std::filesystem::path& dir);
void save_bike_parts(const BikeParts& parts, const std::filesystem::path& dir);

}  // namespace artic
