#pragma once

#include <filesystem>
#include <vector>

#include "artic/se3.hpp"

namespace artic {

/// Pinhole camera. Extrinsics follow the world-to-camera convention
/// x_cam = R (p - C); the principal point is the image center.
struct Camera {
    Rot3 rotation;            // world-to-camera
    Vec3 center = Vec3(0, 0, -12);
    double fx = 2084.97;
    double fy = 2084.97;
    int width = 512;
    int height = 512;

    double cx() const { return width / 2.0; }
    double cy() const { return height / 2.0; }

    /// [R | -R C], the 3x4 world-to-camera matrix.
    Eigen::Matrix<double, 3, 4> extrinsics() const;
    Mat3 intrinsics() const;
};

/// Cameras at n_views azimuths around the +Y axis, each looking at
/// `orbit_center` with world +Y as up, at distance `radius`. View i sits
/// at azimuth i*(360/n_views) degrees; view 0 is the canonical pose
/// (identity rotation, center (0,0,-radius) for the origin orbit).
std::vector<Camera> orbit_cameras(int n_views, double radius, double focal,
                                  int size, const Vec3& orbit_center = Vec3::Zero());

/// Per-view camera JSON (intrinsics, world-to-camera extrinsics, center,
/// azimuth). Written atomically.
void save_camera(const Camera& cam, double azimuth_deg,
                 const std::filesystem::path& path);

}  // namespace artic
