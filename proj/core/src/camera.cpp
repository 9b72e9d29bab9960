#include "artic/camera.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "artic/errors.hpp"
#include "artic/io_util.hpp"

namespace artic {

using nlohmann::json;

Eigen::Matrix<double, 3, 4> Camera::extrinsics() const {
    Eigen::Matrix<double, 3, 4> m;
    m.block<3, 3>(0, 0) = rotation.matrix();
    m.col(3) = -(rotation.matrix() * center);
    return m;
}

Mat3 Camera::intrinsics() const {
    Mat3 k;
    k << fx, 0, cx(),
         0, fy, cy(),
         0, 0, 1;
    return k;
}

std::vector<Camera> orbit_cameras(int n_views, double radius, double focal,
                                  int size, const Vec3& orbit_center) {
    if (n_views < 1) {
        throw ConfigError("orbit needs at least one view");
    }
    if (!(radius > 0.0)) {
        throw ConfigError("orbit radius must be positive");
    }
    std::vector<Camera> cameras;
    cameras.reserve(n_views);
    for (int i = 0; i < n_views; ++i) {
        const double azimuth =
            2.0 * std::numbers::pi * double(i) / double(n_views);
        Camera cam;
        cam.fx = cam.fy = focal;
        cam.width = cam.height = size;
        const Rot3 spin = Rot3::rot_y(azimuth);
        cam.center = orbit_center + spin * Vec3(0.0, 0.0, -radius);

        // Look-at frame: rows are the camera axes (right, up, forward)
        // expressed in world coordinates. Azimuth 0 gives the identity.
        const Vec3 forward = (orbit_center - cam.center).normalized();
        const Vec3 right = Vec3::UnitY().cross(forward).normalized();
        const Vec3 up = forward.cross(right);
        Mat3 r;
        r.row(0) = right.transpose();
        r.row(1) = up.transpose();
        r.row(2) = forward.transpose();
        cam.rotation = Rot3::from_matrix(r);
        cameras.push_back(cam);
    }
    return cameras;
}

void save_camera(const Camera& cam, double azimuth_deg,
                 const std::filesystem::path& path) {
    const Mat3 k = cam.intrinsics();
    const auto e = cam.extrinsics();
    json intr = json::array();
    json extr = json::array();
    for (int r = 0; r < 3; ++r) {
        intr.push_back({k(r, 0), k(r, 1), k(r, 2)});
        extr.push_back({e(r, 0), e(r, 1), e(r, 2), e(r, 3)});
    }
    const json j = {
        {"width", cam.width},
        {"height", cam.height},
        {"azimuth_deg", azimuth_deg},
        {"intrinsics", intr},
        {"extrinsics", extr},
        {"center", {cam.center.x(), cam.center.y(), cam.center.z()}},
    };
    atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace artic
