#include "artic/bike_rig.hpp"

#include <cmath>
#include <set>
#include <string>

#include "artic/errors.hpp"
#include "artic/keypoints.hpp"
#include "artic/log.hpp"
#include "artic/ply_io.hpp"

namespace artic {

void BikeParts::validate() const {
    validate_bike_keypoints(keypoints);
    frame_rear.validate();
    pedals.validate();
    steering_front.validate();
    const Vec3& axle = keypoints.at("pedal_axle");
    if (std::abs(axle.x()) > 1e-3 || std::abs(axle.z()) > 1e-3) {
        throw SchemaError("pedal_axle must sit on the vertical through the "
                          "origin in canonical pose");
    }
}

SE3 steering_transform(double theta_s, const Vec3& k_s1, const Vec3& k_s2) {
    const Vec3 shaft = k_s1 - k_s2;
    const double len = shaft.norm();
    if (len <= 1e-6) {
        throw DegenerateGeometryError(
            "steering shaft keypoints coincide (|k_s1 - k_s2| = " +
            std::to_string(len) + ")");
    }
    const Vec3 v = shaft / len;

    if (std::abs(v.z()) > 1e-3) {
        log_warning("steering shaft leaves the X-Y plane (v_z = " +
                    std::to_string(v.z()) +
                    "); using general axis-angle rotation");
        const SE3 rot = SE3::from_rotation(Rot3::about_axis(v, theta_s));
        return SE3::from_translation(k_s1) * rot * SE3::from_translation(-k_s1);
    }

    const double theta_vy = std::atan2(v.y(), v.x());
    const SE3 h_sz = SE3::from_rotation(Rot3::rot_z(theta_vy));
    const SE3 h_sx = SE3::from_rotation(Rot3::rot_x(theta_s));
    return SE3::from_translation(k_s1) * h_sz * h_sx * h_sz.inverse() *
           SE3::from_translation(-k_s1);
}

SE3 pedal_transform(double theta_p, const Vec3& v_p) {
    if (!v_p.allFinite()) {
        throw DegenerateGeometryError("pedal shaft centroid is not finite");
    }
    return SE3::from_translation(v_p) *
           SE3::from_rotation(Rot3::rot_z(theta_p)) *
           SE3::from_translation(-v_p);
}

SE3 global_transform(const BikePose8DoF& pose) {
    const Rot3 r = Rot3::rot_z(pose.theta_z) * Rot3::rot_y(pose.theta_y) *
                   Rot3::rot_x(pose.theta_x);
    return SE3(r, pose.translation);
}

std::pair<GaussianSet, KeypointSet> compose_bike(const BikeParts& parts,
                                                 const BikePose8DoF& pose,
                                                 ShMode sh_mode) {
    const Vec3& k_s1 = parts.keypoints.at("steer_axle_top");
    const Vec3& k_s2 = parts.keypoints.at("steer_axle_bottom");
    const Vec3& v_p = parts.keypoints.at("pedal_axle");

    const SE3 h_s = steering_transform(pose.theta_s, k_s1, k_s2);
    const SE3 h_p = pedal_transform(pose.theta_p, v_p);
    const SE3 h_g = global_transform(pose);

    GaussianSet splats = concat_gaussians({
        transform_gaussians(parts.frame_rear, h_g, sh_mode),
        transform_gaussians(parts.pedals, h_g * h_p, sh_mode),
        transform_gaussians(parts.steering_front, h_g * h_s, sh_mode),
    });

    static const std::set<std::string> steering_points = {
        "steer_axle_top", "steer_axle_bottom", "handle_L", "handle_R"};
    static const std::set<std::string> pedal_points = {"pedal_L", "pedal_R"};

    KeypointSet keypoints;
    const SE3 hg_hs = h_g * h_s;
    const SE3 hg_hp = h_g * h_p;
    for (const auto& [name, p] : parts.keypoints.points) {
        if (steering_points.count(name)) {
            keypoints.points.emplace(name, hg_hs * p);
        } else if (pedal_points.count(name)) {
            keypoints.points.emplace(name, hg_hp * p);
        } else {
            keypoints.points.emplace(name, h_g * p);
        }
    }
    return {std::move(splats), std::move(keypoints)};
}

BikeParts load_bike_parts(const std::filesystem::path& dir) {
    BikeParts parts;
    parts.frame_rear = load_splat(dir / "frame_rear.ply");
    parts.pedals = load_splat(dir / "pedals.ply");
    parts.steering_front = load_splat(dir / "steering_front.ply");
    parts.keypoints = load_keypoints(dir / "keypoints.json");
    parts.validate();
    return parts;
}

void save_bike_parts(const BikeParts& parts, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    save_splat(parts.frame_rear, dir / "frame_rear.ply");
    save_splat(parts.pedals, dir / "pedals.ply");
    save_splat(parts.steering_front, dir / "steering_front.ply");
    save_keypoints(parts.keypoints, dir / "keypoints.json");
}

}  // namespace artic
