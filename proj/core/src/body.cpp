#include "artic/body.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "artic/errors.hpp"
#include "artic/io_util.hpp"

namespace artic {

using nlohmann::json;

namespace {

Rot3 rodrigues(const Vec3& theta) {
    const double angle = theta.norm();
    if (angle < 1e-12) {
        return Rot3::identity();
    }
    return Rot3::about_axis(theta / angle, angle);
}

Vec3 canonicalize_axis_angle(const Vec3& theta) {
    const double angle = theta.norm();
    if (angle <= std::numbers::pi || angle < 1e-12) {
        return theta;
    }
    double wrapped = std::fmod(angle, 2.0 * std::numbers::pi);
    if (wrapped > std::numbers::pi) {
        wrapped -= 2.0 * std::numbers::pi;
    }
    return theta * (wrapped / angle);
}

}  // namespace

Skeleton Skeleton::default_tpose() {
    Skeleton s;
    s.joint_names = {
        "Pelvis", "L_Hip", "R_Hip", "Spine1", "L_Knee", "R_Knee",
        "Spine2", "L_Ankle", "R_Ankle", "Spine3", "L_Foot", "R_Foot",
        "Neck", "L_Collar", "R_Collar", "Head", "L_Shoulder", "R_Shoulder",
        "L_Elbow", "R_Elbow", "L_Wrist", "R_Wrist", "L_Hand", "R_Hand"};
    s.parents = {-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8,
                 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};
    s.rest_offsets = {
        Vec3(0.00, 0.00, 0.00),    // Pelvis
        Vec3(0.00, -0.06, 0.10),   // L_Hip
        Vec3(0.00, -0.06, -0.10),  // R_Hip
        Vec3(0.00, 0.11, 0.00),    // Spine1
        Vec3(0.00, -0.40, 0.00),   // L_Knee
        Vec3(0.00, -0.40, 0.00),   // R_Knee
        Vec3(0.00, 0.12, 0.00),    // Spine2
        Vec3(0.00, -0.42, 0.00),   // L_Ankle
        Vec3(0.00, -0.42, 0.00),   // R_Ankle
        Vec3(0.00, 0.12, 0.00),    // Spine3
        Vec3(0.12, -0.06, 0.00),   // L_Foot
        Vec3(0.12, -0.06, 0.00),   // R_Foot
        Vec3(0.00, 0.14, 0.00),    // Neck
        Vec3(0.00, 0.10, 0.07),    // L_Collar
        Vec3(0.00, 0.10, -0.07),   // R_Collar
        Vec3(0.00, 0.10, 0.00),    // Head
        Vec3(0.00, 0.02, 0.12),    // L_Shoulder
        Vec3(0.00, 0.02, -0.12),   // R_Shoulder
        Vec3(0.00, 0.00, 0.26),    // L_Elbow
        Vec3(0.00, 0.00, -0.26),   // R_Elbow
        Vec3(0.00, 0.00, 0.25),    // L_Wrist
        Vec3(0.00, 0.00, -0.25),   // R_Wrist
        Vec3(0.00, 0.00, 0.08),    // L_Hand
        Vec3(0.00, 0.00, -0.08),   // R_Hand
    };
    return s;
}

int Skeleton::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < joint_names.size(); ++i) {
        if (joint_names[i] == name) {
            return static_cast<int>(i);
        }
    }
    throw SchemaError("skeleton has no joint named '" + name + "'");
}

void Skeleton::validate() const {
    if (joint_names.size() != kBodyJointCount ||
        parents.size() != kBodyJointCount ||
        rest_offsets.size() != kBodyJointCount) {
        throw SchemaError("skeleton must have exactly " +
                          std::to_string(kBodyJointCount) + " joints (got " +
                          std::to_string(joint_names.size()) + " names, " +
                          std::to_string(parents.size()) + " parents, " +
                          std::to_string(rest_offsets.size()) + " offsets)");
    }
    if (parents[0] != -1) {
        throw SchemaError("joint 0 must be the root (parent -1)");
    }
    for (int k = 1; k < kBodyJointCount; ++k) {
        if (parents[k] < 0 || parents[k] >= k) {
            throw SchemaError("parent of joint " + std::to_string(k) +
                              " must precede it in the joint order");
        }
    }
    for (const auto& offset : rest_offsets) {
        if (!offset.allFinite()) {
            throw SchemaError("skeleton rest offsets must be finite");
        }
    }
}

void BodyPose::canonicalize() {
    for (auto& theta : thetas) {
        theta = canonicalize_axis_angle(theta);
    }
}

FkResult forward_kinematics_full(const Skeleton& skel, const BodyPose& pose) {
    FkResult fk;
    fk.orientations[0] = pose.global.rotation() * rodrigues(pose.thetas[0]);
    fk.positions[0] = pose.global.translation();
    for (int k = 1; k < kBodyJointCount; ++k) {
        const int parent = skel.parents[k];
        fk.positions[k] =
            fk.positions[parent] + fk.orientations[parent] * skel.rest_offsets[k];
        fk.orientations[k] = fk.orientations[parent] * rodrigues(pose.thetas[k]);
    }
    return fk;
}

std::array<Vec3, kBodyJointCount> forward_kinematics(const Skeleton& skel,
                                                     const BodyPose& pose) {
    return forward_kinematics_full(skel, pose).positions;
}

Rot3 axis_angle_rotation(const Vec3& theta) { return rodrigues(theta); }

BodyPose make_riding_pose(const Vec3& seat) {
    const Skeleton skel = Skeleton::default_tpose();
    BodyPose pose;
    pose.global = SE3::from_translation(seat);
    auto set = [&](const char* joint, double x, double y, double z) {
        pose.thetas[skel.index_of(joint)] = Vec3(x, y, z);
    };
    set("Spine1", 0.0, 0.0, -0.60);
    set("Neck", 0.0, 0.0, 0.30);
    set("L_Shoulder", 0.35, 1.05, 0.0);
    set("R_Shoulder", -0.35, -1.05, 0.0);
    set("L_Elbow", 0.0, 0.50, 0.0);
    set("R_Elbow", 0.0, -0.50, 0.0);
    // Legs at opposite crank phases, so the ankle-derived crank angle is
    // well defined.
    set("L_Hip", 0.0, 0.0, 0.55);
    set("R_Hip", 0.0, 0.0, 1.15);
    set("L_Knee", 0.0, 0.0, -0.60);
    set("R_Knee", 0.0, 0.0, -1.25);
    return pose;
}

ContactJoints extract_contact_joints(
    const Skeleton& skel, const std::array<Vec3, kBodyJointCount>& joints) {
    ContactJoints c;
    c.pelvis = joints[skel.index_of("Pelvis")];
    c.l_wrist = joints[skel.index_of("L_Wrist")];
    c.r_wrist = joints[skel.index_of("R_Wrist")];
    c.l_ankle = joints[skel.index_of("L_Ankle")];
    c.r_ankle = joints[skel.index_of("R_Ankle")];
    return c;
}

double derive_pedal_angle(const Vec3& l_ankle, const Vec3& r_ankle) {
    const double dx = l_ankle.x() - r_ankle.x();
    const double dy = l_ankle.y() - r_ankle.y();
    if (std::hypot(dx, dy) <= 1e-6) {
        throw DegenerateGeometryError(
            "ankle X-Y projections coincide; pedal angle undefined");
    }
    return std::atan2(dy, dx);
}

double derive_steering_angle(const Vec3& l_wrist, const Vec3& r_wrist) {
    const double hx = l_wrist.x() - r_wrist.x();
    const double hz = l_wrist.z() - r_wrist.z();
    if (std::hypot(hx, hz) <= 1e-6) {
        throw DegenerateGeometryError(
            "wrist X-Z projections coincide; steering angle undefined");
    }
    return std::atan2(hx, hz);
}

namespace {

Vec3 parse_vec3(const json& value, const std::string& what) {
    if (!value.is_array() || value.size() != 3) {
        throw SchemaError(what + " is not a 3-array");
    }
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!value[i].is_number()) {
            throw SchemaError(what + " has a non-numeric entry");
        }
        v[i] = value[i].get<double>();
    }
    if (!v.allFinite()) {
        throw SchemaError(what + " is not finite");
    }
    return v;
}

json dump_vec3(const Vec3& v) { return json{v.x(), v.y(), v.z()}; }

json parse_document(const std::filesystem::path& path) {
    try {
        return json::parse(read_file_bytes(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

}  // namespace

BodyPose load_body_pose(const std::filesystem::path& path) {
    const json j = parse_document(path);
    BodyPose pose;
    if (!j.contains("thetas") || !j["thetas"].is_array()) {
        throw SchemaError(path.string() + ": missing 'thetas' array");
    }
    if (j["thetas"].size() != kBodyJointCount) {
        throw SchemaError(path.string() + ": 'thetas' has " +
                          std::to_string(j["thetas"].size()) +
                          " joints, expected " + std::to_string(kBodyJointCount));
    }
    for (int k = 0; k < kBodyJointCount; ++k) {
        pose.thetas[k] =
            parse_vec3(j["thetas"][k], "theta[" + std::to_string(k) + "]");
    }
    if (j.contains("beta")) {
        if (!j["beta"].is_array() || j["beta"].size() != pose.beta.size()) {
            throw SchemaError(path.string() + ": 'beta' must have 10 entries");
        }
        for (std::size_t i = 0; i < pose.beta.size(); ++i) {
            if (!j["beta"][i].is_number()) {
                throw SchemaError(path.string() + ": 'beta' has a non-numeric entry");
            }
            pose.beta[i] = j["beta"][i].get<double>();
            if (!std::isfinite(pose.beta[i])) {
                throw SchemaError(path.string() + ": 'beta' is not finite");
            }
        }
    }
    Rot3 rotation = Rot3::identity();
    if (j.contains("global_rotation")) {
        const auto& rows = j["global_rotation"];
        if (!rows.is_array() || rows.size() != 3) {
            throw SchemaError(path.string() + ": 'global_rotation' must be 3x3");
        }
        Mat3 m;
        for (int r = 0; r < 3; ++r) {
            const Vec3 row =
                parse_vec3(rows[r], "global_rotation row " + std::to_string(r));
            m.row(r) = row.transpose();
        }
        try {
            rotation = Rot3::from_matrix(m);
        } catch (const DegenerateGeometryError& e) {
            throw SchemaError(path.string() + ": 'global_rotation': " + e.what());
        }
    }
    Vec3 translation = Vec3::Zero();
    if (j.contains("global_translation")) {
        translation = parse_vec3(j["global_translation"], "global_translation");
    }
    pose.global = SE3(rotation, translation);
    pose.canonicalize();
    return pose;
}

void save_body_pose(const BodyPose& pose, const std::filesystem::path& path) {
    json thetas = json::array();
    BodyPose canonical = pose;
    canonical.canonicalize();
    for (const auto& theta : canonical.thetas) {
        thetas.push_back(dump_vec3(theta));
    }
    const Mat3& r = pose.global.rotation().matrix();
    json rotation = json::array();
    for (int row = 0; row < 3; ++row) {
        rotation.push_back({r(row, 0), r(row, 1), r(row, 2)});
    }
    const json j = {
        {"thetas", thetas},
        {"beta", pose.beta},
        {"global_rotation", rotation},
        {"global_translation", dump_vec3(pose.global.translation())},
    };
    atomic_write_file(path, j.dump(2) + "\n");
}

Skeleton load_skeleton(const std::filesystem::path& path) {
    const json j = parse_document(path);
    Skeleton skel;
    if (!j.contains("joint_names") || !j["joint_names"].is_array()) {
        throw SchemaError(path.string() + ": missing 'joint_names'");
    }
    for (const auto& name : j["joint_names"]) {
        if (!name.is_string()) {
            throw SchemaError(path.string() + ": joint names must be strings");
        }
        skel.joint_names.push_back(name.get<std::string>());
    }
    if (!j.contains("parents") || !j["parents"].is_array()) {
        throw SchemaError(path.string() + ": missing 'parents'");
    }
    for (const auto& parent : j["parents"]) {
        if (!parent.is_number_integer()) {
            throw SchemaError(path.string() + ": parents must be integers");
        }
        skel.parents.push_back(parent.get<int>());
    }
    if (!j.contains("rest_offsets") || !j["rest_offsets"].is_array()) {
        throw SchemaError(path.string() + ": missing 'rest_offsets'");
    }
    for (std::size_t k = 0; k < j["rest_offsets"].size(); ++k) {
        skel.rest_offsets.push_back(
            parse_vec3(j["rest_offsets"][k], "rest_offset " + std::to_string(k)));
    }
    skel.validate();
    return skel;
}

void save_skeleton(const Skeleton& skel, const std::filesystem::path& path) {
    json offsets = json::array();
    for (const auto& offset : skel.rest_offsets) {
        offsets.push_back(dump_vec3(offset));
    }
    const json j = {
        {"joint_names", skel.joint_names},
        {"parents", skel.parents},
        {"rest_offsets", offsets},
    };
    atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace artic
