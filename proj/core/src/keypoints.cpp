#include "artic/keypoints.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "artic/io_util.hpp"

namespace artic {

using nlohmann::json;

const Vec3& KeypointSet::at(const std::string& name) const {
    const auto it = points.find(name);
    if (it == points.end()) {
        throw SchemaError("keypoint '" + name + "' not present");
    }
    return it->second;
}

const std::vector<std::string>& bike_required_keypoints() {
    static const std::vector<std::string> names = {
        "seat",
        "steer_axle_top",
        "steer_axle_bottom",
        "handle_L",
        "handle_R",
        "pedal_axle",
        "pedal_L",
        "pedal_R",
        "wheel_axle_front",
        "wheel_axle_rear",
        "ground_origin",
    };
    return names;
}

void validate_bike_keypoints(const KeypointSet& set) {
    std::string missing;
    for (const auto& name : bike_required_keypoints()) {
        if (!set.has(name)) {
            missing += missing.empty() ? name : ", " + name;
        }
    }
    if (!missing.empty()) {
        throw SchemaError("bike keypoints missing: " + missing);
    }
    for (const auto& [name, p] : set.points) {
        if (!p.allFinite()) {
            throw SchemaError("keypoint '" + name + "' is not finite");
        }
    }
    if ((set.at("steer_axle_top") - set.at("steer_axle_bottom")).norm() <= 1e-6) {
        throw SchemaError("steer_axle_top and steer_axle_bottom coincide");
    }
}

KeypointSet transform_keypoints(const KeypointSet& set, const SE3& t) {
    KeypointSet out;
    for (const auto& [name, p] : set.points) {
        out.points.emplace(name, t * p);
    }
    return out;
}

KeypointSet load_keypoints(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file_bytes(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("points") || !j["points"].is_object()) {
        throw SchemaError(path.string() + ": missing 'points' object");
    }
    KeypointSet set;
    for (const auto& [name, value] : j["points"].items()) {
        if (!value.is_array() || value.size() != 3) {
            throw SchemaError(path.string() + ": keypoint '" + name +
                              "' is not a 3-array");
        }
        Vec3 p;
        for (int i = 0; i < 3; ++i) {
            if (!value[i].is_number()) {
                throw SchemaError(path.string() + ": keypoint '" + name +
                                  "' has a non-numeric coordinate");
            }
            p[i] = value[i].get<double>();
        }
        if (!p.allFinite()) {
            throw SchemaError(path.string() + ": keypoint '" + name +
                              "' is not finite");
        }
        set.points.emplace(name, p);
    }
    return set;
}

void save_keypoints(const KeypointSet& set, const std::filesystem::path& path) {
    json points = json::object();
    for (const auto& [name, p] : set.points) {
        points[name] = {p.x(), p.y(), p.z()};
    }
    const json j = {
        {"frame", "canonical"},
        {"units", "meters"},
        {"points", points},
    };
    atomic_write_file(path, j.dump(2) + "\n");
}

}  // namespace artic
