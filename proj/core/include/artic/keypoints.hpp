#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "artic/se3.hpp"

namespace artic {

/// Named 3D keypoints in meters, canonical asset frame.
struct KeypointSet {
    std::map<std::string, Vec3> points;

    bool has(const std::string& name) const { return points.count(name) > 0; }

    /// Throws SchemaError if the name is absent.
    const Vec3& at(const std::string& name) const;
};

/// Keypoint names every bike-rig asset must provide.
const std::vector<std::string>& bike_required_keypoints();

/// Throws SchemaError listing every missing required bike keypoint,
/// and rejects coincident steering-shaft endpoints and non-finite points.
void validate_bike_keypoints(const KeypointSet& set);

KeypointSet transform_keypoints(const KeypointSet& set, const SE3& t);

KeypointSet load_keypoints(const std::filesystem::path& path);
void save_keypoints(const KeypointSet& set, const std::filesystem::path& path);

}  // namespace artic
