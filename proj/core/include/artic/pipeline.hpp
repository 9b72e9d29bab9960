#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "artic/bike_rig.hpp"
#include "artic/ini.hpp"
#include "artic/refine.hpp"

namespace artic {

/// Multi-view emission parameters (full orbit around +Y).
struct DatasetParams {
    int n_views = 36;
    bool azimuth_step_given = false;
    double azimuth_step_deg = 10.0;  // checked against n_views when given
    double radius = 12.0;
    int image_size = 512;
    double focal = 2084.97;
    Vec3 orbit_center = Vec3::Zero();
};

/// Everything the pipeline commands need; populated from the config file,
/// then overridden field-by-field by CLI flags. Angles are radians here;
/// the config file and flags speak degrees.
struct PipelineConfig {
    std::string bike_dir;
    std::string skeleton_path;
    std::string body_pose_path;
    std::string rider_splat_path;  // optional

    BikePose8DoF pose;
    bool derive_theta_p = false;
    bool derive_theta_s = false;

    RefineConfig refine;
    DatasetParams dataset;
    ShMode sh_mode = ShMode::Full;

    std::string out_dir = "out";
    std::uint64_t seed = 0;
    int fixture_density = 400;
};

/// Reads the [assets] / [bike_pose] / [refine] / [dataset] / [output]
/// sections; unknown sections or keys are ConfigErrors, as is an orbit
/// where n_views * azimuth_step_deg != 360.
PipelineConfig load_pipeline_config(const IniFile& ini);

/// Writes the toy bike asset directory, the default skeleton and a
/// riding-posture rider pose under out_dir.
void cmd_make_fixtures(const PipelineConfig& config);

/// Articulates + places the bike at the configured 8-DoF pose; writes
/// bike_posed.ply and keypoints_posed.json.
void cmd_repose_bike(const PipelineConfig& config);

/// Derives (theta_p, theta_s) in radians from the rider pose file after
/// canonicalization (inverse of the rider's global placement); writes
/// derived_angles.json.
std::pair<double, double> cmd_derive_angles(const PipelineConfig& config);

/// Refines the rider pose against the bike keypoints posed at the
/// configured pose; writes pose_refined.json and refine_report.json.
void cmd_refine(const PipelineConfig& config);

/// Full cyclist assembly: optional angle derivation, canonical bike
/// articulation, rider refinement, optional rider splat concat, then one
/// global placement of the whole assembly from the pose's theta_X..t_Z
/// block. Writes cyclist.ply, cyclist_keypoints.json, pose_refined.json
/// and compose_report.json.
void cmd_compose_cyclist(const PipelineConfig& config);

/// Emits the per-part multi-view dataset:
/// <out>/<part>/{img,mask,cam}/view_%03d.* plus keypoints.json per part.
void cmd_dataset_gen(const PipelineConfig& config);

}  // namespace artic
