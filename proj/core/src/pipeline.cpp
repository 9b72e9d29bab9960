#include "artic/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "artic/body.hpp"
#include "artic/camera.hpp"
#include "artic/errors.hpp"
#include "artic/io_util.hpp"
#include "artic/ply_io.hpp"
#include "artic/png_io.hpp"
#include "artic/render.hpp"

namespace artic {

using nlohmann::json;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double parse_double(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size() || !std::isfinite(parsed)) {
            throw std::invalid_argument(value);
        }
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse number from '" +
                          value + "'");
    }
}

int parse_int(const std::string& value, const std::string& key) {
    try {
        std::size_t used = 0;
        const int parsed = std::stoi(value, &used);
        if (used != value.size()) {
            throw std::invalid_argument(value);
        }
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse integer from '" +
                          value + "'");
    }
}

Vec3 parse_vec3(const std::string& value, const std::string& key) {
    std::istringstream in(value);
    std::string part;
    Vec3 v;
    int i = 0;
    while (std::getline(in, part, ',')) {
        if (i >= 3) {
            throw ConfigError("key '" + key + "': expected three components");
        }
        v[i++] = parse_double(part, key);
    }
    if (i != 3) {
        throw ConfigError("key '" + key + "': expected three components");
    }
    return v;
}

void check_known_keys(const IniFile& ini, const std::string& section,
                      const std::set<std::string>& known) {
    const auto it = ini.sections().find(section);
    if (it == ini.sections().end()) {
        return;
    }
    for (const auto& [key, value] : it->second) {
        if (!known.count(key)) {
            throw ConfigError("unknown key '" + key + "' in section [" + section +
                              "]");
        }
    }
}

BodyPose load_rider(const PipelineConfig& config, Skeleton& skel_out) {
    if (config.skeleton_path.empty()) {
        throw ConfigError("no skeleton file configured ([assets] skeleton)");
    }
    if (config.body_pose_path.empty()) {
        throw ConfigError("no rider pose file configured ([assets] body_pose)");
    }
    skel_out = load_skeleton(config.skeleton_path);
    return load_body_pose(config.body_pose_path);
}

BikeParts load_bike(const PipelineConfig& config) {
    if (config.bike_dir.empty()) {
        throw ConfigError("no bike asset directory configured ([assets] bike_dir)");
    }
    return load_bike_parts(config.bike_dir);
}

std::pair<double, double> derive_from_rider(const Skeleton& skel,
                                            const BodyPose& pose) {
    // Canonical bicycle frame: strip the rider's global placement.
    BodyPose canonical = pose;
    canonical.global = SE3::identity();
    const auto joints = forward_kinematics(skel, canonical);
    const ContactJoints contacts = extract_contact_joints(skel, joints);
    const double theta_p = derive_pedal_angle(contacts.l_ankle, contacts.r_ankle);
    const double theta_s = derive_steering_angle(contacts.l_wrist, contacts.r_wrist);
    return {theta_p, theta_s};
}

BikePose8DoF resolved_bike_pose(const PipelineConfig& config,
                                const Skeleton* skel, const BodyPose* pose) {
    BikePose8DoF out = config.pose;
    if (config.derive_theta_p || config.derive_theta_s) {
        if (skel == nullptr || pose == nullptr) {
            throw ConfigError(
                "theta derivation requested but no rider pose is configured");
        }
        const auto [theta_p, theta_s] = derive_from_rider(*skel, *pose);
        if (config.derive_theta_p) {
            out.theta_p = theta_p;
        }
        if (config.derive_theta_s) {
            out.theta_s = theta_s;
        }
    }
    return out;
}

json contacts_json(const ContactJoints& contacts, const BikeTargets& targets) {
    const std::array<const char*, 5> names = {"Lwrist_to_Lhandle",
                                              "Rwrist_to_Rhandle",
                                              "pelvis_to_seat",
                                              "Lank_to_Lped",
                                              "Rank_to_Rped"};
    const auto body = contacts.as_array();
    const auto bike = targets.as_array();
    json out = json::object();
    for (int i = 0; i < 5; ++i) {
        out[names[i]] = (body[i] - bike[i]).norm();
    }
    return out;
}

// Wall-clock time stays out of the serialized report: emitted files are
// byte-deterministic for identical inputs. Timing goes to stderr instead.
json report_json(const RefineReport& report) {
    json j = {
        {"loss_trace", report.loss_trace},
        {"best_iter", report.best_iter},
        {"initial_loss", report.initial_loss},
        {"best_loss", report.best_loss},
    };
    if (!report.diagnostic.empty()) {
        j["diagnostic"] = report.diagnostic;
    }
    return j;
}

void log_refine_timing(const RefineReport& report) {
    std::fprintf(stderr, "refined: best %.6g at iteration %d of %zu (%.3g s)\n",
                 report.best_loss, report.best_iter,
                 report.loss_trace.empty() ? 0 : report.loss_trace.size() - 1,
                 report.elapsed_seconds);
}

}  // namespace

PipelineConfig load_pipeline_config(const IniFile& ini) {
    PipelineConfig config;

    static const std::set<std::string> known_sections = {
        "assets", "bike_pose", "refine", "dataset", "output"};
    for (const auto& [name, keys] : ini.sections()) {
        if (!known_sections.count(name)) {
            throw ConfigError("unknown config section [" + name + "]");
        }
    }

    check_known_keys(ini, "assets",
                     {"bike_dir", "skeleton", "body_pose", "rider_splat"});
    if (auto v = ini.get("assets", "bike_dir")) config.bike_dir = *v;
    if (auto v = ini.get("assets", "skeleton")) config.skeleton_path = *v;
    if (auto v = ini.get("assets", "body_pose")) config.body_pose_path = *v;
    if (auto v = ini.get("assets", "rider_splat")) config.rider_splat_path = *v;

    check_known_keys(ini, "bike_pose",
                     {"theta_p_deg", "theta_s_deg", "theta_x_deg", "theta_y_deg",
                      "theta_z_deg", "t_x", "t_y", "t_z"});
    if (auto v = ini.get("bike_pose", "theta_p_deg")) {
        if (*v == "derive") {
            config.derive_theta_p = true;
        } else {
            config.pose.theta_p = kDegToRad * parse_double(*v, "theta_p_deg");
        }
    }
    if (auto v = ini.get("bike_pose", "theta_s_deg")) {
        if (*v == "derive") {
            config.derive_theta_s = true;
        } else {
            config.pose.theta_s = kDegToRad * parse_double(*v, "theta_s_deg");
        }
    }
    if (auto v = ini.get("bike_pose", "theta_x_deg"))
        config.pose.theta_x = kDegToRad * parse_double(*v, "theta_x_deg");
    if (auto v = ini.get("bike_pose", "theta_y_deg"))
        config.pose.theta_y = kDegToRad * parse_double(*v, "theta_y_deg");
    if (auto v = ini.get("bike_pose", "theta_z_deg"))
        config.pose.theta_z = kDegToRad * parse_double(*v, "theta_z_deg");
    if (auto v = ini.get("bike_pose", "t_x"))
        config.pose.translation.x() = parse_double(*v, "t_x");
    if (auto v = ini.get("bike_pose", "t_y"))
        config.pose.translation.y() = parse_double(*v, "t_y");
    if (auto v = ini.get("bike_pose", "t_z"))
        config.pose.translation.z() = parse_double(*v, "t_z");

    check_known_keys(ini, "refine",
                     {"learning_rate", "max_iters", "adam_beta1", "adam_beta2",
                      "adam_eps", "gradient_mode", "fd_step", "objective_mode",
                      "joint_map"});
    if (auto v = ini.get("refine", "learning_rate"))
        config.refine.learning_rate = parse_double(*v, "learning_rate");
    if (auto v = ini.get("refine", "max_iters"))
        config.refine.max_iters = parse_int(*v, "max_iters");
    if (auto v = ini.get("refine", "adam_beta1"))
        config.refine.adam_beta1 = parse_double(*v, "adam_beta1");
    if (auto v = ini.get("refine", "adam_beta2"))
        config.refine.adam_beta2 = parse_double(*v, "adam_beta2");
    if (auto v = ini.get("refine", "adam_eps"))
        config.refine.adam_eps = parse_double(*v, "adam_eps");
    if (auto v = ini.get("refine", "fd_step"))
        config.refine.fd_step = parse_double(*v, "fd_step");
    if (auto v = ini.get("refine", "gradient_mode")) {
        if (*v == "finite-difference") {
            config.refine.gradient_mode = GradientMode::FiniteDifference;
        } else if (*v == "analytic") {
            config.refine.gradient_mode = GradientMode::Analytic;
        } else {
            throw ConfigError("gradient_mode must be finite-difference or analytic");
        }
    }
    if (auto v = ini.get("refine", "objective_mode")) {
        if (*v == "chamfer") {
            config.refine.objective_mode = ObjectiveMode::Chamfer;
        } else if (*v == "paired") {
            config.refine.objective_mode = ObjectiveMode::Paired;
        } else {
            throw ConfigError("objective_mode must be chamfer or paired");
        }
    }
    if (auto v = ini.get("refine", "joint_map")) {
        std::map<std::string, std::string> map;
        std::istringstream in(*v);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) {
                throw ConfigError("joint_map entries must be role:JointName");
            }
            map[item.substr(0, colon)] = item.substr(colon + 1);
        }
        config.refine.refine_joint_map = std::move(map);
    }

    check_known_keys(ini, "dataset",
                     {"n_views", "azimuth_step_deg", "radius", "image_size",
                      "focal", "orbit_center"});
    if (auto v = ini.get("dataset", "n_views"))
        config.dataset.n_views = parse_int(*v, "n_views");
    if (auto v = ini.get("dataset", "azimuth_step_deg")) {
        config.dataset.azimuth_step_given = true;
        config.dataset.azimuth_step_deg = parse_double(*v, "azimuth_step_deg");
    }
    if (auto v = ini.get("dataset", "radius"))
        config.dataset.radius = parse_double(*v, "radius");
    if (auto v = ini.get("dataset", "image_size"))
        config.dataset.image_size = parse_int(*v, "image_size");
    if (auto v = ini.get("dataset", "focal"))
        config.dataset.focal = parse_double(*v, "focal");
    if (auto v = ini.get("dataset", "orbit_center"))
        config.dataset.orbit_center = parse_vec3(*v, "orbit_center");
    if (config.dataset.azimuth_step_given &&
        std::abs(config.dataset.n_views * config.dataset.azimuth_step_deg -
                 360.0) > 1e-9) {
        throw ConfigError("n_views * azimuth_step_deg must equal 360");
    }

    check_known_keys(ini, "output", {"dir", "seed", "sh_mode", "fixture_density"});
    if (auto v = ini.get("output", "dir")) config.out_dir = *v;
    if (auto v = ini.get("output", "seed"))
        config.seed = std::uint64_t(parse_int(*v, "seed"));
    if (auto v = ini.get("output", "fixture_density"))
        config.fixture_density = parse_int(*v, "fixture_density");
    if (auto v = ini.get("output", "sh_mode")) {
        if (*v == "full") {
            config.sh_mode = ShMode::Full;
        } else if (*v == "dc-only") {
            config.sh_mode = ShMode::DcOnly;
        } else {
            throw ConfigError("sh_mode must be full or dc-only");
        }
    }
    return config;
}

void cmd_make_fixtures(const PipelineConfig& config) {
    const std::filesystem::path out(config.out_dir);
    std::filesystem::create_directories(out / "bike");
    const BikeParts parts = make_toy_bike(config.seed, config.fixture_density);
    save_bike_parts(parts, out / "bike");
    save_skeleton(Skeleton::default_tpose(), out / "skeleton.json");
    save_body_pose(make_riding_pose(parts.keypoints.at("seat")),
                   out / "rider_pose.json");
}

void cmd_repose_bike(const PipelineConfig& config) {
    if (config.derive_theta_p || config.derive_theta_s) {
        throw ConfigError(
            "repose-bike has no rider to derive angles from; give numeric values");
    }
    const BikeParts parts = load_bike(config);
    const auto [splats, keypoints] = compose_bike(parts, config.pose, config.sh_mode);
    const std::filesystem::path out(config.out_dir);
    std::filesystem::create_directories(out);
    save_splat(splats, out / "bike_posed.ply");
    save_keypoints(keypoints, out / "keypoints_posed.json");
}

std::pair<double, double> cmd_derive_angles(const PipelineConfig& config) {
    Skeleton skel;
    const BodyPose pose = load_rider(config, skel);
    const auto [theta_p, theta_s] = derive_from_rider(skel, pose);
    const std::filesystem::path out(config.out_dir);
    std::filesystem::create_directories(out);
    const json j = {
        {"theta_p_deg", theta_p / kDegToRad},
        {"theta_s_deg", theta_s / kDegToRad},
    };
    atomic_write_file(out / "derived_angles.json", j.dump(2) + "\n");
    return {theta_p, theta_s};
}

void cmd_refine(const PipelineConfig& config) {
    const BikeParts parts = load_bike(config);
    Skeleton skel;
    const BodyPose pose = load_rider(config, skel);
    const BikePose8DoF bike_pose = resolved_bike_pose(config, &skel, &pose);
    const auto [splats, keypoints] = compose_bike(parts, bike_pose, config.sh_mode);
    const BikeTargets targets = BikeTargets::from_keypoints(keypoints);

    const auto [refined, report] = refine_pose(pose, skel, targets, config.refine);
    log_refine_timing(report);

    const std::filesystem::path out(config.out_dir);
    std::filesystem::create_directories(out);
    save_body_pose(refined, out / "pose_refined.json");
    atomic_write_file(out / "refine_report.json", report_json(report).dump(2) + "\n");
}

void cmd_compose_cyclist(const PipelineConfig& config) {
    const BikeParts parts = load_bike(config);
    Skeleton skel;
    const BodyPose pose = load_rider(config, skel);

    // Articulation happens in the canonical frame; the pose's
    // theta_X..t_Z block is the assembly's final placement.
    BikePose8DoF articulation = resolved_bike_pose(config, &skel, &pose);
    const SE3 h_g = global_transform(articulation);
    articulation.theta_x = articulation.theta_y = articulation.theta_z = 0.0;
    articulation.translation = Vec3::Zero();

    const auto [bike_splats, bike_keypoints] =
        compose_bike(parts, articulation, config.sh_mode);
    const BikeTargets targets = BikeTargets::from_keypoints(bike_keypoints);

    const auto [refined, report] = refine_pose(pose, skel, targets, config.refine);
    log_refine_timing(report);

    const ContactJoints before =
        extract_contact_joints(skel, forward_kinematics(skel, pose));
    const ContactJoints after =
        extract_contact_joints(skel, forward_kinematics(skel, refined));

    std::vector<GaussianSet> assembly;
    assembly.push_back(bike_splats);
    if (!config.rider_splat_path.empty()) {
        assembly.push_back(load_splat(config.rider_splat_path));
    }
    const GaussianSet cyclist =
        transform_gaussians(concat_gaussians(assembly), h_g, config.sh_mode);
    const KeypointSet keypoints = transform_keypoints(bike_keypoints, h_g);

    const std::filesystem::path out(config.out_dir);
    std::filesystem::create_directories(out);
    save_splat(cyclist, out / "cyclist.ply");
    save_keypoints(keypoints, out / "cyclist_keypoints.json");
    save_body_pose(refined, out / "pose_refined.json");

    const json compose_report = {
        {"theta_p_deg", articulation.theta_p / kDegToRad},
        {"theta_s_deg", articulation.theta_s / kDegToRad},
        {"contact_distances_before", contacts_json(before, targets)},
        {"contact_distances_after", contacts_json(after, targets)},
        {"refine", report_json(report)},
        {"splat_count", cyclist.size()},
    };
    atomic_write_file(out / "compose_report.json", compose_report.dump(2) + "\n");
}

void cmd_dataset_gen(const PipelineConfig& config) {
    const BikeParts parts = load_bike(config);
    const DatasetParams& d = config.dataset;
    const std::vector<Camera> cameras = orbit_cameras(
        d.n_views, d.radius, d.focal, d.image_size, d.orbit_center);

    const std::array<std::pair<const char*, const GaussianSet*>, 3> part_list = {
        std::make_pair("frame_rear", &parts.frame_rear),
        std::make_pair("pedals", &parts.pedals),
        std::make_pair("steering_front", &parts.steering_front),
    };

    const std::filesystem::path out(config.out_dir);
    for (const auto& [name, splats] : part_list) {
        const std::filesystem::path part_dir = out / name;
        std::filesystem::create_directories(part_dir / "img");
        std::filesystem::create_directories(part_dir / "mask");
        std::filesystem::create_directories(part_dir / "cam");
        save_keypoints(parts.keypoints, part_dir / "keypoints.json");
        for (int i = 0; i < d.n_views; ++i) {
            char view[16];
            std::snprintf(view, sizeof(view), "view_%03d", i);
            const Preview preview = render_preview(*splats, cameras[i]);
            save_png(preview.rgba, part_dir / "img" / (std::string(view) + ".png"));
            save_png(preview.mask, part_dir / "mask" / (std::string(view) + ".png"));
            save_camera(cameras[i], 360.0 * i / d.n_views,
                        part_dir / "cam" / (std::string(view) + ".json"));
        }
    }
}

}  // namespace artic
