// Acceptance suite: every release criterion as one pass/fail line.
// Independent oracles are re-implemented locally so a library bug cannot
// hide behind its own arithmetic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <nlohmann/json.hpp>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "artic/bike_rig.hpp"
#include "artic/body.hpp"
#include "artic/camera.hpp"
#include "artic/errors.hpp"
#include "artic/io_util.hpp"
#include "artic/pipeline.hpp"
#include "artic/ply_io.hpp"
#include "artic/png_io.hpp"
#include "artic/refine.hpp"
#include "artic/render.hpp"

namespace fs = std::filesystem;
using namespace artic;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw CriterionFailure(message);
    }
}

double elapsed_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

Vec3 rotate_about_line(const Vec3& p, const Vec3& anchor, const Vec3& axis,
                       double angle) {
    const Vec3 r = p - anchor;
    const double c = std::cos(angle), s = std::sin(angle);
    return anchor + r * c + axis.cross(r) * s + axis * axis.dot(r) * (1.0 - c);
}

class ScratchDir {
public:
    ScratchDir() {
        path_ = fs::temp_directory_path() /
                ("artic_acceptance_" + std::to_string(std::random_device{}()));
        fs::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

// ---- criterion 1: articulation fixes the shaft and preserves distances ----

void criterion_articulation() {
    std::mt19937_64 rng(1001);
    std::uniform_real_distribution<double> span(-2.0, 2.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> dir_angle(0.0, 2.0 * kPi);
    const auto t0 = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 1000; ++trial) {
        const Vec3 k_s1(span(rng), span(rng), span(rng));
        const double a = dir_angle(rng);
        const Vec3 k_s2 = k_s1 - 0.8 * Vec3(std::cos(a), std::sin(a), 0.0);
        const double theta_s = angle(rng);
        const SE3 h_s = steering_transform(theta_s, k_s1, k_s2);
        require((h_s * k_s1 - k_s1).norm() < 1e-9, "H_s does not fix k_s1");
        require((h_s * k_s2 - k_s2).norm() < 1e-9, "H_s does not fix k_s2");

        const Vec3 v_p(span(rng), span(rng), span(rng));
        const SE3 h_p = pedal_transform(angle(rng), v_p);
        require((h_p * v_p - v_p).norm() < 1e-9, "H_p does not fix v_p");

        const Vec3 p(span(rng), span(rng), span(rng));
        const Vec3 q(span(rng), span(rng), span(rng));
        for (const SE3* t : {&h_s, &h_p}) {
            require(std::abs(((*t) * p - (*t) * q).norm() - (p - q).norm()) < 1e-9,
                    "articulation transform is not an isometry");
        }
    }
    require(elapsed_since(t0) < 1.0, "articulation sweep exceeded 1 s");
}

// ---- criterion 2: quarter-turn reproduction on the toy bike ----

void criterion_quarter_turn(const fs::path& scratch) {
    const BikeParts parts = make_toy_bike(0, 400);
    BikePose8DoF pose;
    pose.theta_s = kPi / 2;
    pose.theta_p = kPi / 2;
    const auto [splats, keypoints] = compose_bike(parts, pose);

    const Vec3 k_s1 = parts.keypoints.at("steer_axle_top");
    const Vec3 steer_axis =
        (k_s1 - parts.keypoints.at("steer_axle_bottom")).normalized();
    const Vec3 v_p = parts.keypoints.at("pedal_axle");
    const std::set<std::string> steering = {"steer_axle_top", "steer_axle_bottom",
                                            "handle_L", "handle_R"};
    const std::set<std::string> pedals = {"pedal_L", "pedal_R"};
    for (const auto& [name, p] : parts.keypoints.points) {
        Vec3 expected = p;
        if (steering.count(name)) {
            expected = rotate_about_line(p, k_s1, steer_axis, pose.theta_s);
        } else if (pedals.count(name)) {
            expected = rotate_about_line(p, v_p, Vec3(0, 0, 1), pose.theta_p);
        }
        require((keypoints.at(name) - expected).norm() < 1e-9,
                "keypoint '" + name + "' deviates from the axis-angle oracle");
    }

    // Rendered orbit preview: masks nonempty, and the quarter turn is
    // visible as a widened handlebar pixel spread vs the neutral pose.
    const auto cams = orbit_cameras(8, 12.0, 2084.97, 512);
    const auto [neutral_splats, neutral_keypoints] =
        compose_bike(parts, BikePose8DoF{});
    auto column_of = [&](const Vec3& world, const Camera& cam) {
        const Vec3 local = cam.rotation * (world - cam.center);
        return cam.cx() + cam.fx * local.x() / local.z();
    };
    fs::create_directories(scratch / "preview");
    for (std::size_t view = 0; view < cams.size(); ++view) {
        const Preview frame = render_preview(splats, cams[view]);
        int on = 0;
        for (const auto value : frame.mask.pixels) {
            on += (value == 255);
        }
        require(on > 0, "an orbit preview frame is empty");
        save_png(frame.rgba,
                 scratch / "preview" / ("turned_" + std::to_string(view) + ".png"));
    }
    const Preview neutral = render_preview(neutral_splats, cams[0]);
    save_png(neutral.rgba, scratch / "preview" / "neutral_0.png");

    const double turned_spread =
        std::abs(column_of(keypoints.at("handle_L"), cams[0]) -
                 column_of(keypoints.at("handle_R"), cams[0]));
    const double neutral_spread =
        std::abs(column_of(neutral_keypoints.at("handle_L"), cams[0]) -
                 column_of(neutral_keypoints.at("handle_R"), cams[0]));
    require(neutral_spread < 15.0,
            "neutral handlebar should project nearly end-on");
    require(turned_spread > 50.0,
            "quarter-turned handlebar should span the view");

    // Cranks: a quarter turn moves the pedal pair from horizontal to
    // vertical in the bike plane.
    const Vec3 crank_turned = keypoints.at("pedal_L") - keypoints.at("pedal_R");
    require(std::abs(crank_turned.y()) > 0.3 && std::abs(crank_turned.x()) < 1e-9,
            "cranks are not quarter-turned");
}

// ---- criterion 3: angle derivation round trip ----

void criterion_angle_round_trip() {
    const BikeParts parts = make_toy_bike(0, 50);
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 36; ++i) {
        const double theta = -kPi + 2.0 * kPi * (i + 0.5) / 36.0;
        BikePose8DoF pose;
        pose.theta_p = theta;
        const auto [splats, keypoints] = compose_bike(parts, pose);
        const double derived =
            derive_pedal_angle(keypoints.at("pedal_L"), keypoints.at("pedal_R"));
        require(std::abs(derived - theta) < 1e-6, "pedal angle round trip failed");
    }
    for (int i = 0; i <= 16; ++i) {
        const double theta = (-80.0 + 10.0 * i) * kPi / 180.0;
        BikePose8DoF pose;
        pose.theta_s = theta;
        const auto [splats, keypoints] = compose_bike(parts, pose);
        const double derived =
            derive_steering_angle(keypoints.at("handle_L"), keypoints.at("handle_R"));
        require(std::abs(derived - theta) < 1e-6,
                "steering angle round trip failed");
    }
    require(elapsed_since(t0) < 1.0, "angle round trips exceeded 1 s");
}

// ---- criterion 4: forward kinematics validity ----

void criterion_fk() {
    const Skeleton skel = Skeleton::default_tpose();
    std::mt19937_64 rng(1004);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 1000; ++trial) {
        BodyPose pose;
        for (auto& theta : pose.thetas) {
            theta = Vec3(dist(rng), dist(rng), dist(rng));
        }
        pose.global =
            SE3(Rot3::rot_y(dist(rng)) * Rot3::rot_x(dist(rng)),
                Vec3(dist(rng), dist(rng), dist(rng)));
        const auto joints = forward_kinematics(skel, pose);
        for (int k = 1; k < kBodyJointCount; ++k) {
            const double bone = (joints[k] - joints[skel.parents[k]]).norm();
            require(std::abs(bone - skel.rest_offsets[k].norm()) < 1e-9,
                    "bone length not preserved");
        }

        BodyPose local = pose;
        local.global = SE3::identity();
        const auto canonical = forward_kinematics(skel, local);
        for (int k = 0; k < kBodyJointCount; ++k) {
            require((joints[k] - pose.global * canonical[k]).norm() < 1e-9,
                    "FK is not global-equivariant");
        }
    }

    // Subtree locality with strict bit equality outside the branch.
    const auto rest = forward_kinematics(skel, BodyPose{});
    BodyPose bent;
    bent.thetas[skel.index_of("R_Knee")] = Vec3(0.4, -0.2, 0.9);
    const auto joints = forward_kinematics(skel, bent);
    const std::set<int> descendants = {skel.index_of("R_Ankle"),
                                       skel.index_of("R_Foot")};
    for (int k = 0; k < kBodyJointCount; ++k) {
        if (descendants.count(k)) {
            require((joints[k] - rest[k]).norm() > 1e-6,
                    "knee descendants did not move");
        } else {
            require(joints[k] == rest[k], "joint outside the bent subtree moved");
        }
    }
}

// ---- criterion 5: gradient checks ----

void criterion_gradients() {
    const Skeleton skel = Skeleton::default_tpose();
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> dist(-0.9, 0.9);
    for (int trial = 0; trial < 100; ++trial) {
        BodyPose pose;
        for (auto& theta : pose.thetas) {
            theta = Vec3(dist(rng), dist(rng), dist(rng));
        }
        pose.global = SE3::from_translation(Vec3(dist(rng), dist(rng), dist(rng)));
        BikeTargets targets;
        targets.l_handle = Vec3(dist(rng), dist(rng), dist(rng));
        targets.r_handle = Vec3(dist(rng), dist(rng), dist(rng));
        targets.seat = Vec3(dist(rng), dist(rng), dist(rng));
        targets.l_pedal = Vec3(dist(rng), dist(rng), dist(rng));
        targets.r_pedal = Vec3(dist(rng), dist(rng), dist(rng));
        RefineConfig config;
        config.objective_mode =
            trial % 2 ? ObjectiveMode::Paired : ObjectiveMode::Chamfer;
        const RefineProblem problem(pose, skel, targets, config);
        const auto params = problem.initial_params();
        const auto fd = problem.gradient_fd(params);
        const auto analytic = problem.gradient_analytic(params);
        double fd_norm = 0.0, diff = 0.0;
        for (int i = 0; i < kRefineParamCount; ++i) {
            fd_norm += fd[i] * fd[i];
            diff += (fd[i] - analytic[i]) * (fd[i] - analytic[i]);
        }
        require(std::sqrt(diff) <= 1e-3 * std::max(std::sqrt(fd_norm), 1e-9),
                "analytic and finite-difference gradients disagree");
    }

    // 1-DoF symbolic benchmark (elbow about Z, displaced wrist target).
    const BodyPose rest;
    const auto rest_joints = forward_kinematics(skel, rest);
    const auto contacts = extract_contact_joints(skel, rest_joints);
    const int elbow = skel.index_of("L_Elbow");
    const Vec3 offset = contacts.l_wrist - rest_joints[elbow];
    const Vec3 x = contacts.l_wrist + Vec3(0.1, -0.06, 0.04);
    BikeTargets targets{x, contacts.r_wrist, contacts.pelvis, contacts.l_ankle,
                        contacts.r_ankle};
    for (const double t : {0.0, 0.4, -0.9}) {
        BodyPose pose;
        pose.thetas[elbow] = Vec3(0, 0, t);
        const Vec3 rotated = Rot3::rot_z(t) * offset;
        const double symbolic =
            (4.0 / 5.0) *
            (rest_joints[elbow] + rotated - x).dot(Vec3(0, 0, 1).cross(rotated));
        RefineConfig config;
        config.objective_mode = ObjectiveMode::Paired;
        config.gradient_mode = GradientMode::Analytic;
        const RefineProblem problem(pose, skel, targets, config);
        const auto grad = problem.gradient(problem.initial_params());
        require(std::abs(grad[3 * 3 + 2] - symbolic) < 1e-6,
                "1-DoF symbolic gradient benchmark failed");
    }
}

// ---- criterion 6: IK convergence under paper settings ----

void criterion_ik_convergence() {
    const BikeParts parts = make_toy_bike(0, 60);
    BikePose8DoF bike_pose;
    bike_pose.theta_p = 40.0 * kPi / 180.0;
    bike_pose.theta_s = 10.0 * kPi / 180.0;
    const auto [splats, keypoints] = compose_bike(parts, bike_pose);
    const BikeTargets targets = BikeTargets::from_keypoints(keypoints);
    const Skeleton skel = Skeleton::default_tpose();

    RefineConfig reference_config;
    reference_config.max_iters = 600;
    reference_config.objective_mode = ObjectiveMode::Paired;
    reference_config.gradient_mode = GradientMode::Analytic;
    const auto [reference, reference_report] = refine_pose(
        make_riding_pose(keypoints.at("seat")), skel, targets, reference_config);
    require(reference_report.best_loss < 1e-5,
            "reference rider failed to converge while pinning the fixture");

    BodyPose perturbed = reference;
    for (const char* joint : {"L_Elbow", "R_Elbow", "L_Knee", "R_Knee"}) {
        perturbed.thetas[skel.index_of(joint)] += Vec3(0.15, 0.15, 0.15);
    }

    RefineConfig config;  // LR 0.05, 50 iterations, chamfer objective
    const auto t0 = std::chrono::steady_clock::now();
    const auto [refined, report] = refine_pose(perturbed, skel, targets, config);
    const double wall = elapsed_since(t0);

    require(report.loss_trace.size() == 51, "loss trace must have 51 entries");
    require(report.best_loss <= 0.05 * report.initial_loss,
            "refinement did not reach 5% of the initial loss");
    double best = std::numeric_limits<double>::infinity();
    for (const double value : report.loss_trace) {
        const double next = std::min(best, value);
        require(next <= best, "best-so-far curve increased");
        best = next;
    }
    const RefineProblem problem(perturbed, skel, targets, config);
    std::array<bool, kBodyJointCount> adjustable{};
    for (const int j : problem.joint_indices()) {
        adjustable[j] = true;
    }
    for (int k = 0; k < kBodyJointCount; ++k) {
        if (!adjustable[k]) {
            require(refined.thetas[k] == perturbed.thetas[k],
                    "a fixed joint changed during refinement");
        }
    }
    require(refined.beta == perturbed.beta, "beta changed during refinement");
    require(wall < 10.0, "refinement exceeded the 10 s budget");
}

// ---- criterion 7: chamfer oracle equivalence ----

void criterion_chamfer() {
    std::mt19937_64 rng(1007);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    auto random_points = [&](int n) {
        std::vector<Vec3> points(n);
        for (auto& p : points) {
            p = Vec3(dist(rng), dist(rng), dist(rng));
        }
        return points;
    };
    auto oracle = [](const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
        long double total = 0.0L;
        for (const auto& p : a) {
            long double best = std::numeric_limits<long double>::infinity();
            for (const auto& q : b) {
                const long double dx = p.x() - q.x(), dy = p.y() - q.y(),
                                  dz = p.z() - q.z();
                best = std::min(best, dx * dx + dy * dy + dz * dz);
            }
            total += best / static_cast<long double>(a.size());
        }
        for (const auto& q : b) {
            long double best = std::numeric_limits<long double>::infinity();
            for (const auto& p : a) {
                const long double dx = p.x() - q.x(), dy = p.y() - q.y(),
                                  dz = p.z() - q.z();
                best = std::min(best, dx * dx + dy * dy + dz * dz);
            }
            total += best / static_cast<long double>(b.size());
        }
        return double(total);
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_points(5);
        const auto b = random_points(5);
        require(std::abs(chamfer_distance(a, b) - oracle(a, b)) < 1e-12,
                "chamfer deviates from the double-loop oracle");
    }
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_points(5);
        const auto b = random_points(5);
        const SE3 t(Rot3::rot_y(dist(rng)) * Rot3::rot_x(dist(rng)),
                    Vec3(dist(rng), dist(rng), dist(rng)));
        std::vector<Vec3> ta, tb;
        for (const auto& p : a) ta.push_back(t * p);
        for (const auto& q : b) tb.push_back(t * q);
        require(std::abs(chamfer_distance(ta, tb) - chamfer_distance(a, b)) < 1e-9,
                "chamfer is not rigid-motion invariant");
    }
}

// ---- criterion 8: dataset protocol ----

void criterion_dataset(const fs::path& scratch) {
    const auto cams = orbit_cameras(36, 12.0, 2084.97, 512);
    require(cams.size() == 36, "default orbit must have 36 views");
    require((cams[0].rotation.matrix() - Mat3::Identity()).cwiseAbs().maxCoeff() ==
                0.0,
            "camera 0 rotation must be the identity");
    require((cams[0].center - Vec3(0, 0, -12)).norm() == 0.0,
            "camera 0 center must be (0,0,-12)");
    for (std::size_t i = 0; i < cams.size(); ++i) {
        require(cams[i].fx == 2084.97 && cams[i].fy == 2084.97,
                "focal length must be 2084.97");
        require(cams[i].width == 512 && cams[i].height == 512,
                "images must be 512x512");
        const Vec3 a = cams[i].center.normalized();
        const Vec3 b = cams[(i + 1) % 36].center.normalized();
        const double step = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
        require(std::abs(step - 10.0 * kPi / 180.0) < 1e-9,
                "consecutive azimuths must be 10 degrees apart");
    }

    const fs::path fixture_dir = scratch / "dataset_fixture";
    const fs::path out_dir = scratch / "dataset_out";
    PipelineConfig config;
    config.out_dir = fixture_dir.string();
    config.seed = 0;
    config.fixture_density = 400;
    cmd_make_fixtures(config);
    config.bike_dir = (fixture_dir / "bike").string();
    config.out_dir = out_dir.string();
    cmd_dataset_gen(config);

    for (const char* part : {"frame_rear", "pedals", "steering_front"}) {
        const fs::path part_dir = out_dir / part;
        require(fs::exists(part_dir / "keypoints.json"),
                std::string(part) + " keypoints.json missing");
        int images = 0, masks = 0, cameras = 0;
        for (const auto& entry : fs::directory_iterator(part_dir / "img")) {
            (void)entry;
            ++images;
        }
        for (const auto& entry : fs::directory_iterator(part_dir / "mask")) {
            ++masks;
            // Every mask contains at least one set pixel: the PNG payload
            // of an all-zero mask is tiny, so decode-free sanity is not
            // enough; check via the renderer instead below.
            (void)entry;
        }
        for (const auto& entry : fs::directory_iterator(part_dir / "cam")) {
            (void)entry;
            ++cameras;
        }
        require(images == 36 && masks == 36 && cameras == 36,
                std::string(part) + " must have 36 views");
    }

    // Nonempty masks, checked in-process against the same fixtures.
    const BikeParts parts = load_bike_parts(fixture_dir / "bike");
    for (const auto& cam : cams) {
        for (const GaussianSet* set :
             {&parts.frame_rear, &parts.pedals, &parts.steering_front}) {
            const Preview preview = render_preview(*set, cam);
            int on = 0;
            for (const auto value : preview.mask.pixels) {
                on += (value == 255);
            }
            require(on > 0, "a part mask is empty");
        }
    }
}

// ---- criterion 9: file-format round trips ----

void criterion_round_trips(const fs::path& scratch) {
    std::mt19937_64 rng(1009);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);

    GaussianSet set;
    set.sh_degree = 3;
    for (int i = 0; i < 16; ++i) {
        set.means.push_back({float(dist(rng)), float(dist(rng)), float(dist(rng))});
        const UnitQuat q = UnitQuat::from_components(dist(rng) + 2.0, dist(rng),
                                                     dist(rng), dist(rng), 0.0);
        set.rotations.push_back({float(q.w), float(q.x), float(q.y), float(q.z)});
        set.log_scales.push_back(
            {float(dist(rng) - 4), float(dist(rng) - 4), float(dist(rng) - 4)});
        for (int k = 0; k < set.sh_width(); ++k) {
            set.sh_coeffs.push_back(float(dist(rng)));
        }
        set.opacities.push_back(float(dist(rng)));
    }
    const fs::path ply = scratch / "round.ply";
    save_splat(set, ply);
    const GaussianSet loaded = load_splat(ply);
    require(loaded.means == set.means && loaded.rotations == set.rotations &&
                loaded.log_scales == set.log_scales &&
                loaded.sh_coeffs == set.sh_coeffs &&
                loaded.opacities == set.opacities,
            "splat PLY round trip is not bit-exact");

    KeypointSet keypoints;
    keypoints.points["a"] = Vec3(dist(rng), dist(rng), dist(rng));
    keypoints.points["b"] = Vec3(1.0 / 3.0, -2.0 / 7.0, 1e-17);
    save_keypoints(keypoints, scratch / "kp.json");
    const KeypointSet kp_loaded = load_keypoints(scratch / "kp.json");
    require(kp_loaded.at("a") == keypoints.at("a") &&
                kp_loaded.at("b") == keypoints.at("b"),
            "keypoints JSON round trip is not exact");

    BodyPose pose;
    for (auto& theta : pose.thetas) {
        theta = Vec3(dist(rng), dist(rng), dist(rng));
    }
    pose.beta = {dist(rng), dist(rng), 0, 0, 0, 0, 0, 0, 0, dist(rng)};
    pose.global = SE3(Rot3::rot_y(0.4) * Rot3::rot_x(-0.2), Vec3(0.1, 0.2, 0.3));
    save_body_pose(pose, scratch / "pose.json");
    const BodyPose pose_loaded = load_body_pose(scratch / "pose.json");
    for (int k = 0; k < kBodyJointCount; ++k) {
        require((pose_loaded.thetas[k] - pose.thetas[k]).norm() < 1e-15,
                "body pose JSON round trip drifted");
    }
    require(pose_loaded.beta == pose.beta, "beta round trip drifted");

    const Skeleton skel = Skeleton::default_tpose();
    save_skeleton(skel, scratch / "skel.json");
    const Skeleton skel_loaded = load_skeleton(scratch / "skel.json");
    require(skel_loaded.joint_names == skel.joint_names &&
                skel_loaded.parents == skel.parents,
            "skeleton JSON round trip drifted");

    // Documented error classes on malformed files.
    const std::string good = read_file_bytes(ply);
    std::ofstream(scratch / "trunc.ply", std::ios::binary)
        << good.substr(0, good.size() - 10);
    try {
        load_splat(scratch / "trunc.ply");
        require(false, "truncated PLY must raise FormatError");
    } catch (const FormatError&) {
    }
    std::ofstream(scratch / "bad.json") << "{ not json";
    try {
        load_keypoints(scratch / "bad.json");
        require(false, "bad JSON must raise SchemaError");
    } catch (const SchemaError&) {
    }
    try {
        load_splat(scratch / "missing.ply");
        require(false, "missing file must raise IoError");
    } catch (const IoError&) {
    }
    std::ofstream(scratch / "short_pose.json") << R"({"thetas": [[0,0,0]]})";
    try {
        load_body_pose(scratch / "short_pose.json");
        require(false, "wrong joint count must raise SchemaError");
    } catch (const SchemaError&) {
    }
}

// ---- criterion 10: end-to-end determinism through the CLI ----

void criterion_determinism(const fs::path& scratch) {
    auto run = [&](const fs::path& root) {
        const std::string fixtures = (root / "fx").string();
        auto cli = [&](const std::string& args) {
            const std::string command =
                std::string(ARTIC_RIG_BINARY) + " " + args + " > /dev/null 2>&1";
            require(std::system(command.c_str()) == 0, "CLI step failed: " + args);
        };
        cli("make-fixtures --out " + fixtures + " --seed 9 --density 200");
        cli("repose-bike --bike-dir " + fixtures + "/bike --theta-s 90 --theta-p 90"
            " --out " + (root / "posed").string());
        cli("refine --bike-dir " + fixtures + "/bike --skeleton " + fixtures +
            "/skeleton.json --pose " + fixtures + "/rider_pose.json --iters 15"
            " --out " + (root / "refined").string());
        cli("compose --bike-dir " + fixtures + "/bike --skeleton " + fixtures +
            "/skeleton.json --pose " + fixtures + "/rider_pose.json"
            " --theta-p 35 --theta-s 10 --iters 15 --gradient-mode analytic"
            " --out " + (root / "cyclist").string());
        cli("dataset-gen --bike-dir " + fixtures + "/bike --views 6 --size 128"
            " --out " + (root / "dataset").string());
    };
    run(scratch / "run1");
    run(scratch / "run2");

    std::map<std::string, std::string> tree1, tree2;
    for (const auto& entry : fs::recursive_directory_iterator(scratch / "run1")) {
        if (entry.is_regular_file()) {
            tree1[fs::relative(entry.path(), scratch / "run1").string()] =
                read_file_bytes(entry.path());
        }
    }
    for (const auto& entry : fs::recursive_directory_iterator(scratch / "run2")) {
        if (entry.is_regular_file()) {
            tree2[fs::relative(entry.path(), scratch / "run2").string()] =
                read_file_bytes(entry.path());
        }
    }
    require(!tree1.empty(), "pipeline produced no files");
    require(tree1.size() == tree2.size(), "directory trees differ in file count");
    for (const auto& [name, bytes] : tree1) {
        require(tree2.count(name) == 1, "missing file in second run: " + name);
        require(bytes == tree2.at(name), "file differs between runs: " + name);
    }
}

}  // namespace

int main() {
    ScratchDir scratch;
    const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
        {"articulation fixes shaft points and preserves distances",
         [] { criterion_articulation(); }},
        {"quarter-turn pose matches the axis-angle oracle and renders",
         [&] { criterion_quarter_turn(scratch.path()); }},
        {"crank/steering angles round trip through the forward model",
         [] { criterion_angle_round_trip(); }},
        {"forward kinematics preserves bones, locality and equivariance",
         [] { criterion_fk(); }},
        {"analytic gradients match finite differences and the 1-DoF benchmark",
         [] { criterion_gradients(); }},
        {"IK refinement converges under paper settings",
         [] { criterion_ik_convergence(); }},
        {"chamfer distance matches the exhaustive oracle",
         [] { criterion_chamfer(); }},
        {"multi-view dataset follows the 36-view protocol",
         [&] { criterion_dataset(scratch.path()); }},
        {"file formats round trip with documented error classes",
         [&] { criterion_round_trips(scratch.path()); }},
        {"end-to-end pipeline is byte-deterministic",
         [&] { criterion_determinism(scratch.path()); }},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second();
            std::printf("PASS  %2zu  %s  (%.2fs)\n", i + 1, criteria[i].first.c_str(),
                        elapsed_since(t0));
        } catch (const std::exception& e) {
            std::printf("FAIL  %2zu  %s: %s\n", i + 1, criteria[i].first.c_str(),
                        e.what());
            ++failures;
        }
    }
    if (failures > 0) {
        std::printf("%d of %zu acceptance criteria failed\n", failures,
                    criteria.size());
        return 1;
    }
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
    return 0;
}
