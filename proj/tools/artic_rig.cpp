#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "artic/errors.hpp"
#include "artic/ini.hpp"
#include "artic/pipeline.hpp"

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

struct Flags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> bike_dir, skeleton, body_pose, rider_splat;
    std::optional<std::string> theta_p_deg, theta_s_deg;  // number or "derive"
    std::optional<double> theta_x_deg, theta_y_deg, theta_z_deg;
    std::optional<double> t_x, t_y, t_z;
    std::optional<double> lr, fd_step;
    std::optional<int> iters;
    std::optional<std::string> gradient_mode, objective_mode, sh_mode;
    std::optional<int> views, image_size;
    std::optional<double> radius, focal, azimuth_step;
    std::optional<std::string> orbit_center;
    std::optional<int> density;
};

void add_common_flags(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config_path, "pipeline config file");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "fixture RNG seed");
}

void apply_angle_flag(const std::optional<std::string>& flag, double& angle_rad,
                      bool& derive, const char* name) {
    if (!flag) {
        return;
    }
    if (*flag == "derive") {
        derive = true;
        return;
    }
    derive = false;
    try {
        std::size_t used = 0;
        angle_rad = kDegToRad * std::stod(*flag, &used);
        if (used != flag->size()) {
            throw std::invalid_argument(*flag);
        }
    } catch (const std::exception&) {
        throw artic::ConfigError(std::string(name) +
                                 " must be a number in degrees or 'derive'");
    }
}

artic::PipelineConfig build_config(const Flags& flags) {
    artic::PipelineConfig config;
    if (!flags.config_path.empty()) {
        config = artic::load_pipeline_config(artic::IniFile::parse_file(flags.config_path));
    }
    if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
    if (flags.seed) config.seed = *flags.seed;
    if (flags.bike_dir) config.bike_dir = *flags.bike_dir;
    if (flags.skeleton) config.skeleton_path = *flags.skeleton;
    if (flags.body_pose) config.body_pose_path = *flags.body_pose;
    if (flags.rider_splat) config.rider_splat_path = *flags.rider_splat;
    apply_angle_flag(flags.theta_p_deg, config.pose.theta_p,
                     config.derive_theta_p, "--theta-p");
    apply_angle_flag(flags.theta_s_deg, config.pose.theta_s,
                     config.derive_theta_s, "--theta-s");
    if (flags.theta_x_deg) config.pose.theta_x = kDegToRad * *flags.theta_x_deg;
    if (flags.theta_y_deg) config.pose.theta_y = kDegToRad * *flags.theta_y_deg;
    if (flags.theta_z_deg) config.pose.theta_z = kDegToRad * *flags.theta_z_deg;
    if (flags.t_x) config.pose.translation.x() = *flags.t_x;
    if (flags.t_y) config.pose.translation.y() = *flags.t_y;
    if (flags.t_z) config.pose.translation.z() = *flags.t_z;
    if (flags.lr) config.refine.learning_rate = *flags.lr;
    if (flags.iters) config.refine.max_iters = *flags.iters;
    if (flags.fd_step) config.refine.fd_step = *flags.fd_step;
    if (flags.gradient_mode) {
        if (*flags.gradient_mode == "finite-difference") {
            config.refine.gradient_mode = artic::GradientMode::FiniteDifference;
        } else if (*flags.gradient_mode == "analytic") {
            config.refine.gradient_mode = artic::GradientMode::Analytic;
        } else {
            throw artic::ConfigError(
                "--gradient-mode must be finite-difference or analytic");
        }
    }
    if (flags.objective_mode) {
        if (*flags.objective_mode == "chamfer") {
            config.refine.objective_mode = artic::ObjectiveMode::Chamfer;
        } else if (*flags.objective_mode == "paired") {
            config.refine.objective_mode = artic::ObjectiveMode::Paired;
        } else {
            throw artic::ConfigError("--objective must be chamfer or paired");
        }
    }
    if (flags.sh_mode) {
        if (*flags.sh_mode == "full") {
            config.sh_mode = artic::ShMode::Full;
        } else if (*flags.sh_mode == "dc-only") {
            config.sh_mode = artic::ShMode::DcOnly;
        } else {
            throw artic::ConfigError("--sh-mode must be full or dc-only");
        }
    }
    if (flags.views) config.dataset.n_views = *flags.views;
    if (flags.image_size) config.dataset.image_size = *flags.image_size;
    if (flags.radius) config.dataset.radius = *flags.radius;
    if (flags.focal) config.dataset.focal = *flags.focal;
    if (flags.azimuth_step) {
        config.dataset.azimuth_step_given = true;
        config.dataset.azimuth_step_deg = *flags.azimuth_step;
    }
    if (flags.orbit_center) {
        std::istringstream in(*flags.orbit_center);
        std::string part;
        int i = 0;
        try {
            while (std::getline(in, part, ',') && i < 3) {
                std::size_t used = 0;
                config.dataset.orbit_center[i++] = std::stod(part, &used);
                if (used != part.size()) {
                    throw std::invalid_argument(part);
                }
            }
        } catch (const std::exception&) {
            i = 0;
        }
        if (i != 3) {
            throw artic::ConfigError("--orbit-center expects x,y,z");
        }
    }
    if (flags.density) config.fixture_density = *flags.density;
    if (config.dataset.azimuth_step_given &&
        std::abs(config.dataset.n_views * config.dataset.azimuth_step_deg -
                 360.0) > 1e-9) {
        throw artic::ConfigError("n_views * azimuth_step_deg must equal 360");
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Articulated splat-bicycle rig and cyclist composition"};
    app.require_subcommand(1);

    Flags flags;

    CLI::App* make_fixtures = app.add_subcommand(
        "make-fixtures", "generate the procedural toy bike, skeleton and rider pose");
    add_common_flags(make_fixtures, flags);
    make_fixtures->add_option("--density", flags.density, "splats per bike part");

    CLI::App* repose = app.add_subcommand(
        "repose-bike", "articulate and place a bike at an 8-DoF pose");
    add_common_flags(repose, flags);
    repose->add_option("--bike-dir", flags.bike_dir, "bike asset directory");
    repose->add_option("--theta-p", flags.theta_p_deg, "crank angle (deg)");
    repose->add_option("--theta-s", flags.theta_s_deg, "steering angle (deg)");
    repose->add_option("--theta-x", flags.theta_x_deg, "body rotation X (deg)");
    repose->add_option("--theta-y", flags.theta_y_deg, "body rotation Y (deg)");
    repose->add_option("--theta-z", flags.theta_z_deg, "body rotation Z (deg)");
    repose->add_option("--t-x", flags.t_x, "body translation X (m)");
    repose->add_option("--t-y", flags.t_y, "body translation Y (m)");
    repose->add_option("--t-z", flags.t_z, "body translation Z (m)");
    repose->add_option("--sh-mode", flags.sh_mode, "full | dc-only");

    CLI::App* derive = app.add_subcommand(
        "derive-angles", "derive crank/steering angles from a rider pose");
    add_common_flags(derive, flags);
    derive->add_option("--skeleton", flags.skeleton, "skeleton JSON");
    derive->add_option("--pose", flags.body_pose, "rider pose JSON");

    CLI::App* refine = app.add_subcommand(
        "refine", "refine a rider pose against the posed bike keypoints");
    add_common_flags(refine, flags);
    refine->add_option("--bike-dir", flags.bike_dir, "bike asset directory");
    refine->add_option("--skeleton", flags.skeleton, "skeleton JSON");
    refine->add_option("--pose", flags.body_pose, "rider pose JSON");
    refine->add_option("--theta-p", flags.theta_p_deg, "crank angle (deg) or 'derive'");
    refine->add_option("--theta-s", flags.theta_s_deg, "steering angle (deg) or 'derive'");
    refine->add_option("--lr", flags.lr, "Adam learning rate");
    refine->add_option("--iters", flags.iters, "Adam iterations");
    refine->add_option("--fd-step", flags.fd_step, "finite-difference step (rad)");
    refine->add_option("--gradient-mode", flags.gradient_mode,
                       "finite-difference | analytic");
    refine->add_option("--objective", flags.objective_mode, "chamfer | paired");

    CLI::App* compose = app.add_subcommand(
        "compose", "assemble the full cyclist (bike + refined rider)");
    add_common_flags(compose, flags);
    compose->add_option("--bike-dir", flags.bike_dir, "bike asset directory");
    compose->add_option("--skeleton", flags.skeleton, "skeleton JSON");
    compose->add_option("--pose", flags.body_pose, "rider pose JSON");
    compose->add_option("--rider-splat", flags.rider_splat,
                        "posed rider splat PLY to concatenate");
    compose->add_option("--theta-p", flags.theta_p_deg, "crank angle (deg) or 'derive'");
    compose->add_option("--theta-s", flags.theta_s_deg, "steering angle (deg) or 'derive'");
    compose->add_option("--theta-x", flags.theta_x_deg, "assembly rotation X (deg)");
    compose->add_option("--theta-y", flags.theta_y_deg, "assembly rotation Y (deg)");
    compose->add_option("--theta-z", flags.theta_z_deg, "assembly rotation Z (deg)");
    compose->add_option("--t-x", flags.t_x, "assembly translation X (m)");
    compose->add_option("--t-y", flags.t_y, "assembly translation Y (m)");
    compose->add_option("--t-z", flags.t_z, "assembly translation Z (m)");
    compose->add_option("--lr", flags.lr, "Adam learning rate");
    compose->add_option("--iters", flags.iters, "Adam iterations");
    compose->add_option("--gradient-mode", flags.gradient_mode,
                        "finite-difference | analytic");
    compose->add_option("--objective", flags.objective_mode, "chamfer | paired");
    compose->add_option("--sh-mode", flags.sh_mode, "full | dc-only");

    CLI::App* dataset = app.add_subcommand(
        "dataset-gen", "emit the per-part multi-view image/mask/camera dataset");
    add_common_flags(dataset, flags);
    dataset->add_option("--bike-dir", flags.bike_dir, "bike asset directory");
    dataset->add_option("--views", flags.views, "number of azimuth views");
    dataset->add_option("--azimuth-step", flags.azimuth_step, "azimuth step (deg)");
    dataset->add_option("--radius", flags.radius, "orbit radius (m)");
    dataset->add_option("--size", flags.image_size, "image size (px)");
    dataset->add_option("--focal", flags.focal, "focal length (px)");
    dataset->add_option("--orbit-center", flags.orbit_center, "orbit center x,y,z");

    CLI11_PARSE(app, argc, argv);

    try {
        const artic::PipelineConfig config = build_config(flags);
        if (make_fixtures->parsed()) {
            artic::cmd_make_fixtures(config);
        } else if (repose->parsed()) {
            artic::cmd_repose_bike(config);
        } else if (derive->parsed()) {
            const auto [theta_p, theta_s] = artic::cmd_derive_angles(config);
            std::printf("theta_p_deg %.9f\ntheta_s_deg %.9f\n",
                        theta_p / kDegToRad, theta_s / kDegToRad);
        } else if (refine->parsed()) {
            artic::cmd_refine(config);
        } else if (compose->parsed()) {
            artic::cmd_compose_cyclist(config);
        } else if (dataset->parsed()) {
            artic::cmd_dataset_gen(config);
        }
    } catch (const artic::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const artic::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 3;
    } catch (const artic::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return 4;
    } catch (const artic::SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return 4;
    } catch (const artic::DegenerateGeometryError& e) {
        std::fprintf(stderr, "degenerate geometry: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
