#include <benchmark/benchmark.h>

#include <random>

#include "artic/bike_rig.hpp"
#include "artic/body.hpp"
#include "artic/refine.hpp"
#include "artic/render.hpp"
#include "artic/sh_rotation.hpp"

namespace {

artic::Rot3 random_rotation(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::Vector3d axis;
    do {
        axis = Eigen::Vector3d(dist(rng), dist(rng), dist(rng));
    } while (axis.norm() < 1e-3);
    return artic::Rot3::about_axis(axis.normalized(), dist(rng) * 3.0);
}

void BM_transform_gaussians(benchmark::State& state) {
    const artic::BikeParts parts = artic::make_toy_bike(1, int(state.range(0)));
    std::mt19937_64 rng(7);
    const artic::SE3 t(random_rotation(rng), artic::Vec3(0.3, -0.1, 2.0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(artic::transform_gaussians(parts.frame_rear, t));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_transform_gaussians)->Arg(1000)->Arg(10000);

void BM_sh_rotation_build(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const artic::Rot3 r = random_rotation(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(artic::ShRotation(r, 3));
    }
}
BENCHMARK(BM_sh_rotation_build);

void BM_forward_kinematics(benchmark::State& state) {
    const artic::Skeleton skel = artic::Skeleton::default_tpose();
    const artic::BodyPose pose = artic::make_riding_pose(artic::Vec3(0, 0.9, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(artic::forward_kinematics(skel, pose));
    }
}
BENCHMARK(BM_forward_kinematics);

void BM_chamfer_5x5(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<artic::Vec3> a(5), b(5);
    for (int i = 0; i < 5; ++i) {
        a[i] = artic::Vec3(dist(rng), dist(rng), dist(rng));
        b[i] = artic::Vec3(dist(rng), dist(rng), dist(rng));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(artic::chamfer_distance(a, b));
    }
}
BENCHMARK(BM_chamfer_5x5);

void BM_refine_iteration(benchmark::State& state) {
    const artic::BikeParts parts = artic::make_toy_bike(0, 200);
    const auto [splats, keypoints] =
        artic::compose_bike(parts, artic::BikePose8DoF{});
    const artic::Skeleton skel = artic::Skeleton::default_tpose();
    const artic::BodyPose pose = artic::make_riding_pose(keypoints.at("seat"));
    artic::RefineConfig config;
    config.max_iters = 1;
    config.gradient_mode =
        state.range(0) ? artic::GradientMode::Analytic
                       : artic::GradientMode::FiniteDifference;
    const artic::BikeTargets targets = artic::BikeTargets::from_keypoints(keypoints);
    for (auto _ : state) {
        benchmark::DoNotOptimize(artic::refine_pose(pose, skel, targets, config));
    }
}
BENCHMARK(BM_refine_iteration)->Arg(0)->Arg(1);

void BM_render_preview(benchmark::State& state) {
    const artic::BikeParts parts = artic::make_toy_bike(2, 2000);
    const artic::Camera cam;
    for (auto _ : state) {
        benchmark::DoNotOptimize(artic::render_preview(parts.frame_rear, cam));
    }
}
BENCHMARK(BM_render_preview);

}  // namespace

BENCHMARK_MAIN();
