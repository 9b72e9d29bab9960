#include "artic/refine.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "artic/errors.hpp"

namespace artic {

const std::array<std::string, kRefineJointCount>& refine_joint_roles() {
    static const std::array<std::string, kRefineJointCount> roles = {
        "bbtn", "Lsho", "Rsho", "Lelb", "Relb", "Lhip",
        "Rhip", "Lknee", "Rknee", "Lank", "Rank"};
    return roles;
}

std::map<std::string, std::string> default_refine_joint_map() {
    return {
        {"bbtn", "Spine1"},   {"Lsho", "L_Shoulder"}, {"Rsho", "R_Shoulder"},
        {"Lelb", "L_Elbow"},  {"Relb", "R_Elbow"},    {"Lhip", "L_Hip"},
        {"Rhip", "R_Hip"},    {"Lknee", "L_Knee"},    {"Rknee", "R_Knee"},
        {"Lank", "L_Ankle"},  {"Rank", "R_Ankle"},
    };
}

void RefineConfig::validate(const Skeleton& skel) const {
    if (!(learning_rate > 0.0)) {
        throw ConfigError("learning_rate must be positive");
    }
    if (max_iters < 1) {
        throw ConfigError("max_iters must be >= 1");
    }
    if (!(fd_step > 0.0)) {
        throw ConfigError("fd_step must be positive");
    }
    if (refine_joint_map.size() != kRefineJointCount) {
        throw ConfigError("refine_joint_map must have exactly 11 entries, got " +
                          std::to_string(refine_joint_map.size()));
    }
    std::set<int> indices;
    for (const auto& role : refine_joint_roles()) {
        const auto it = refine_joint_map.find(role);
        if (it == refine_joint_map.end()) {
            throw ConfigError("refine_joint_map is missing role '" + role + "'");
        }
        indices.insert(skel.index_of(it->second));
    }
    if (indices.size() != kRefineJointCount) {
        throw ConfigError("refine_joint_map entries must be distinct joints");
    }
}

BikeTargets BikeTargets::from_keypoints(const KeypointSet& keypoints) {
    return BikeTargets{
        keypoints.at("handle_L"), keypoints.at("handle_R"), keypoints.at("seat"),
        keypoints.at("pedal_L"), keypoints.at("pedal_R")};
}

double chamfer_distance(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty()) {
        throw DegenerateGeometryError("chamfer distance of an empty point set");
    }
    double forward = 0.0;
    for (const Vec3& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& q : b) {
            best = std::min(best, (p - q).squaredNorm());
        }
        forward += best;
    }
    double backward = 0.0;
    for (const Vec3& q : b) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vec3& p : a) {
            best = std::min(best, (q - p).squaredNorm());
        }
        backward += best;
    }
    return forward / double(a.size()) + backward / double(b.size());
}

RefineProblem::RefineProblem(const BodyPose& base, const Skeleton& skel,
                             const BikeTargets& targets,
                             const RefineConfig& config)
    : base_(base), skel_(&skel), targets_(targets), config_(config) {
    skel.validate();
    config.validate(skel);
    const auto& roles = refine_joint_roles();
    for (int q = 0; q < kRefineJointCount; ++q) {
        joint_indices_[q] = skel.index_of(config.refine_joint_map.at(roles[q]));
    }
}

std::vector<double> RefineProblem::initial_params() const {
    std::vector<double> params(kRefineParamCount);
    for (int q = 0; q < kRefineJointCount; ++q) {
        const Vec3& theta = base_.thetas[joint_indices_[q]];
        params[3 * q + 0] = theta.x();
        params[3 * q + 1] = theta.y();
        params[3 * q + 2] = theta.z();
    }
    return params;
}

BodyPose RefineProblem::pose_with(std::span<const double> params) const {
    BodyPose pose = base_;
    for (int q = 0; q < kRefineJointCount; ++q) {
        pose.thetas[joint_indices_[q]] =
            Vec3(params[3 * q], params[3 * q + 1], params[3 * q + 2]);
    }
    return pose;
}

double RefineProblem::loss(std::span<const double> params) const {
    if (params.size() != kRefineParamCount) {
        throw SchemaError("expected 33 refinement parameters, got " +
                          std::to_string(params.size()));
    }
    for (const double p : params) {
        if (!std::isfinite(p)) {
            throw SchemaError("non-finite refinement parameter");
        }
    }
    const auto joints = forward_kinematics(*skel_, pose_with(params));
    const auto body = extract_contact_joints(*skel_, joints).as_array();
    const auto bike = targets_.as_array();
    if (config_.objective_mode == ObjectiveMode::Chamfer) {
        return chamfer_distance(body, bike);
    }
    // Paired: the five named correspondences, averaged per set on both
    // sides so the value is on the chamfer scale.
    double sum = 0.0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        sum += (body[i] - bike[i]).squaredNorm();
    }
    return 2.0 * sum / double(body.size());
}

std::vector<double> RefineProblem::gradient(std::span<const double> params) const {
    return config_.gradient_mode == GradientMode::Analytic
               ? gradient_analytic(params)
               : gradient_fd(params);
}

std::vector<double> RefineProblem::gradient_fd(std::span<const double> params) const {
    std::vector<double> x(params.begin(), params.end());
    std::vector<double> grad(kRefineParamCount);
    const double h = config_.fd_step;
    for (int i = 0; i < kRefineParamCount; ++i) {
        const double saved = x[i];
        x[i] = saved + h;
        const double plus = loss(x);
        x[i] = saved - h;
        const double minus = loss(x);
        x[i] = saved;
        grad[i] = (plus - minus) / (2.0 * h);
    }
    return grad;
}

namespace {

Mat3 skew(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return m;
}

// d/dv_i of the Rodrigues rotation R(v), v an axis-angle 3-vector
// (Gallego & Yezzi closed form; skew(e_i) at the origin).
std::array<Mat3, 3> rodrigues_jacobian(const Vec3& v) {
    const double n2 = v.squaredNorm();
    std::array<Mat3, 3> jac;
    if (n2 < 1e-16) {
        for (int i = 0; i < 3; ++i) {
            jac[i] = skew(Vec3::Unit(i));
        }
        return jac;
    }
    const Mat3 r = axis_angle_rotation(v).matrix();
    const Mat3 v_skew = skew(v);
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = Vec3::Unit(i);
        const Mat3 num = v[i] * v_skew + skew(Vec3(v.cross((Mat3::Identity() - r) * e)));
        jac[i] = (num / n2) * r;
    }
    return jac;
}

}  // namespace

std::vector<double> RefineProblem::gradient_analytic(
    std::span<const double> params) const {
    const BodyPose pose = pose_with(params);
    // loss() replicates the finiteness checks.
    for (const double p : params) {
        if (!std::isfinite(p)) {
            throw SchemaError("non-finite refinement parameter");
        }
    }
    const FkResult fk = forward_kinematics_full(*skel_, pose);

    const std::array<int, 5> contact_indices = {
        skel_->index_of("L_Wrist"), skel_->index_of("R_Wrist"),
        skel_->index_of("Pelvis"), skel_->index_of("L_Ankle"),
        skel_->index_of("R_Ankle")};
    std::array<Vec3, 5> body;
    for (int i = 0; i < 5; ++i) {
        body[i] = fk.positions[contact_indices[i]];
    }
    const auto bike = targets_.as_array();

    // dL/d(body point). Chamfer: each body point pulls toward its nearest
    // bike point, plus a term for every bike point it is nearest to (ties
    // resolve to the first minimizer; a one-sided subgradient).
    std::array<Vec3, 5> dl_dp;
    if (config_.objective_mode == ObjectiveMode::Paired) {
        for (int i = 0; i < 5; ++i) {
            dl_dp[i] = (4.0 / 5.0) * (body[i] - bike[i]);
        }
    } else {
        for (auto& g : dl_dp) {
            g = Vec3::Zero();
        }
        for (int i = 0; i < 5; ++i) {
            int nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < 5; ++j) {
                const double d = (body[i] - bike[j]).squaredNorm();
                if (d < best) {
                    best = d;
                    nearest = j;
                }
            }
            dl_dp[i] += (2.0 / 5.0) * (body[i] - bike[nearest]);
        }
        for (int j = 0; j < 5; ++j) {
            int nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 5; ++i) {
                const double d = (body[i] - bike[j]).squaredNorm();
                if (d < best) {
                    best = d;
                    nearest = i;
                }
            }
            dl_dp[nearest] += (2.0 / 5.0) * (body[nearest] - bike[j]);
        }
    }

    // Ancestor chains of each contact joint.
    std::array<std::set<int>, 5> ancestors;
    for (int i = 0; i < 5; ++i) {
        int k = contact_indices[i];
        while (skel_->parents[k] >= 0) {
            k = skel_->parents[k];
            ancestors[i].insert(k);
        }
    }

    std::vector<double> grad(kRefineParamCount, 0.0);
    for (int q = 0; q < kRefineJointCount; ++q) {
        const int j = joint_indices_[q];
        const Vec3 theta(params[3 * q], params[3 * q + 1], params[3 * q + 2]);
        const auto local_jac = rodrigues_jacobian(theta);
        const int parent = skel_->parents[j];
        const Mat3 g_parent = parent >= 0 ? fk.orientations[parent].matrix()
                                          : pose.global.rotation().matrix();
        const Mat3 g_joint = fk.orientations[j].matrix();
        for (int i = 0; i < 5; ++i) {
            if (!ancestors[i].count(j)) {
                continue;  // this joint cannot move that contact point
            }
            const Vec3 lever =
                g_joint.transpose() * (fk.positions[contact_indices[i]] - fk.positions[j]);
            for (int c = 0; c < 3; ++c) {
                const Vec3 dp = g_parent * (local_jac[c] * lever);
                grad[3 * q + c] += dl_dp[i].dot(dp);
            }
        }
    }
    return grad;
}

std::vector<double> adam_step(AdamState& state, std::span<const double> grad,
                              const RefineConfig& config) {
    if (state.m.size() != grad.size() || state.v.size() != grad.size()) {
        throw SchemaError("adam state dimension does not match gradient");
    }
    state.t += 1;
    const double b1 = config.adam_beta1;
    const double b2 = config.adam_beta2;
    const double bias1 = 1.0 - std::pow(b1, double(state.t));
    const double bias2 = 1.0 - std::pow(b2, double(state.t));
    std::vector<double> delta(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * grad[i];
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double m_hat = state.m[i] / bias1;
        const double v_hat = state.v[i] / bias2;
        delta[i] = -config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_eps);
    }
    return delta;
}

MinimizeResult adam_minimize(
    const std::function<double(std::span<const double>)>& loss,
    const std::function<std::vector<double>(std::span<const double>)>& gradient,
    std::vector<double> x0, const RefineConfig& config) {
    const auto start_time = std::chrono::steady_clock::now();
    MinimizeResult result;
    RefineReport& report = result.report;

    std::vector<double> x = std::move(x0);
    const double start_loss = loss(x);
    report.loss_trace.push_back(start_loss);
    report.initial_loss = start_loss;
    report.best_loss = start_loss;
    report.best_iter = 0;
    result.best_params = x;

    AdamState state(x.size());
    for (int iter = 1; iter <= config.max_iters; ++iter) {
        const std::vector<double> grad = gradient(x);
        const std::vector<double> delta = adam_step(state, grad, config);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += delta[i];
        }
        double value = std::numeric_limits<double>::quiet_NaN();
        bool finite = true;
        try {
            value = loss(x);
            finite = std::isfinite(value);
        } catch (const Error&) {
            finite = false;
        }
        if (!finite) {
            report.diagnostic = "objective became non-finite at iteration " +
                                std::to_string(iter) + "; returning best iterate";
            break;
        }
        report.loss_trace.push_back(value);
        if (value < report.best_loss) {
            report.best_loss = value;
            report.best_iter = iter;
            result.best_params = x;
        }
    }

    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time)
            .count();
    return result;
}

std::pair<BodyPose, RefineReport> refine_pose(const BodyPose& pose,
                                              const Skeleton& skel,
                                              const BikeTargets& targets,
                                              const RefineConfig& config) {
    const RefineProblem problem(pose, skel, targets, config);
    MinimizeResult result = adam_minimize(
        [&](std::span<const double> x) { return problem.loss(x); },
        [&](std::span<const double> x) { return problem.gradient(x); },
        problem.initial_params(), config);
    BodyPose refined = problem.pose_with(result.best_params);
    refined.canonicalize();
    return {std::move(refined), std::move(result.report)};
}

}  // namespace artic
