#pragma once

#include <array>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "artic/body.hpp"
#include "artic/keypoints.hpp"

namespace artic {

enum class GradientMode { FiniteDifference, Analytic };
enum class ObjectiveMode { Chamfer, Paired };

inline constexpr int kRefineJointCount = 11;
inline constexpr int kRefineParamCount = 3 * kRefineJointCount;

/// The eleven adjustable joint roles in parameter order; everything else
/// stays fixed during refinement.
const std::array<std::string, kRefineJointCount>& refine_joint_roles();

/// Default role -> skeleton joint name mapping (belly button -> Spine1,
/// the rest are the literal shoulder/elbow/hip/knee/ankle joints).
std::map<std::string, std::string> default_refine_joint_map();

struct RefineConfig {
    double learning_rate = 0.05;
    int max_iters = 50;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    GradientMode gradient_mode = GradientMode::FiniteDifference;
    double fd_step = 1e-4;  // radians
    ObjectiveMode objective_mode = ObjectiveMode::Chamfer;
    std::map<std::string, std::string> refine_joint_map = default_refine_joint_map();

    /// Positive learning rate and step, max_iters >= 1, a joint for each
    /// of the eleven roles resolving to distinct skeleton indices.
    void validate(const Skeleton& skel) const;
};

/// The five bike anchor points the contact joints are pulled toward,
/// in the same order as ContactJoints (wrists, pelvis, ankles map to
/// handles, seat, pedals respectively).
struct BikeTargets {
    Vec3 l_handle, r_handle, seat, l_pedal, r_pedal;

    static BikeTargets from_keypoints(const KeypointSet& keypoints);

    std::array<Vec3, 5> as_array() const {
        return {l_handle, r_handle, seat, l_pedal, r_pedal};
    }
};

struct RefineReport {
    std::vector<double> loss_trace;  // max_iters + 1 entries, start included
    int best_iter = 0;
    double initial_loss = 0.0;
    double best_loss = 0.0;
    double elapsed_seconds = 0.0;
    std::string diagnostic;  // nonempty only when the loop aborted early
};

/// Symmetric mean-of-squared-nearest-neighbor distance:
/// (1/|A|) sum_a min_b ||a-b||^2 + (1/|B|) sum_b min_a ||a-b||^2.
/// Empty inputs throw DegenerateGeometryError.
double chamfer_distance(std::span<const Vec3> a, std::span<const Vec3> b);

/// Loss/gradient view of one refinement problem: 33 parameters are the
/// axis-angle values of the eleven adjustable joints overlaid on a fixed
/// base pose.
class RefineProblem {
public:
    RefineProblem(const BodyPose& base, const Skeleton& skel,
                  const BikeTargets& targets, const RefineConfig& config);

    /// Current subset values of the base pose (the delta-zero start).
    std::vector<double> initial_params() const;

    /// Objective at the overlaid pose; throws SchemaError on non-finite
    /// parameters. Paired mode averages the five squared residuals per
    /// set on both sides (same scale as the chamfer objective).
    double loss(std::span<const double> params) const;

    /// Dispatches on config.gradient_mode.
    std::vector<double> gradient(std::span<const double> params) const;

    std::vector<double> gradient_fd(std::span<const double> params) const;
    std::vector<double> gradient_analytic(std::span<const double> params) const;

    /// Base pose with the subset overlaid; joints outside the subset keep
    /// their exact bits.
    BodyPose pose_with(std::span<const double> params) const;

    const std::array<int, kRefineJointCount>& joint_indices() const {
        return joint_indices_;
    }

private:
    BodyPose base_;
    const Skeleton* skel_;
    BikeTargets targets_;
    RefineConfig config_;
    std::array<int, kRefineJointCount> joint_indices_;
};

/// Bias-corrected Adam moments; one state per optimization run.
struct AdamState {
    std::vector<double> m, v;
    long t = 0;

    explicit AdamState(std::size_t dim) : m(dim, 0.0), v(dim, 0.0) {}
};

/// One Adam update; returns the parameter delta (to be added to the
/// current iterate) and advances the state. Deterministic.
std::vector<double> adam_step(AdamState& state, std::span<const double> grad,
                              const RefineConfig& config);

/// Generic best-iterate Adam loop: evaluates the objective at the start
/// and after every step, keeps the best parameters seen, and stops early
/// (with a diagnostic) if the objective goes non-finite.
struct MinimizeResult {
    std::vector<double> best_params;
    RefineReport report;
};

MinimizeResult adam_minimize(
    const std::function<double(std::span<const double>)>& loss,
    const std::function<std::vector<double>(std::span<const double>)>& gradient,
    std::vector<double> x0, const RefineConfig& config);

/// Full pose refinement: Adam from delta zero, best-iterate selection,
/// fixed joints and beta bit-identical to the input.
std::pair<BodyPose, RefineReport> refine_pose(const BodyPose& pose,
                                              const Skeleton& skel,
                                              const BikeTargets& targets,
                                              const RefineConfig& config);

}  // namespace artic
