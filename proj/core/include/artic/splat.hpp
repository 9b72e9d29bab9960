#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "artic/se3.hpp"

namespace artic {

/// Which spherical-harmonic bands a rigid transform rotates.
/// DcOnly leaves bands >= 1 untouched (cheap preview-quality mode).
enum class ShMode {
    Full,
    DcOnly,
};

/// Column of Gaussian splats: positions, orientations, log-scales,
/// per-channel SH color coefficients and opacity logits.
///
/// Attributes are kept as float32 exactly as they live in splat PLY
/// files; math runs in double at the operation boundaries. The SH block
/// of one splat is channel-major: (L+1)^2 coefficients for R, then G,
/// then B, with the DC term first in each channel.
struct GaussianSet {
    int sh_degree = 0;  // L in 0..3

    std::vector<std::array<float, 3>> means;
    std::vector<std::array<float, 4>> rotations;  // (w,x,y,z), unit, w >= 0
    std::vector<std::array<float, 3>> log_scales;
    std::vector<float> sh_coeffs;  // N * 3*(L+1)^2
    std::vector<float> opacities;  // pre-sigmoid logits

    std::size_t size() const { return means.size(); }

    int coeffs_per_channel() const { return (sh_degree + 1) * (sh_degree + 1); }
    int sh_width() const { return 3 * coeffs_per_channel(); }

    /// Normalizes and canonicalizes (w >= 0) every rotation in place.
    /// Quaternions already unit within 1e-6 keep their bits.
    void canonicalize_rotations();

    /// Throws SchemaError if array lengths disagree, the SH width is wrong,
    /// the degree is out of range or a rotation is not unit within 1e-6.
    void validate() const;
};

/// Rigid motion of every splat attribute: means by T, orientations
/// left-multiplied by T's rotation, SH bands rotated per channel.
/// Log-scales and opacities are untouched (unit scale).
GaussianSet transform_gaussians(const GaussianSet& set, const SE3& t,
                                ShMode mode = ShMode::Full);

/// Concatenation in (set order, splat order). All inputs must share one
/// sh_degree; mixing degrees throws SchemaError. Empty input list gives
/// an empty degree-0 set.
GaussianSet concat_gaussians(const std::vector<GaussianSet>& sets);

}  // namespace artic
