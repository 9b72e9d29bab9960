#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "artic/se3.hpp"

namespace artic {

/// Rotation operator for real spherical-harmonic coefficient blocks in the
/// splat convention: per band l the (2l+1) coefficients are ordered
/// m = -l..l, and the degree-1 band maps to direction components as
/// (-y, z, -x) (the de-facto splat-PLY basis).
///
/// Band matrices are built once per rotation with the band-recursive
/// construction seeded by the permuted degree-1 matrix; bands 0..3 are
/// exact. Coefficients of a function f transform so that the rotated
/// coefficients represent f composed with the inverse rotation.
class ShRotation {
public:
    /// Builds matrices for bands 1..degree (degree in 0..3, else throws).
    ShRotation(const Rot3& r, int degree);

    int degree() const { return degree_; }

    /// (2l+1)x(2l+1) matrix for band l in 1..degree.
    const Eigen::MatrixXd& band(int l) const { return bands_.at(l - 1); }

    /// Rotates one channel block of (degree+1)^2 coefficients in place
    /// (DC term first).
    void apply_channel(std::span<float> channel) const;

    /// Rotates a full 3-channel splat SH block (channel-major) in place.
    void apply_splat(std::span<float> block) const;

private:
    int degree_;
    std::vector<Eigen::MatrixXd> bands_;
};

/// One-shot convenience over ShRotation for a single 3-channel block.
std::vector<float> rotate_sh(std::span<const float> coeffs, const Rot3& r,
                             int degree);

}  // namespace artic
