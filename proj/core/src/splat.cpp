#include "artic/splat.hpp"

#include <cmath>
#include <string>

#include "artic/errors.hpp"
#include "artic/sh_rotation.hpp"

namespace artic {

void GaussianSet::canonicalize_rotations() {
    for (std::size_t i = 0; i < rotations.size(); ++i) {
        auto& q = rotations[i];
        UnitQuat u;
        try {
            u = UnitQuat::from_components(q[0], q[1], q[2], q[3]);
        } catch (const DegenerateGeometryError&) {
            throw SchemaError("rotation quaternion " + std::to_string(i) +
                              " has (near-)zero norm");
        }
        q = {static_cast<float>(u.w), static_cast<float>(u.x),
             static_cast<float>(u.y), static_cast<float>(u.z)};
    }
}

void GaussianSet::validate() const {
    if (sh_degree < 0 || sh_degree > 3) {
        throw SchemaError("sh_degree " + std::to_string(sh_degree) +
                          " out of range 0..3");
    }
    const std::size_t n = means.size();
    if (rotations.size() != n || log_scales.size() != n || opacities.size() != n) {
        throw SchemaError("gaussian attribute arrays disagree on length");
    }
    if (sh_coeffs.size() != n * static_cast<std::size_t>(sh_width())) {
        throw SchemaError("sh_coeffs has " + std::to_string(sh_coeffs.size()) +
                          " values, expected " + std::to_string(n * sh_width()));
    }
    for (const auto& q : rotations) {
        const double norm = std::sqrt(double(q[0]) * q[0] + double(q[1]) * q[1] +
                                      double(q[2]) * q[2] + double(q[3]) * q[3]);
        if (std::abs(norm - 1.0) > 1e-6) {
            throw SchemaError("rotation quaternion is not unit (norm=" +
                              std::to_string(norm) + ")");
        }
    }
}

GaussianSet transform_gaussians(const GaussianSet& set, const SE3& t, ShMode mode) {
    GaussianSet out = set;

    const Mat3& r = t.rotation().matrix();
    const Vec3& tr = t.translation();
    for (auto& mean : out.means) {
        const Vec3 p = r * Vec3(mean[0], mean[1], mean[2]) + tr;
        mean = {static_cast<float>(p.x()), static_cast<float>(p.y()),
                static_cast<float>(p.z())};
    }

    const UnitQuat qt = UnitQuat::from_rot(t.rotation());
    for (auto& q : out.rotations) {
        const UnitQuat composed = qt * UnitQuat{q[0], q[1], q[2], q[3]};
        q = {static_cast<float>(composed.w), static_cast<float>(composed.x),
             static_cast<float>(composed.y), static_cast<float>(composed.z)};
    }

    // Pure translations leave orientation-dependent attributes bit-identical.
    if (!t.rotation().is_identity() && mode == ShMode::Full && set.sh_degree > 0) {
        const ShRotation rot(t.rotation(), set.sh_degree);
        const std::size_t width = set.sh_width();
        for (std::size_t i = 0; i < out.size(); ++i) {
            rot.apply_splat(std::span<float>(out.sh_coeffs).subspan(i * width, width));
        }
    }
    return out;
}

GaussianSet concat_gaussians(const std::vector<GaussianSet>& sets) {
    GaussianSet out;
    if (sets.empty()) {
        return out;
    }
    out.sh_degree = sets.front().sh_degree;
    std::size_t total = 0;
    for (const auto& s : sets) {
        if (s.sh_degree != out.sh_degree) {
            throw SchemaError("cannot concatenate gaussian sets of sh_degree " +
                              std::to_string(out.sh_degree) + " and " +
                              std::to_string(s.sh_degree));
        }
        total += s.size();
    }
    out.means.reserve(total);
    out.rotations.reserve(total);
    out.log_scales.reserve(total);
    out.opacities.reserve(total);
    out.sh_coeffs.reserve(total * out.sh_width());
    for (const auto& s : sets) {
        out.means.insert(out.means.end(), s.means.begin(), s.means.end());
        out.rotations.insert(out.rotations.end(), s.rotations.begin(),
                             s.rotations.end());
        out.log_scales.insert(out.log_scales.end(), s.log_scales.begin(),
                              s.log_scales.end());
        out.opacities.insert(out.opacities.end(), s.opacities.begin(),
                             s.opacities.end());
        out.sh_coeffs.insert(out.sh_coeffs.end(), s.sh_coeffs.begin(),
                             s.sh_coeffs.end());
    }
    return out;
}

}  // namespace artic
