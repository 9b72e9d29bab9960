#pragma once

#include <Eigen/Dense>

namespace artic {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// A proper 3x3 rotation matrix (orthonormal, det +1).
///
/// All angles are radians. The world frame is right-handed with Y up,
/// X-Z as the ground plane; rotations about a coordinate axis follow
/// the right-hand rule.
class Rot3 {
public:
    Rot3() : m_(Mat3::Identity()) {}

    static Rot3 identity() { return Rot3(); }

    /// Rodrigues rotation about a unit axis. The axis norm must be within
    /// 1e-6 of 1; anything else (in particular the zero vector) throws
    /// DegenerateGeometryError.
    static Rot3 about_axis(const Vec3& axis, double angle);

    static Rot3 rot_x(double angle);
    static Rot3 rot_y(double angle);
    static Rot3 rot_z(double angle);

    /// Wraps a matrix, checking orthonormality and det +1 within 1e-9.
    static Rot3 from_matrix(const Mat3& m);

    /// Wraps a matrix that is already known to be a rotation
    /// (products of rotations, transposed rotations).
    static Rot3 from_matrix_unchecked(const Mat3& m) { return Rot3(m); }

    const Mat3& matrix() const { return m_; }

    Vec3 operator*(const Vec3& p) const { return m_ * p; }
    Rot3 operator*(const Rot3& rhs) const { return Rot3(Mat3(m_ * rhs.m_)); }

    Rot3 inverse() const { return Rot3(Mat3(m_.transpose())); }

    bool is_identity() const { return m_ == Mat3::Identity(); }

private:
    explicit Rot3(const Mat3& m) : m_(m) {}

    Mat3 m_;
};

/// Unit quaternion (w, x, y, z), canonicalized to w >= 0 so that each
/// rotation has a unique representation and file bytes are reproducible.
struct UnitQuat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    static UnitQuat identity() { return {}; }

    /// Conversion via the numerically stable branch on the largest
    /// diagonal term (Shepperd's method).
    static UnitQuat from_rot(const Rot3& r);

    /// Normalizes arbitrary components; throws DegenerateGeometryError on
    /// (near-)zero norm. Components already unit within `keep_tol` are kept
    /// bit-identical (only the sign canonicalization may touch them).
    static UnitQuat from_components(double w, double x, double y, double z,
                                    double keep_tol = 1e-6);

    Rot3 to_rot() const;

    UnitQuat conjugate() const { return canonical(w, -x, -y, -z); }

    /// Rotation composition: (a * b) applies b first, then a.
    UnitQuat operator*(const UnitQuat& rhs) const;

    double norm() const;

private:
    static UnitQuat canonical(double w, double x, double y, double z);
};

/// Rigid transform: rotation followed by translation, the upper 3x4 block
/// of a 4x4 homogeneous matrix whose last row is (0,0,0,1).
class SE3 {
public:
    SE3() = default;
    SE3(const Rot3& rotation, const Vec3& translation)
        : r_(rotation), t_(translation) {}

    static SE3 identity() { return SE3(); }
    static SE3 from_rotation(const Rot3& r) { return SE3(r, Vec3::Zero()); }
    static SE3 from_translation(const Vec3& t) { return SE3(Rot3::identity(), t); }

    const Rot3& rotation() const { return r_; }
    const Vec3& translation() const { return t_; }

    /// Composition in matrix-product order: (a * b) applies b first.
    SE3 operator*(const SE3& rhs) const {
        return SE3(r_ * rhs.r_, Vec3(r_ * rhs.t_ + t_));
    }

    /// R*p + t.
    Vec3 operator*(const Vec3& p) const { return r_ * p + t_; }

    SE3 inverse() const {
        Rot3 rt = r_.inverse();
        return SE3(rt, Vec3(-(rt * t_)));
    }

    Mat4 matrix() const;

private:
    Rot3 r_;
    Vec3 t_{Vec3::Zero()};
};

}  // namespace artic
