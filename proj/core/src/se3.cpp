#include "artic/se3.hpp"

#include <cmath>

#include "artic/errors.hpp"

namespace artic {

Rot3 Rot3::about_axis(const Vec3& axis, double angle) {
    const double n = axis.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) {
        throw DegenerateGeometryError(
            "rotation axis must be unit length (norm=" + std::to_string(n) + ")");
    }
    if (!std::isfinite(angle)) {
        throw DegenerateGeometryError("rotation angle must be finite");
    }
    const Vec3 a = axis / n;
    Mat3 k;
    k << 0.0, -a.z(), a.y(),
         a.z(), 0.0, -a.x(),
        -a.y(), a.x(), 0.0;
    const Mat3 r = Mat3::Identity() + std::sin(angle) * k +
                   (1.0 - std::cos(angle)) * (k * k);
    return Rot3(r);
}

Rot3 Rot3::rot_x(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 m;
    m << 1, 0, 0,
         0, c, -s,
         0, s, c;
    return Rot3(m);
}

Rot3 Rot3::rot_y(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 m;
    m << c, 0, s,
         0, 1, 0,
        -s, 0, c;
    return Rot3(m);
}

Rot3 Rot3::rot_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 m;
    m << c, -s, 0,
         s, c, 0,
         0, 0, 1;
    return Rot3(m);
}

Rot3 Rot3::from_matrix(const Mat3& m) {
    const Mat3 should_be_identity = m.transpose() * m;
    if ((should_be_identity - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
        throw DegenerateGeometryError("matrix is not orthonormal");
    }
    if (std::abs(m.determinant() - 1.0) > 1e-9) {
        throw DegenerateGeometryError("matrix determinant is not +1");
    }
    return Rot3(m);
}

UnitQuat UnitQuat::canonical(double w, double x, double y, double z) {
    UnitQuat q;
    if (w < 0.0) {
        q.w = -w;
        q.x = -x;
        q.y = -y;
        q.z = -z;
    } else {
        q.w = w;
        q.x = x;
        q.y = y;
        q.z = z;
    }
    return q;
}

UnitQuat UnitQuat::from_rot(const Rot3& r) {
    const Mat3& m = r.matrix();
    const double trace = m(0, 0) + m(1, 1) + m(2, 2);
    double w, x, y, z;
    if (trace > m(0, 0) && trace > m(1, 1) && trace > m(2, 2)) {
        const double s = std::sqrt(trace + 1.0) * 2.0;
        w = 0.25 * s;
        x = (m(2, 1) - m(1, 2)) / s;
        y = (m(0, 2) - m(2, 0)) / s;
        z = (m(1, 0) - m(0, 1)) / s;
    } else if (m(0, 0) > m(1, 1) && m(0, 0) > m(2, 2)) {
        const double s = std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2)) * 2.0;
        w = (m(2, 1) - m(1, 2)) / s;
        x = 0.25 * s;
        y = (m(0, 1) + m(1, 0)) / s;
        z = (m(0, 2) + m(2, 0)) / s;
    } else if (m(1, 1) > m(2, 2)) {
        const double s = std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2)) * 2.0;
        w = (m(0, 2) - m(2, 0)) / s;
        x = (m(0, 1) + m(1, 0)) / s;
        y = 0.25 * s;
        z = (m(1, 2) + m(2, 1)) / s;
    } else {
        const double s = std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1)) * 2.0;
        w = (m(1, 0) - m(0, 1)) / s;
        x = (m(0, 2) + m(2, 0)) / s;
        y = (m(1, 2) + m(2, 1)) / s;
        z = 0.25 * s;
    }
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    return canonical(w / n, x / n, y / n, z / n);
}

UnitQuat UnitQuat::from_components(double w, double x, double y, double z,
                                   double keep_tol) {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (!std::isfinite(n) || n < 1e-12) {
        throw DegenerateGeometryError("cannot normalize near-zero quaternion");
    }
    if (std::abs(n - 1.0) <= keep_tol) {
        return canonical(w, x, y, z);
    }
    return canonical(w / n, x / n, y / n, z / n);
}

Rot3 UnitQuat::to_rot() const {
    const double xx = x * x, yy = y * y, zz = z * z;
    const double xy = x * y, xz = x * z, yz = y * z;
    const double wx = w * x, wy = w * y, wz = w * z;
    Mat3 m;
    m << 1 - 2 * (yy + zz), 2 * (xy - wz), 2 * (xz + wy),
         2 * (xy + wz), 1 - 2 * (xx + zz), 2 * (yz - wx),
         2 * (xz - wy), 2 * (yz + wx), 1 - 2 * (xx + yy);
    return Rot3::from_matrix_unchecked(m);
}

UnitQuat UnitQuat::operator*(const UnitQuat& rhs) const {
    return canonical(
        w * rhs.w - x * rhs.x - y * rhs.y - z * rhs.z,
        w * rhs.x + x * rhs.w + y * rhs.z - z * rhs.y,
        w * rhs.y - x * rhs.z + y * rhs.w + z * rhs.x,
        w * rhs.z + x * rhs.y - y * rhs.x + z * rhs.w);
}

double UnitQuat::norm() const {
    return std::sqrt(w * w + x * x + y * y + z * z);
}

Mat4 SE3::matrix() const {
    Mat4 m = Mat4::Identity();
    m.block<3, 3>(0, 0) = r_.matrix();
    m.block<3, 1>(0, 3) = t_;
    return m;
}

}  // namespace artic
