#include "artic/sh_rotation.hpp"

#include <cmath>

#include "artic/errors.hpp"

namespace artic {

namespace {

double kd(int a, int b) { return a == b ? 1.0 : 0.0; }

// Centered accessor for a (2l+1)x(2l+1) band matrix, indices -l..l.
double at(const Eigen::MatrixXd& m, int a, int b) {
    const int l = (static_cast<int>(m.rows()) - 1) / 2;
    return m(a + l, b + l);
}

// Band-recursive construction of the real-SH rotation matrix for band l
// from the band-1 matrix and the band (l-1) matrix (Ivanic-Ruedenberg
// recurrences). Runs directly in the splat coefficient basis: the
// recursion commutes with the per-m sign convention baked into the
// band-1 seed.
struct BandRecursion {
    const Eigen::MatrixXd& m1;
    const Eigen::MatrixXd& prev;
    int l;

    double p(int i, int a, int b) const {
        if (b == l) {
            return at(m1, i, 1) * at(prev, a, l - 1) -
                   at(m1, i, -1) * at(prev, a, -l + 1);
        }
        if (b == -l) {
            return at(m1, i, 1) * at(prev, a, -l + 1) +
                   at(m1, i, -1) * at(prev, a, l - 1);
        }
        return at(m1, i, 0) * at(prev, a, b);
    }

    double u_term(int m, int n) const { return p(0, m, n); }

    double v_term(int m, int n) const {
        if (m == 0) {
            return p(1, 1, n) + p(-1, -1, n);
        }
        if (m > 0) {
            return p(1, m - 1, n) * std::sqrt(1.0 + kd(m, 1)) -
                   p(-1, -m + 1, n) * (1.0 - kd(m, 1));
        }
        return p(1, m + 1, n) * (1.0 - kd(m, -1)) +
               p(-1, -m - 1, n) * std::sqrt(1.0 + kd(m, -1));
    }

    double w_term(int m, int n) const {
        if (m == 0) {
            return 0.0;
        }
        if (m > 0) {
            return p(1, m + 1, n) + p(-1, -m - 1, n);
        }
        return p(1, m - 1, n) - p(-1, -m + 1, n);
    }

    double entry(int m, int n) const {
        const double d = kd(m, 0);
        const double denom = (std::abs(n) == l) ? (2.0 * l) * (2.0 * l - 1.0)
                                                : double(l + n) * double(l - n);
        const double u = std::sqrt(double(l + m) * double(l - m) / denom);
        const double v = 0.5 *
                         std::sqrt((1.0 + d) * (l + std::abs(m) - 1.0) *
                                   (l + std::abs(m)) / denom) *
                         (1.0 - 2.0 * d);
        const double w = -0.5 *
                         std::sqrt(double(l - std::abs(m) - 1) *
                                   double(l - std::abs(m)) / denom) *
                         (1.0 - d);

        double value = 0.0;
        if (u != 0.0) value += u * u_term(m, n);
        if (v != 0.0) value += v * v_term(m, n);
        if (w != 0.0) value += w * w_term(m, n);
        return value;
    }
};

Eigen::MatrixXd next_band(const Eigen::MatrixXd& m1, const Eigen::MatrixXd& prev,
                          int l) {
    Eigen::MatrixXd out(2 * l + 1, 2 * l + 1);
    const BandRecursion rec{m1, prev, l};
    for (int m = -l; m <= l; ++m) {
        for (int n = -l; n <= l; ++n) {
            out(m + l, n + l) = rec.entry(m, n);
        }
    }
    return out;
}

}  // namespace

ShRotation::ShRotation(const Rot3& r, int degree) : degree_(degree) {
    if (degree < 0 || degree > 3) {
        throw SchemaError("unsupported SH degree " + std::to_string(degree) +
                          " (expected 0..3)");
    }
    if (degree < 1) {
        return;
    }
    // Band-1 matrix in the splat basis: the (y, z, x) permutation of R with
    // the per-m signs of the splat SH convention folded in.
    const Mat3& m = r.matrix();
    Eigen::MatrixXd band1(3, 3);
    band1 << m(1, 1), -m(1, 2), m(1, 0),
            -m(2, 1), m(2, 2), -m(2, 0),
             m(0, 1), -m(0, 2), m(0, 0);
    bands_.push_back(band1);
    for (int l = 2; l <= degree; ++l) {
        bands_.push_back(next_band(bands_[0], bands_.back(), l));
    }
}

void ShRotation::apply_channel(std::span<float> channel) const {
    // channel[0] is the DC term and is rotation invariant.
    int offset = 1;
    for (int l = 1; l <= degree_; ++l) {
        const int n = 2 * l + 1;
        Eigen::VectorXd c(n);
        for (int i = 0; i < n; ++i) {
            c[i] = channel[offset + i];
        }
        const Eigen::VectorXd rotated = band(l) * c;
        for (int i = 0; i < n; ++i) {
            channel[offset + i] = static_cast<float>(rotated[i]);
        }
        offset += n;
    }
}

void ShRotation::apply_splat(std::span<float> block) const {
    const int per_channel = (degree_ + 1) * (degree_ + 1);
    for (int ch = 0; ch < 3; ++ch) {
        apply_channel(block.subspan(static_cast<std::size_t>(ch) * per_channel,
                                    per_channel));
    }
}

std::vector<float> rotate_sh(std::span<const float> coeffs, const Rot3& r,
                             int degree) {
    const std::size_t width = 3u * (degree + 1) * (degree + 1);
    if (coeffs.size() != width) {
        throw SchemaError("SH block has " + std::to_string(coeffs.size()) +
                          " coefficients, expected " + std::to_string(width) +
                          " for degree " + std::to_string(degree));
    }
    std::vector<float> out(coeffs.begin(), coeffs.end());
    ShRotation(r, degree).apply_splat(out);
    return out;
}

}  // namespace artic
