#include "artic/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace artic {

namespace {

constexpr double kShC0 = 0.28209479177387814;
constexpr int kMaxFootprintHalf = 64;

std::uint8_t to_byte(double linear) {
    return static_cast<std::uint8_t>(
        std::lround(std::clamp(linear, 0.0, 1.0) * 255.0));
}

}  // namespace

Preview render_preview(const GaussianSet& set, const Camera& cam) {
    Preview out;
    out.rgba = Image::rgba(cam.width, cam.height);
    out.mask = Image::gray(cam.width, cam.height);
    std::vector<double> depth(std::size_t(cam.width) * cam.height,
                              std::numeric_limits<double>::infinity());

    const Mat3 r = cam.rotation.matrix();
    const int per_channel = set.coeffs_per_channel();
    for (std::size_t i = 0; i < set.size(); ++i) {
        const Vec3 world(set.means[i][0], set.means[i][1], set.means[i][2]);
        const Vec3 p = r * (world - cam.center);
        if (p.z() <= 1e-9) {
            continue;  // behind the camera
        }
        const double u = cam.cx() + cam.fx * p.x() / p.z();
        const double v = cam.cy() - cam.fy * p.y() / p.z();
        const long col = std::lround(u);
        const long row = std::lround(v);

        const float* scales = set.log_scales[i].data();
        const double sigma = std::exp(double(*std::max_element(scales, scales + 3)));
        const long half = std::clamp<long>(
            std::lround(cam.fx * sigma / p.z()), 0, kMaxFootprintHalf);

        const float* sh = set.sh_coeffs.data() + i * set.sh_width();
        const std::uint8_t rgb[3] = {
            to_byte(0.5 + kShC0 * sh[0 * per_channel]),
            to_byte(0.5 + kShC0 * sh[1 * per_channel]),
            to_byte(0.5 + kShC0 * sh[2 * per_channel]),
        };

        for (long y = row - half; y <= row + half; ++y) {
            if (y < 0 || y >= cam.height) {
                continue;
            }
            for (long x = col - half; x <= col + half; ++x) {
                if (x < 0 || x >= cam.width) {
                    continue;
                }
                double& z = depth[std::size_t(y) * cam.width + x];
                if (p.z() >= z) {
                    continue;
                }
                z = p.z();
                std::uint8_t* px = out.rgba.at(int(x), int(y));
                px[0] = rgb[0];
                px[1] = rgb[1];
                px[2] = rgb[2];
                px[3] = 255;
                *out.mask.at(int(x), int(y)) = 255;
            }
        }
    }
    return out;
}

}  // namespace artic
