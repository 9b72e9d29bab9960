#pragma once

#include <cstdint>
#include <vector>

#include "artic/camera.hpp"
#include "artic/splat.hpp"

namespace artic {

/// 8-bit image, rows stored top to bottom, `channels` interleaved.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;  // 1 = gray, 4 = RGBA
    std::vector<std::uint8_t> pixels;

    static Image rgba(int w, int h) { return {w, h, 4, std::vector<std::uint8_t>(std::size_t(w) * h * 4, 0)}; }
    static Image gray(int w, int h) { return {w, h, 1, std::vector<std::uint8_t>(std::size_t(w) * h, 0)}; }

    std::uint8_t* at(int col, int row) {
        return pixels.data() + (std::size_t(row) * width + col) * channels;
    }
    const std::uint8_t* at(int col, int row) const {
        return pixels.data() + (std::size_t(row) * width + col) * channels;
    }
};

struct Preview {
    Image rgba;  // RGBA, alpha 255 where any splat landed
    Image mask;  // 8-bit, 255 where covered
};

/// Z-buffered point projection of the splat means: nearest depth wins,
/// square footprints sized by exp(max log-scale) over depth, color from
/// the SH DC term (linear, clamped to 8 bits). Splats behind the camera
/// are skipped. Pixel rows count up with world +Y for the canonical
/// camera, columns follow cx + fx*x/z. Deterministic.
Preview render_preview(const GaussianSet& set, const Camera& cam);

}  // namespace artic
