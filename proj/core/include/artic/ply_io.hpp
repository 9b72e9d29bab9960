#pragma once

#include <filesystem>

#include "artic/splat.hpp"

namespace artic {

/// Reads a splat PLY (binary little-endian, the de-facto 3DGS vertex
/// layout). The SH degree is inferred from the f_rest property count.
/// Rotation quaternions are normalized and sign-canonicalized on load;
/// everything else keeps its stored bits.
GaussianSet load_splat(const std::filesystem::path& path);

/// Writes the de-facto splat PLY layout: float32 properties
/// x y z nx ny nz f_dc_0..2 f_rest_* opacity scale_0..2 rot_0..3,
/// normals written as zeros. Saving then loading reproduces every float
/// payload bit-exactly. The write is atomic (temp file + rename).
void save_splat(const GaussianSet& set, const std::filesystem::path& path);

}  // namespace artic
