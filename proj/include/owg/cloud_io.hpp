// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "owg/cloud.hpp"

namespace owg {

enum class CloudFormat { PlyAscii, PlyBinaryLE, InternalJson };

/// Guess the on-disk format: .json files are internal-json, .ply files are
/// sniffed for their declared "format" header line. Throws InputError when
/// the file cannot be opened or is not a recognizable cloud file.
CloudFormat detect_cloud_format(const std::filesystem::path& path);

/// Load a cloud in the declared format and validate all type invariants.
/// Parse failures throw InputError naming the offending line (ASCII/JSON)
/// or byte offset (binary).
///
/// PLY vertex properties understood: float x/y/z, uchar red/green/blue,
/// float nx/ny/nz, int gt_instance/gt_semantic. Unknown scalar properties
/// are skipped; list properties and non-vertex elements are rejected.
PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format);

/// Write a cloud. Positions/normals are stored as float32 in PLY, colors as
/// uchar; binary-little-endian round-trips those representations bit-exactly.
/// internal-json keeps full double precision and writes null for absent
/// attributes.
void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format);

}  // namespace owg
