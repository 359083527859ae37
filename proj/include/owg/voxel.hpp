// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "owg/cloud.hpp"

namespace owg {

/// Voxel-grid downsample: one output point per nonempty cell, positioned at
/// the cell centroid. Cell assignment is floor(coordinate / voxel) per axis,
/// so a point exactly on a boundary lands in the higher cell. Colors and
/// normals are averaged (normals renormalized); ground-truth labels take the
/// per-cell majority, ties to the smaller label. Output cells are ordered by
/// ascending (ix, iy, iz).
PointCloud voxel_downsample(const PointCloud& cloud, double voxel);

}  // namespace owg
