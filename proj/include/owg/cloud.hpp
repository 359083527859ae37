// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "owg/geometry.hpp"

namespace owg {

/// Point cloud with optional per-point attributes. An empty attribute vector
/// means "absent"; a present attribute must have one entry per position.
///
/// Ground-truth labels: gt_instance uses -1 for background and nonnegative
/// ids for objects (ids need not be contiguous after filtering); gt_semantic
/// follows the convention 1 = background, 2 = object.
struct PointCloud {
  std::vector<Vec3> positions;
  std::vector<Vec3> colors;   // RGB in [0, 1]
  std::vector<Vec3> normals;  // unit length
  std::vector<int> gt_instance;
  std::vector<int> gt_semantic;

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }
  bool has_colors() const { return !colors.empty(); }
  bool has_normals() const { return !normals.empty(); }
  bool has_gt_instance() const { return !gt_instance.empty(); }
  bool has_gt_semantic() const { return !gt_semantic.empty(); }

  /// Throws InputError if any type invariant is violated (attribute length
  /// mismatch, non-finite coordinate, non-unit normal, label < -1).
  void validate() const;

  /// Subset copy keeping the given point ids (in the given order).
  PointCloud select(std::span<const int> ids) const;

  /// Copy with the given point ids removed. Ids must be valid; duplicates ok.
  PointCloud erase(std::span<const int> ids) const;

  /// Distinct nonnegative gt_instance labels, ascending. Empty when labels
  /// are absent.
  std::vector<int> gt_object_labels() const;

  /// Min/max z over all points. Requires a nonempty cloud.
  std::pair<double, double> z_range() const;
};

}  // namespace owg
