// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "owg/geometry.hpp"

namespace owg {

/// kd-tree over a fixed set of points supporting exact radius queries.
/// The tree is an accelerator only: every candidate is verified with the
/// exact squared-distance test, so results are identical to a linear scan.
/// Immutable after construction and safe to share across threads.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }

  /// All j != i with ||p_i - p_j|| <= r, sorted ascending by id.
  /// Throws std::invalid_argument when i is out of range or r <= 0.
  std::vector<int> radius_neighbors(int i, double r) const;

  /// All ids with ||q - p|| <= r (the query point itself included when it is
  /// part of the set), sorted ascending by id.
  std::vector<int> radius_search(const Vec3& q, double r) const;

  const Vec3& point(int i) const { return points_[i]; }

 private:
  struct Node {
    Vec3 bbox_lo;
    Vec3 bbox_hi;
    int begin = 0;   // leaf: range into order_
    int end = 0;
    int left = -1;   // -1 marks a leaf
    int right = -1;
  };

  static constexpr int kLeafSize = 16;

  int build(int begin, int end);
  void collect(int node, const Vec3& q, double r_sq, std::vector<int>& out) const;

  std::vector<Vec3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace owg
