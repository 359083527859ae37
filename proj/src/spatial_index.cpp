// SPDX-License-Identifier: Apache-2.0

#include "owg/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace owg {

SpatialIndex::SpatialIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    root_ = build(0, static_cast<int>(points_.size()));
  }
}

int SpatialIndex::build(int begin, int end) {
  Node node;
  node.bbox_lo = points_[order_[begin]];
  node.bbox_hi = node.bbox_lo;
  for (int k = begin + 1; k < end; ++k) {
    const Vec3& p = points_[order_[k]];
    node.bbox_lo.x = std::min(node.bbox_lo.x, p.x);
    node.bbox_lo.y = std::min(node.bbox_lo.y, p.y);
    node.bbox_lo.z = std::min(node.bbox_lo.z, p.z);
    node.bbox_hi.x = std::max(node.bbox_hi.x, p.x);
    node.bbox_hi.y = std::max(node.bbox_hi.y, p.y);
    node.bbox_hi.z = std::max(node.bbox_hi.z, p.z);
  }

  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);

  if (end - begin <= kLeafSize) {
    nodes_[index].begin = begin;
    nodes_[index].end = end;
    return index;
  }

  // Split the widest axis at the median.
  const Vec3 extent = node.bbox_hi - node.bbox_lo;
  int axis = 0;
  if (extent.y > extent[axis]) axis = 1;
  if (extent.z > extent[axis]) axis = 2;

  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });

  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

namespace {

double bbox_min_sq_dist(const Vec3& q, const Vec3& lo, const Vec3& hi) {
  double acc = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double v = q[a];
    double d = 0.0;
    if (v < lo[a]) {
      d = lo[a] - v;
    } else if (v > hi[a]) {
      d = v - hi[a];
    }
    acc += d * d;
  }
  return acc;
}

}  // namespace

void SpatialIndex::collect(int node_id, const Vec3& q, double r_sq, std::vector<int>& out) const {
  const Node& node = nodes_[node_id];
  if (bbox_min_sq_dist(q, node.bbox_lo, node.bbox_hi) > r_sq) return;
  if (node.left < 0) {
    for (int k = node.begin; k < node.end; ++k) {
      const int id = order_[k];
      if (squared_distance(q, points_[id]) <= r_sq) out.push_back(id);
    }
    return;
  }
  collect(node.left, q, r_sq, out);
  collect(node.right, q, r_sq, out);
}

std::vector<int> SpatialIndex::radius_search(const Vec3& q, double r) const {
  if (r <= 0.0) throw std::invalid_argument("radius must be positive");
  std::vector<int> out;
  if (root_ >= 0) collect(root_, q, r * r, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> SpatialIndex::radius_neighbors(int i, double r) const {
  if (i < 0 || static_cast<std::size_t>(i) >= points_.size()) {
    throw std::invalid_argument("point id out of range");
  }
  std::vector<int> out = radius_search(points_[i], r);
  out.erase(std::remove(out.begin(), out.end(), i), out.end());
  return out;
}

}  // namespace owg
