// SPDX-License-Identifier: Apache-2.0

#include "owg/voxel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace owg {

namespace {

using CellKey = std::array<std::int64_t, 3>;

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::int64_t v : k) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

struct CellAccum {
  int count = 0;
  Vec3 pos_sum;
  Vec3 color_sum;
  Vec3 normal_sum;
  std::map<int, int> instance_votes;
  std::map<int, int> semantic_votes;
};

int majority_label(const std::map<int, int>& votes) {
  int best_label = 0;
  int best_count = -1;
  for (const auto& [label, count] : votes) {
    if (count > best_count) {  // first max in ascending key order = smallest label on ties
      best_label = label;
      best_count = count;
    }
  }
  return best_label;
}

}  // namespace

PointCloud voxel_downsample(const PointCloud& cloud, double voxel) {
  if (voxel <= 0.0) throw std::invalid_argument("voxel size must be positive");
  PointCloud out;
  if (cloud.empty()) return out;

  std::unordered_map<CellKey, CellAccum, CellKeyHash> cells;
  cells.reserve(cloud.size());

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    const CellKey key{static_cast<std::int64_t>(std::floor(p.x / voxel)),
                      static_cast<std::int64_t>(std::floor(p.y / voxel)),
                      static_cast<std::int64_t>(std::floor(p.z / voxel))};
    CellAccum& cell = cells[key];
    cell.count += 1;
    cell.pos_sum += p;
    if (cloud.has_colors()) cell.color_sum += cloud.colors[i];
    if (cloud.has_normals()) cell.normal_sum += cloud.normals[i];
    if (cloud.has_gt_instance()) cell.instance_votes[cloud.gt_instance[i]] += 1;
    if (cloud.has_gt_semantic()) cell.semantic_votes[cloud.gt_semantic[i]] += 1;
  }

  std::vector<const std::pair<const CellKey, CellAccum>*> ordered;
  ordered.reserve(cells.size());
  for (const auto& entry : cells) ordered.push_back(&entry);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });

  out.positions.reserve(ordered.size());
  for (const auto* entry : ordered) {
    const CellAccum& cell = entry->second;
    const double inv = 1.0 / cell.count;
    out.positions.push_back(cell.pos_sum * inv);
    if (cloud.has_colors()) out.colors.push_back(cell.color_sum * inv);
    if (cloud.has_normals()) {
      Vec3 n = cell.normal_sum * inv;
      const double len = n.norm();
      // Cancelled-out normals have no meaningful mean; keep +z.
      out.normals.push_back(len > 1e-12 ? n / len : Vec3{0, 0, 1});
    }
    if (cloud.has_gt_instance()) out.gt_instance.push_back(majority_label(cell.instance_votes));
    if (cloud.has_gt_semantic()) out.gt_semantic.push_back(majority_label(cell.semantic_votes));
  }
  return out;
}

}  // namespace owg
