// SPDX-License-Identifier: Apache-2.0

#include "owg/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "owg/errors.hpp"

namespace owg {

namespace {

void check_length(std::size_t expect, std::size_t got, const char* attr) {
  if (got != 0 && got != expect) {
    throw InputError(std::string(attr) + " has " + std::to_string(got) + " entries, expected " +
                     std::to_string(expect));
  }
}

}  // namespace

void PointCloud::validate() const {
  const std::size_t n = positions.size();
  check_length(n, colors.size(), "colors");
  check_length(n, normals.size(), "normals");
  check_length(n, gt_instance.size(), "gt_instance");
  check_length(n, gt_semantic.size(), "gt_semantic");

  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = positions[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw InputError("non-finite coordinate at point " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (std::abs(normals[i].norm() - 1.0) > 1e-6) {
      throw InputError("normal at point " + std::to_string(i) + " is not unit length");
    }
  }
  for (std::size_t i = 0; i < gt_instance.size(); ++i) {
    if (gt_instance[i] < -1) {
      throw InputError("gt_instance label < -1 at point " + std::to_string(i));
    }
  }
}

PointCloud PointCloud::select(std::span<const int> ids) const {
  PointCloud out;
  out.positions.reserve(ids.size());
  for (int id : ids) out.positions.push_back(positions[id]);
  if (has_colors()) {
    out.colors.reserve(ids.size());
    for (int id : ids) out.colors.push_back(colors[id]);
  }
  if (has_normals()) {
    out.normals.reserve(ids.size());
    for (int id : ids) out.normals.push_back(normals[id]);
  }
  if (has_gt_instance()) {
    out.gt_instance.reserve(ids.size());
    for (int id : ids) out.gt_instance.push_back(gt_instance[id]);
  }
  if (has_gt_semantic()) {
    out.gt_semantic.reserve(ids.size());
    for (int id : ids) out.gt_semantic.push_back(gt_semantic[id]);
  }
  return out;
}

PointCloud PointCloud::erase(std::span<const int> ids) const {
  std::vector<char> drop(size(), 0);
  for (int id : ids) drop[id] = 1;
  std::vector<int> keep;
  keep.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (!drop[i]) keep.push_back(static_cast<int>(i));
  }
  return select(keep);
}

std::vector<int> PointCloud::gt_object_labels() const {
  std::set<int> labels;
  for (int label : gt_instance) {
    if (label >= 0) labels.insert(label);
  }
  return {labels.begin(), labels.end()};
}

std::pair<double, double> PointCloud::z_range() const {
  if (empty()) throw std::invalid_argument("z_range on empty cloud");
  double lo = positions[0].z, hi = positions[0].z;
  for (const Vec3& p : positions) {
    lo = std::min(lo, p.z);
    hi = std::max(hi, p.z);
  }
  return {lo, hi};
}

}  // namespace owg
