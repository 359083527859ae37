// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "owg/cloud.hpp"
#include "owg/segmentation.hpp"

namespace owg {

/// Neighbor counts among foreground points within radius r_d. point_ids and
/// density are parallel arrays over the foreground set, ascending by id.
struct DensityField {
  double r_d = 0.0;
  std::vector<int> point_ids;
  std::vector<int> density;
};

/// Disjoint instances over a cloud's foreground points. assignment has one
/// entry per cloud point: the instance id, or -1 for background/unassigned.
/// Instance member lists are sorted ascending; instance ids are assigned by
/// descending member count at grouping time, ties by smallest member id.
struct InstanceSet {
  std::vector<int> assignment;
  std::vector<std::vector<int>> instances;

  std::size_t instance_count() const { return instances.size(); }
};

/// Exact foreground-restricted neighbor counts. threads > 1 splits the work
/// per point; results are identical for any thread count.
/// Throws std::invalid_argument when the mask has no foreground point.
DensityField compute_density(const PointCloud& cloud, const ForegroundMask& mask, double r_d,
                             int threads = 1);

/// H_set = foreground points with density strictly greater than d_theta,
/// L_set = the rest. Both ascending by point id.
std::pair<std::vector<int>, std::vector<int>> split_by_density(const DensityField& field,
                                                               int d_theta);

/// Connected components of the radius-r_group graph over H_set, one instance
/// per component. L_set points stay unassigned.
InstanceSet group_high_density(const PointCloud& cloud, const std::vector<int>& h_set,
                               double r_group);

/// One refinement pass: every L_set point joins the majority instance among
/// its already-assigned neighbors within r_vote (votes are counted against
/// the incoming assignment only). Ties go to the instance with the nearest
/// member; points with no assigned neighbor stay unassigned.
InstanceSet vote_low_density(const PointCloud& cloud, const InstanceSet& instances,
                             const std::vector<int>& l_set, double r_vote);

/// Plain distance clustering over all foreground points (no density split);
/// components smaller than min_pts are discarded to unassigned.
InstanceSet cluster_distance_baseline(const PointCloud& cloud, const ForegroundMask& mask,
                                      double r_group, int min_pts);

/// internal-json {"assignments": [int, ...]} with one entry per cloud point.
void save_instances(const std::filesystem::path& path, const InstanceSet& instances);
InstanceSet load_instances(const std::filesystem::path& path, std::size_t n_expected);

}  // namespace owg
