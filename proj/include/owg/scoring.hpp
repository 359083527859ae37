// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "owg/cloud.hpp"
#include "owg/clustering.hpp"

namespace owg {

struct ScoreParams {
  double alpha = 0.3;    // weight of the feature score in the blend
  int n_theta = 60;      // minimum proposal point count
  double c_theta = 0.5;  // grasp-loop confidence threshold

  void validate() const;
};

/// Per-instance confidence. sc is -1 exactly when the proposal fails the
/// point-count gate; otherwise sc = alpha * s_f + (1 - alpha) * h_m.
struct ScoredInstance {
  int instance_id = -1;
  int n_points = 0;
  double s_f = 0.0;
  double h_m = 0.0;
  double sc = -1.0;
};

enum class FeatureScoreSource { Geometric, File };

/// Mean member z normalized into [0, 1] by the scene z-range, clamped.
double mean_height(const PointCloud& cloud, std::span<const int> instance,
                   std::pair<double, double> scene_z_range);

/// Compactness proxy standing in for a learned feature score: the fraction
/// of instance points whose neighbor count (within `radius`, among instance
/// members) is at least the lower-median instance density. Instances with
/// fewer than 4 points score 0.
double geometric_feature_score(const PointCloud& cloud, std::span<const int> instance,
                               double radius = 0.01);

/// SC = -1 when n_points < n_theta, else alpha*s_f + (1-alpha)*h_m.
double score_instance(int n_points, double s_f, double h_m, const ScoreParams& params);

/// Score every instance and sort by sc descending, ties by instance id
/// ascending. With the File source, file_scores must carry one s_f per
/// instance in canonical instance order.
std::vector<ScoredInstance> score_all(const PointCloud& cloud, const InstanceSet& instances,
                                      const ScoreParams& params, FeatureScoreSource source,
                                      std::pair<double, double> scene_z_range,
                                      std::span<const double> file_scores = {},
                                      double feature_radius = 0.01);

/// s_f file: internal-json {"s_f": [real, ...]} in canonical instance order.
std::vector<double> load_feature_scores(const std::filesystem::path& path);

}  // namespace owg
