// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "owg/grasp.hpp"
#include "owg/pipeline.hpp"

namespace owg {

/// One grasp iteration: the chosen instance, its score breakdown, and the
/// foreground population left after removal.
struct GraspRecord {
  int iter = 0;
  GraspPlan plan;
  int n_points = 0;
  double s_f = 0.0;
  double h_m = 0.0;
  double sc = -1.0;
  std::size_t remaining_foreground = 0;
};

/// Detections of one loop iteration, kept for recognition metrics: member
/// ids refer to the episode's base cloud.
struct IterationDetections {
  std::vector<std::vector<int>> proposals;
  std::vector<double> scores;  // sc per proposal, parallel to proposals
};

struct EpisodeLog {
  PointCloud base_cloud;  // downsampled episode input; all ids refer to it
  std::vector<GraspRecord> grasps;
  std::vector<IterationDetections> detections;
  std::string termination;  // "below-threshold" or "error: ..."
};

/// Alg: repeat { segment -> cluster -> score; stop when max SC < c_theta;
/// plan a grasp of the argmax instance and delete its points }. Grasping is
/// simulated as point removal; every iteration removes at least n_theta
/// points, so the loop terminates.
EpisodeLog run_grasp_loop(const PointCloud& cloud, const PipelineConfig& config,
                          const CalibrationExtrinsics& calib);

/// JSON-lines episode log, one record per grasp iteration.
void save_episode_log(const std::filesystem::path& path, const EpisodeLog& log);

}  // namespace owg
