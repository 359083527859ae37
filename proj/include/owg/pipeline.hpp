// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "owg/cloud.hpp"
#include "owg/clustering.hpp"
#include "owg/scoring.hpp"
#include "owg/segmentation.hpp"

namespace owg {

class CalibrationExtrinsics;

enum class ClustererKind { Binary, Distance };
enum class ScoreSource { Heuristic, File };
enum class HeightFrame { Camera, Robot };

/// Full pipeline parameter set. Defaults: voxel 0.005 m, clustering radii
/// 0.01 m, d_theta 2, n_theta 60, alpha 0.3, c_theta 0.5.
struct PipelineConfig {
  double voxel = 0.005;  // <= 0 disables downsampling (pre-voxelized input)
  double r_d = 0.01;
  double r_group = 0.01;
  double r_vote = 0.01;
  int d_theta = 2;
  int n_theta = 60;
  double alpha = 0.3;
  double c_theta = 0.5;

  double table_margin = 0.02;
  int min_pts = 10;  // distance-baseline component floor
  int vote_passes = 1;
  ClustererKind clusterer = ClustererKind::Binary;
  ScoreSource score_source = ScoreSource::Heuristic;
  std::string scores_path;  // semantic scores (File source)
  FeatureScoreSource sf_source = FeatureScoreSource::Geometric;
  std::string sf_path;  // per-instance s_f file (File source)
  HeightFrame height_frame = HeightFrame::Camera;
  std::string calibration_path;
  std::string profile = "ainstec";
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;

  /// Merge keys present in an internal-json config file over the defaults.
  static PipelineConfig load(const std::filesystem::path& path);
};

/// One detection pass over a cloud: downsample, segment, cluster, score.
struct DetectionResult {
  PointCloud working;  // downsampled cloud all indices refer to
  ForegroundMask mask;
  InstanceSet instances;
  std::vector<ScoredInstance> scored;
  std::pair<double, double> scene_z_range{0.0, 1.0};
};

/// Runs segment -> cluster -> score with the configured providers. An empty
/// foreground yields a result with zero instances (not an error).
///
/// H_m normally uses camera-frame z; with height_frame = robot the scoring
/// heights are taken after the hand-eye transform, using `calib` when given
/// or else the configured calibration_path. Clustering always runs in the
/// original (camera) coordinate system.
DetectionResult run_detection(const PointCloud& cloud, const PipelineConfig& config,
                              const CalibrationExtrinsics* calib = nullptr);

}  // namespace owg
