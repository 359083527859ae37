// SPDX-License-Identifier: Apache-2.0

#include "owg/pipeline.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "owg/errors.hpp"
#include "owg/grasp.hpp"
#include "owg/voxel.hpp"

namespace owg {

void PipelineConfig::validate() const {
  if (r_d <= 0 || r_group <= 0 || r_vote <= 0) {
    throw std::invalid_argument("clustering radii must be positive");
  }
  if (d_theta < 0) throw std::invalid_argument("d_theta must be >= 0");
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  if (n_theta < 1) throw std::invalid_argument("n_theta must be >= 1");
  if (table_margin <= 0.0) throw std::invalid_argument("table_margin must be positive");
  if (min_pts < 1) throw std::invalid_argument("min_pts must be >= 1");
  if (vote_passes < 0) throw std::invalid_argument("vote_passes must be >= 0");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }

  PipelineConfig cfg;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) j.at(key).get_to(field);
  };
  get("voxel", cfg.voxel);
  get("r_d", cfg.r_d);
  get("r_group", cfg.r_group);
  get("r_vote", cfg.r_vote);
  get("d_theta", cfg.d_theta);
  get("n_theta", cfg.n_theta);
  get("alpha", cfg.alpha);
  get("c_theta", cfg.c_theta);
  get("table_margin", cfg.table_margin);
  get("min_pts", cfg.min_pts);
  get("vote_passes", cfg.vote_passes);
  get("scores_path", cfg.scores_path);
  get("sf_path", cfg.sf_path);
  get("calibration_path", cfg.calibration_path);
  get("profile", cfg.profile);
  get("seed", cfg.seed);
  get("threads", cfg.threads);
  if (j.contains("clusterer")) {
    const std::string v = j.at("clusterer").get<std::string>();
    if (v == "binary") cfg.clusterer = ClustererKind::Binary;
    else if (v == "distance") cfg.clusterer = ClustererKind::Distance;
    else throw InputError("unknown clusterer '" + v + "'");
  }
  if (j.contains("score_source")) {
    const std::string v = j.at("score_source").get<std::string>();
    if (v == "heuristic") cfg.score_source = ScoreSource::Heuristic;
    else if (v == "file") cfg.score_source = ScoreSource::File;
    else throw InputError("unknown score_source '" + v + "'");
  }
  if (j.contains("sf_source")) {
    const std::string v = j.at("sf_source").get<std::string>();
    if (v == "geometric") cfg.sf_source = FeatureScoreSource::Geometric;
    else if (v == "file") cfg.sf_source = FeatureScoreSource::File;
    else throw InputError("unknown sf_source '" + v + "'");
  }
  if (j.contains("height_frame")) {
    const std::string v = j.at("height_frame").get<std::string>();
    if (v == "camera") cfg.height_frame = HeightFrame::Camera;
    else if (v == "robot") cfg.height_frame = HeightFrame::Robot;
    else throw InputError("unknown height_frame '" + v + "'");
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return cfg;
}

DetectionResult run_detection(const PointCloud& cloud, const PipelineConfig& config,
                              const CalibrationExtrinsics* calib) {
  config.validate();

  DetectionResult result;
  result.working = config.voxel > 0.0 ? voxel_downsample(cloud, config.voxel) : cloud;
  const PointCloud& working = result.working;

  if (working.empty()) {
    result.mask.labels.clear();
    result.instances.assignment.clear();
    return result;
  }
  result.scene_z_range = working.z_range();
  if (result.scene_z_range.second <= result.scene_z_range.first) {
    result.scene_z_range.second = result.scene_z_range.first + 1.0;
  }

  SemanticScores scores =
      config.score_source == ScoreSource::File
          ? load_scores(config.scores_path, working.size())
          : heuristic_scores(working, config.table_margin);
  result.mask = predict_foreground(binarize_scores(scores));

  if (result.mask.foreground_count() == 0) {
    result.instances.assignment.assign(working.size(), -1);
    return result;
  }

  if (config.clusterer == ClustererKind::Distance) {
    result.instances =
        cluster_distance_baseline(working, result.mask, config.r_group, config.min_pts);
  } else {
    const DensityField density = compute_density(working, result.mask, config.r_d, config.threads);
    auto [h_set, l_set] = split_by_density(density, config.d_theta);
    result.instances = group_high_density(working, h_set, config.r_group);
    for (int pass = 0; pass < config.vote_passes; ++pass) {
      std::vector<int> unassigned;
      for (int pid : l_set) {
        if (result.instances.assignment[pid] < 0) unassigned.push_back(pid);
      }
      if (unassigned.empty()) break;
      result.instances = vote_low_density(working, result.instances, unassigned, config.r_vote);
    }
  }

  ScoreParams params{config.alpha, config.n_theta, config.c_theta};
  std::vector<double> file_sf;
  if (config.sf_source == FeatureScoreSource::File) file_sf = load_feature_scores(config.sf_path);

  if (config.height_frame == HeightFrame::Robot) {
    std::optional<CalibrationExtrinsics> loaded;
    if (calib == nullptr) {
      if (config.calibration_path.empty()) {
        throw std::invalid_argument("height_frame=robot requires a calibration");
      }
      loaded = CalibrationExtrinsics::load(config.calibration_path);
      calib = &*loaded;
    }
    PointCloud robot_frame = working;
    for (Vec3& p : robot_frame.positions) p = to_robot_frame(p, *calib);
    result.scene_z_range = robot_frame.z_range();
    if (result.scene_z_range.second <= result.scene_z_range.first) {
      result.scene_z_range.second = result.scene_z_range.first + 1.0;
    }
    result.scored = score_all(robot_frame, result.instances, params, config.sf_source,
                              result.scene_z_range, file_sf, config.r_d);
  } else {
    result.scored = score_all(working, result.instances, params, config.sf_source,
                              result.scene_z_range, file_sf, config.r_d);
  }
  return result;
}

}  // namespace owg
