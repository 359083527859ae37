// SPDX-License-Identifier: Apache-2.0

#include "owg/grasp_loop.hpp"

#include <fstream>
#include <numeric>

#include <json.hpp>

#include "owg/errors.hpp"
#include "owg/voxel.hpp"

namespace owg {

EpisodeLog run_grasp_loop(const PointCloud& cloud, const PipelineConfig& config,
                          const CalibrationExtrinsics& calib) {
  config.validate();

  EpisodeLog log;
  log.base_cloud = config.voxel > 0.0 ? voxel_downsample(cloud, config.voxel) : cloud;

  // The base cloud is voxelized once; iterations run on shrinking subsets.
  PipelineConfig inner = config;
  inner.voxel = 0.0;

  PointCloud working = log.base_cloud;
  std::vector<int> base_ids(working.size());
  std::iota(base_ids.begin(), base_ids.end(), 0);

  int iter = 0;
  while (!working.empty()) {
    DetectionResult det;
    try {
      det = run_detection(working, inner, &calib);
    } catch (const std::exception& e) {
      log.termination = std::string("error: ") + e.what();
      return log;
    }

    IterationDetections dets;
    for (std::size_t k = 0; k < det.instances.instance_count(); ++k) {
      std::vector<int> members;
      members.reserve(det.instances.instances[k].size());
      for (int wid : det.instances.instances[k]) members.push_back(base_ids[wid]);
      dets.proposals.push_back(std::move(members));
    }
    dets.scores.assign(det.instances.instance_count(), -1.0);
    for (const ScoredInstance& si : det.scored) dets.scores[si.instance_id] = si.sc;

    if (det.scored.empty() || det.scored.front().sc < config.c_theta) {
      if (!dets.proposals.empty()) log.detections.push_back(std::move(dets));
      log.termination = "below-threshold";
      return log;
    }
    log.detections.push_back(std::move(dets));

    const ScoredInstance& best = det.scored.front();
    const std::vector<int>& members = det.instances.instances[best.instance_id];

    GraspRecord record;
    record.iter = iter++;
    record.n_points = best.n_points;
    record.s_f = best.s_f;
    record.h_m = best.h_m;
    record.sc = best.sc;
    try {
      record.plan.instance_id = best.instance_id;
      record.plan.center_camera = instance_centroid(working, members);
      record.plan.center_robot = to_robot_frame(record.plan.center_camera, calib);
      record.plan.yaw = yaw_angle(working, members);
      record.plan.confidence = best.sc;
    } catch (const std::exception& e) {
      log.termination = std::string("error: ") + e.what();
      return log;
    }
    record.remaining_foreground = det.mask.foreground_count() - members.size();
    log.grasps.push_back(record);

    // Simulated grasp: delete the instance's points.
    std::vector<char> drop(working.size(), 0);
    for (int wid : members) drop[wid] = 1;
    std::vector<int> keep;
    keep.reserve(working.size() - members.size());
    for (std::size_t i = 0; i < working.size(); ++i) {
      if (!drop[i]) keep.push_back(static_cast<int>(i));
    }
    working = working.select(keep);
    std::vector<int> next_ids;
    next_ids.reserve(keep.size());
    for (int wid : keep) next_ids.push_back(base_ids[wid]);
    base_ids = std::move(next_ids);
  }
  log.termination = "below-threshold";
  return log;
}

void save_episode_log(const std::filesystem::path& path, const EpisodeLog& log) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  for (const GraspRecord& r : log.grasps) {
    nlohmann::json j;
    j["iter"] = r.iter;
    j["instance_id"] = r.plan.instance_id;
    j["n_points"] = r.n_points;
    j["s_f"] = r.s_f;
    j["h_m"] = r.h_m;
    j["sc"] = r.sc;
    j["center_camera"] = {r.plan.center_camera.x, r.plan.center_camera.y, r.plan.center_camera.z};
    j["center_robot"] = {r.plan.center_robot.x, r.plan.center_robot.y, r.plan.center_robot.z};
    j["yaw"] = r.plan.yaw;
    j["remaining_foreground"] = r.remaining_foreground;
    out << j.dump() << '\n';
  }
}

}  // namespace owg
