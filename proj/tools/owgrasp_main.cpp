// SPDX-License-Identifier: Apache-2.0
//
// owgrasp: point-cloud open-world detection and grasp planning CLI.
//
// Exit codes: 0 success, 2 bad arguments, 3 input-data error,
// 4 pipeline-empty (empty input cloud / zero-grasp episode).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "owg/cloud_io.hpp"
#include "owg/errors.hpp"
#include "owg/eval.hpp"
#include "owg/grasp_loop.hpp"
#include "owg/pipeline.hpp"
#include "owg/scene_sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadArgs = 2;
constexpr int kExitInputError = 3;
constexpr int kExitPipelineEmpty = 4;

owg::DeviceProfile resolve_profile(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path) &&
      std::filesystem::is_regular_file(name_or_path)) {
    return owg::DeviceProfile::load(name_or_path);
  }
  return owg::DeviceProfile::builtin(name_or_path);
}

owg::CloudFormat format_from_string(const std::string& s) {
  if (s == "ply-binary") return owg::CloudFormat::PlyBinaryLE;
  if (s == "ply-ascii") return owg::CloudFormat::PlyAscii;
  if (s == "json") return owg::CloudFormat::InternalJson;
  throw std::invalid_argument("unknown cloud format '" + s + "'");
}

std::string format_extension(owg::CloudFormat f) {
  return f == owg::CloudFormat::InternalJson ? ".json" : ".ply";
}

/// Pipeline flags shared by detect/grasp/compare-clustering. Flags override
/// whatever the config file set.
struct PipelineFlags {
  std::string config_path;
  std::optional<double> voxel, r_d, r_group, r_vote, alpha, c_theta, table_margin;
  std::optional<int> d_theta, n_theta, min_pts, vote_passes, threads;
  std::optional<std::string> clusterer, scores, sf, height_frame, calib;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "pipeline config file (internal-json)");
    cmd->add_option("--voxel", voxel, "voxel size in meters (0 disables downsampling)");
    cmd->add_option("--r-d", r_d, "density radius");
    cmd->add_option("--r-group", r_group, "grouping radius");
    cmd->add_option("--r-vote", r_vote, "voting radius");
    cmd->add_option("--d-theta", d_theta, "density threshold");
    cmd->add_option("--n-theta", n_theta, "proposal point-count gate");
    cmd->add_option("--alpha", alpha, "feature-score weight");
    cmd->add_option("--c-theta", c_theta, "grasp confidence threshold");
    cmd->add_option("--table-margin", table_margin, "heuristic table margin");
    cmd->add_option("--min-pts", min_pts, "distance-baseline component floor");
    cmd->add_option("--vote-passes", vote_passes, "voting refinement passes");
    cmd->add_option("--threads", threads, "worker threads (output is thread-count independent)");
    cmd->add_option("--clusterer", clusterer, "binary | distance");
    cmd->add_option("--scores", scores, "semantic score file (CSV or json)");
    cmd->add_option("--sf", sf, "per-instance feature score file");
    cmd->add_option("--height-frame", height_frame, "camera | robot");
    cmd->add_option("--calib", calib, "calibration file (internal-json)");
  }

  owg::PipelineConfig build() const {
    owg::PipelineConfig cfg;
    if (!config_path.empty()) cfg = owg::PipelineConfig::load(config_path);
    if (voxel) cfg.voxel = *voxel;
    if (r_d) cfg.r_d = *r_d;
    if (r_group) cfg.r_group = *r_group;
    if (r_vote) cfg.r_vote = *r_vote;
    if (d_theta) cfg.d_theta = *d_theta;
    if (n_theta) cfg.n_theta = *n_theta;
    if (alpha) cfg.alpha = *alpha;
    if (c_theta) cfg.c_theta = *c_theta;
    if (table_margin) cfg.table_margin = *table_margin;
    if (min_pts) cfg.min_pts = *min_pts;
    if (vote_passes) cfg.vote_passes = *vote_passes;
    if (threads) cfg.threads = *threads;
    if (clusterer) {
      if (*clusterer == "binary") cfg.clusterer = owg::ClustererKind::Binary;
      else if (*clusterer == "distance") cfg.clusterer = owg::ClustererKind::Distance;
      else throw std::invalid_argument("unknown clusterer '" + *clusterer + "'");
    }
    if (scores) {
      cfg.score_source = owg::ScoreSource::File;
      cfg.scores_path = *scores;
    }
    if (sf) {
      cfg.sf_source = owg::FeatureScoreSource::File;
      cfg.sf_path = *sf;
    }
    if (height_frame) {
      if (*height_frame == "camera") cfg.height_frame = owg::HeightFrame::Camera;
      else if (*height_frame == "robot") cfg.height_frame = owg::HeightFrame::Robot;
      else throw std::invalid_argument("unknown height frame '" + *height_frame + "'");
    }
    if (calib) cfg.calibration_path = *calib;
    cfg.validate();
    return cfg;
  }
};

void write_scored_instances(const std::filesystem::path& path,
                            const std::vector<owg::ScoredInstance>& scored) {
  std::ofstream out(path);
  if (!out) throw owg::InputError("cannot write '" + path.string() + "'");
  nlohmann::json rows = nlohmann::json::array();
  for (const owg::ScoredInstance& si : scored) {
    rows.push_back({{"id", si.instance_id},
                    {"n_points", si.n_points},
                    {"s_f", si.s_f},
                    {"h_m", si.h_m},
                    {"sc", si.sc}});
  }
  nlohmann::json j;
  j["instances"] = std::move(rows);
  out << j.dump() << '\n';
}

std::vector<owg::ScoredInstance> read_scored_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw owg::InputError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw owg::InputError(path.string() + ": " + e.what());
  }
  if (!j.contains("instances") || !j["instances"].is_array()) {
    throw owg::InputError(path.string() + ": expected an 'instances' array");
  }
  std::vector<owg::ScoredInstance> out;
  try {
    for (const auto& row : j["instances"]) {
      owg::ScoredInstance si;
      si.instance_id = row.at("id").get<int>();
      si.n_points = row.at("n_points").get<int>();
      si.s_f = row.at("s_f").get<double>();
      si.h_m = row.at("h_m").get<double>();
      si.sc = row.at("sc").get<double>();
      out.push_back(si);
    }
  } catch (const nlohmann::json::exception& e) {
    throw owg::InputError(path.string() + ": " + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int cmd_generate(const std::string& preset, const std::string& spec_path,
                 const std::string& profile_name, std::optional<std::uint64_t> seed,
                 const std::string& out_prefix, const std::string& format_name) {
  if (preset.empty() == spec_path.empty()) {
    throw std::invalid_argument("give exactly one of --preset or --spec");
  }
  const owg::DeviceProfile profile = resolve_profile(profile_name);
  owg::SceneSpec spec;
  if (!preset.empty()) {
    spec = owg::scenario_preset(preset, seed.value_or(0));
  } else {
    spec = owg::SceneSpec::load(spec_path);
    if (seed) spec.seed = *seed;
  }

  const owg::CloudFormat format = format_from_string(format_name);
  const owg::PointCloud cloud = owg::generate_scene(spec, profile);
  const std::string cloud_path = out_prefix + "_cloud" + format_extension(format);
  owg::save_cloud(cloud_path, cloud, format);
  spec.save(out_prefix + "_spec.json");
  std::cout << "wrote " << cloud_path << " (" << cloud.size() << " points, profile "
            << profile.name << ")\n";
  return kExitOk;
}

int cmd_detect(const std::string& cloud_path, const PipelineFlags& flags,
               const std::string& out_prefix) {
  const owg::PipelineConfig cfg = flags.build();
  const owg::PointCloud cloud = owg::load_cloud(cloud_path, owg::detect_cloud_format(cloud_path));
  if (cloud.empty()) {
    std::cerr << "input cloud is empty\n";
    return kExitPipelineEmpty;
  }
  const owg::DetectionResult det = owg::run_detection(cloud, cfg);
  owg::save_instances(out_prefix + "_instances.json", det.instances);
  write_scored_instances(out_prefix + "_scores.json", det.scored);
  std::cout << det.instances.instance_count() << " instances ("
            << det.mask.foreground_count() << " foreground points of " << det.working.size()
            << ")\n";
  return kExitOk;
}

int cmd_grasp(const std::string& cloud_path, const PipelineFlags& flags,
              const std::string& out_prefix) {
  const owg::PipelineConfig cfg = flags.build();
  if (cfg.calibration_path.empty()) {
    throw std::invalid_argument("grasp requires --calib (or calibration_path in the config)");
  }
  const owg::CalibrationExtrinsics calib = owg::CalibrationExtrinsics::load(cfg.calibration_path);
  const owg::PointCloud cloud = owg::load_cloud(cloud_path, owg::detect_cloud_format(cloud_path));
  const owg::EpisodeLog log = owg::run_grasp_loop(cloud, cfg, calib);
  owg::save_episode_log(out_prefix + "_episode.jsonl", log);

  nlohmann::json summary;
  summary["grasps"] = log.grasps.size();
  summary["termination"] = log.termination;
  if (log.base_cloud.has_gt_instance() && !log.base_cloud.gt_object_labels().empty()) {
    const owg::EpisodeMetrics m = owg::episode_metrics(log, log.base_cloud);
    summary["recognition_rate"] = m.recognition_rate;
    summary["grasp_rate"] = m.grasp_rate;
  }
  std::ofstream sum_out(out_prefix + "_metrics.json");
  sum_out << summary.dump(2) << '\n';
  std::cout << log.grasps.size() << " grasps, termination: " << log.termination << "\n";
  if (log.termination.rfind("error:", 0) == 0) {
    std::cerr << log.termination << "\n";
    return kExitInputError;
  }
  return log.grasps.empty() ? kExitPipelineEmpty : kExitOk;
}

int cmd_eval(const std::string& pred_path, const std::string& scores_path,
             const std::string& gt_cloud_path, const std::string& out_path) {
  const owg::PointCloud cloud =
      owg::load_cloud(gt_cloud_path, owg::detect_cloud_format(gt_cloud_path));
  if (!cloud.has_gt_instance()) {
    throw owg::InputError(gt_cloud_path + " carries no gt_instance labels");
  }
  const owg::InstanceSet instances = owg::load_instances(pred_path, cloud.size());
  const std::vector<owg::ScoredInstance> scored = read_scored_instances(scores_path);
  for (const owg::ScoredInstance& si : scored) {
    if (si.instance_id < 0 || static_cast<std::size_t>(si.instance_id) >= instances.instance_count()) {
      throw owg::InputError(scores_path + ": instance id " + std::to_string(si.instance_id) +
                            " not present in " + pred_path);
    }
  }
  const auto preds = owg::predictions_from_instances(instances, scored);
  const owg::ApSuite suite = owg::map_suite(preds, owg::gt_instances(cloud));
  owg::save_ap_report(out_path, suite);
  std::cout << owg::format_ap_table({{"predictions", suite}});
  return kExitOk;
}

int cmd_compare_clustering(const std::string& cloud_path, const PipelineFlags& flags,
                           const std::string& out_path) {
  owg::PipelineConfig cfg = flags.build();
  const owg::PointCloud cloud = owg::load_cloud(cloud_path, owg::detect_cloud_format(cloud_path));
  if (!cloud.has_gt_instance()) {
    throw owg::InputError(cloud_path + " carries no gt_instance labels");
  }

  cfg.clusterer = owg::ClustererKind::Binary;
  const owg::DetectionResult binary = owg::run_detection(cloud, cfg);
  cfg.clusterer = owg::ClustererKind::Distance;
  const owg::DetectionResult distance = owg::run_detection(cloud, cfg);

  const auto gts = owg::gt_instances(binary.working);
  const owg::ApSuite binary_suite =
      owg::map_suite(owg::predictions_from_instances(binary.instances, binary.scored), gts);
  const owg::ApSuite distance_suite =
      owg::map_suite(owg::predictions_from_instances(distance.instances, distance.scored), gts);

  std::cout << owg::format_ap_table({{"binary", binary_suite}, {"distance", distance_suite}});
  if (!out_path.empty()) {
    nlohmann::json j;
    for (const auto& [key, suite] :
         {std::pair{"binary", &binary_suite}, std::pair{"distance", &distance_suite}}) {
      j[key] = {{"mAP", suite->map}, {"AP50", suite->ap50}, {"AP25", suite->ap25}};
    }
    std::ofstream out(out_path);
    if (!out) throw owg::InputError("cannot write '" + out_path + "'");
    out << j.dump(2) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-world point-cloud detection and grasp planning"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand("generate", "synthesize a labeled tabletop scene");
  std::string gen_preset, gen_spec, gen_profile = "ainstec", gen_out = "scene";
  std::string gen_format = "ply-binary";
  std::optional<std::uint64_t> gen_seed;
  generate->add_option("--preset", gen_preset, "scenario1..scenario5");
  generate->add_option("--spec", gen_spec, "scene spec file (internal-json)");
  generate->add_option("--profile", gen_profile, "ainstec | d455 | profile file");
  generate->add_option("--seed", gen_seed, "rng seed (overrides the spec's)");
  generate->add_option("--out", gen_out, "output prefix");
  generate->add_option("--format", gen_format, "ply-binary | ply-ascii | json");

  // detect
  auto* detect = app.add_subcommand("detect", "segment, cluster and score one cloud");
  std::string det_cloud, det_out = "detect";
  PipelineFlags det_flags;
  detect->add_option("--cloud", det_cloud, "input cloud")->required();
  detect->add_option("--out", det_out, "output prefix");
  det_flags.attach(detect);

  // grasp
  auto* grasp = app.add_subcommand("grasp", "run the full grasp episode loop");
  std::string grasp_cloud, grasp_out = "grasp";
  PipelineFlags grasp_flags;
  grasp->add_option("--cloud", grasp_cloud, "input cloud")->required();
  grasp->add_option("--out", grasp_out, "output prefix");
  grasp_flags.attach(grasp);

  // eval
  auto* eval = app.add_subcommand("eval", "instance-segmentation AP against gt labels");
  std::string eval_pred, eval_scores, eval_gt, eval_out = "report.json";
  eval->add_option("--pred", eval_pred, "instances file from detect")->required();
  eval->add_option("--scores", eval_scores, "scores file from detect")->required();
  eval->add_option("--gt-cloud", eval_gt, "cloud with gt_instance labels")->required();
  eval->add_option("--out", eval_out, "report path");

  // compare-clustering
  auto* compare = app.add_subcommand("compare-clustering",
                                     "binary vs distance clustering on one labeled cloud");
  std::string cmp_cloud, cmp_out;
  PipelineFlags cmp_flags;
  compare->add_option("--cloud", cmp_cloud, "input cloud with gt labels")->required();
  compare->add_option("--out", cmp_out, "report path (optional)");
  cmp_flags.attach(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitBadArgs;
  }

  try {
    if (generate->parsed()) {
      return cmd_generate(gen_preset, gen_spec, gen_profile, gen_seed, gen_out, gen_format);
    }
    if (detect->parsed()) return cmd_detect(det_cloud, det_flags, det_out);
    if (grasp->parsed()) return cmd_grasp(grasp_cloud, grasp_flags, grasp_out);
    if (eval->parsed()) return cmd_eval(eval_pred, eval_scores, eval_gt, eval_out);
    if (compare->parsed()) return cmd_compare_clustering(cmp_cloud, cmp_flags, cmp_out);
  } catch (const owg::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitBadArgs;
}
