// SPDX-License-Identifier: Apache-2.0

#include "owg/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "owg/errors.hpp"
#include "owg/spatial_index.hpp"

namespace owg {

void ScoreParams::validate() const {
  if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  if (n_theta < 1) throw std::invalid_argument("n_theta must be >= 1");
}

double mean_height(const PointCloud& cloud, std::span<const int> instance,
                   std::pair<double, double> scene_z_range) {
  if (instance.empty()) throw std::invalid_argument("mean_height on empty instance");
  const auto [z_lo, z_hi] = scene_z_range;
  if (!(z_hi > z_lo)) throw std::invalid_argument("scene z-range must have z_hi > z_lo");
  double sum = 0.0;
  for (int id : instance) sum += cloud.positions[id].z;
  const double mean = sum / static_cast<double>(instance.size());
  return std::clamp((mean - z_lo) / (z_hi - z_lo), 0.0, 1.0);
}

double geometric_feature_score(const PointCloud& cloud, std::span<const int> instance,
                               double radius) {
  if (instance.size() < 4) return 0.0;
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");

  std::vector<Vec3> pts;
  pts.reserve(instance.size());
  for (int id : instance) pts.push_back(cloud.positions[id]);
  const SpatialIndex index(std::move(pts));

  std::vector<int> density(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    density[i] = static_cast<int>(index.radius_neighbors(static_cast<int>(i), radius).size());
  }
  std::vector<int> sorted = density;
  std::sort(sorted.begin(), sorted.end());
  const int median = sorted[(sorted.size() - 1) / 2];  // lower median

  std::size_t at_or_above = 0;
  for (int d : density) {
    if (d >= median) ++at_or_above;
  }
  const double ratio = static_cast<double>(at_or_above) / static_cast<double>(instance.size());
  return std::clamp(ratio, 0.0, 1.0);
}

double score_instance(int n_points, double s_f, double h_m, const ScoreParams& params) {
  params.validate();
  if (n_points < params.n_theta) return -1.0;
  return params.alpha * s_f + (1.0 - params.alpha) * h_m;
}

std::vector<ScoredInstance> score_all(const PointCloud& cloud, const InstanceSet& instances,
                                      const ScoreParams& params, FeatureScoreSource source,
                                      std::pair<double, double> scene_z_range,
                                      std::span<const double> file_scores, double feature_radius) {
  params.validate();
  if (source == FeatureScoreSource::File && file_scores.size() != instances.instance_count()) {
    throw InputError("feature score count " + std::to_string(file_scores.size()) +
                     " does not match instance count " +
                     std::to_string(instances.instance_count()));
  }

  std::vector<ScoredInstance> out;
  out.reserve(instances.instance_count());
  for (std::size_t k = 0; k < instances.instance_count(); ++k) {
    const std::vector<int>& members = instances.instances[k];
    ScoredInstance si;
    si.instance_id = static_cast<int>(k);
    si.n_points = static_cast<int>(members.size());
    si.s_f = source == FeatureScoreSource::File
                 ? file_scores[k]
                 : geometric_feature_score(cloud, members, feature_radius);
    si.h_m = mean_height(cloud, members, scene_z_range);
    si.sc = score_instance(si.n_points, si.s_f, si.h_m, params);
    out.push_back(si);
  }
  std::sort(out.begin(), out.end(), [](const ScoredInstance& a, const ScoredInstance& b) {
    if (a.sc != b.sc) return a.sc > b.sc;
    return a.instance_id < b.instance_id;
  });
  return out;
}

std::vector<double> load_feature_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (!j.contains("s_f") || !j["s_f"].is_array()) {
    throw InputError(path.string() + ": expected an 's_f' array");
  }
  auto scores = j["s_f"].get<std::vector<double>>();
  for (double v : scores) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError(path.string() + ": s_f values must be in [0,1]");
  }
  return scores;
}

}  // namespace owg
