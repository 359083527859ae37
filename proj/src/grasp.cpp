// SPDX-License-Identifier: Apache-2.0

#include "owg/grasp.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "owg/errors.hpp"

namespace owg {

CalibrationExtrinsics::CalibrationExtrinsics(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  const Mat3 gram = matmul(rotation, transpose(rotation));
  const Mat3 eye = identity3();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (std::abs(gram[i][j] - eye[i][j]) > 1e-6) {
        throw std::invalid_argument("calibration rotation is not orthonormal");
      }
    }
  }
  if (std::abs(det3(rotation) - 1.0) > 1e-6) {
    throw std::invalid_argument("calibration rotation must have det +1");
  }
}

CalibrationExtrinsics CalibrationExtrinsics::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open calibration '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (!j.contains("rotation") || !j.contains("translation")) {
    throw InputError(path.string() + ": expected 'rotation' and 'translation' keys");
  }
  const auto rows = j["rotation"];
  const auto t = j["translation"];
  if (!rows.is_array() || rows.size() != 3 || !t.is_array() || t.size() != 3) {
    throw InputError(path.string() + ": rotation must be 3x3 and translation a 3-vector");
  }
  Mat3 r{};
  for (int i = 0; i < 3; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 3) {
      throw InputError(path.string() + ": rotation row " + std::to_string(i) + " is not length 3");
    }
    for (int k = 0; k < 3; ++k) r[i][k] = rows[i][k].get<double>();
  }
  const Vec3 trans{t[0].get<double>(), t[1].get<double>(), t[2].get<double>()};
  try {
    return {r, trans};
  } catch (const std::invalid_argument& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void CalibrationExtrinsics::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  nlohmann::json j;
  j["rotation"] = {
      {rotation_[0][0], rotation_[0][1], rotation_[0][2]},
      {rotation_[1][0], rotation_[1][1], rotation_[1][2]},
      {rotation_[2][0], rotation_[2][1], rotation_[2][2]},
  };
  j["translation"] = {translation_.x, translation_.y, translation_.z};
  out << j.dump() << '\n';
}

Vec3 instance_centroid(const PointCloud& cloud, std::span<const int> instance) {
  if (instance.empty()) throw std::invalid_argument("centroid of empty instance");
  Vec3 sum;
  for (int id : instance) sum += cloud.positions[id];
  return sum / static_cast<double>(instance.size());
}

Vec3 to_robot_frame(const Vec3& center_camera, const CalibrationExtrinsics& calib) {
  return row_times_mat(center_camera, calib.rotation()) + calib.translation();
}

double yaw_angle(const PointCloud& cloud, std::span<const int> instance) {
  if (instance.size() < 2) throw std::invalid_argument("yaw_angle needs at least 2 points");

  int xmax_id = instance[0];
  int ymax_id = instance[0];
  double x_min = cloud.positions[instance[0]].x;
  double y_min = cloud.positions[instance[0]].y;
  bool degenerate = true;
  const Vec3& first = cloud.positions[instance[0]];
  for (int id : instance) {
    const Vec3& p = cloud.positions[id];
    if (p.x != first.x || p.y != first.y) degenerate = false;
    x_min = std::min(x_min, p.x);
    y_min = std::min(y_min, p.y);
    // Tied maxima resolve to the smallest point id regardless of span order.
    if (p.x > cloud.positions[xmax_id].x || (p.x == cloud.positions[xmax_id].x && id < xmax_id)) {
      xmax_id = id;
    }
    if (p.y > cloud.positions[ymax_id].y || (p.y == cloud.positions[ymax_id].y && id < ymax_id)) {
      ymax_id = id;
    }
  }
  if (degenerate) throw std::invalid_argument("yaw_angle: instance has no planar extent");

  const double y_xmax = cloud.positions[xmax_id].y;
  const double x_ymax = cloud.positions[ymax_id].x;
  const double denom = x_ymax - x_min;
  if (std::abs(denom) < 1e-9) return M_PI / 2.0;
  return std::atan((y_xmax - y_min) / denom);
}

}  // namespace owg
