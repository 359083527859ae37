// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <span>

#include "owg/cloud.hpp"
#include "owg/geometry.hpp"

namespace owg {

/// Hand-eye calibration result mapping camera frame to robot frame by
/// Cr = C * R + T (row-vector convention).
class CalibrationExtrinsics {
 public:
  /// Throws std::invalid_argument unless R is orthonormal with det +1
  /// within 1e-6.
  CalibrationExtrinsics(const Mat3& rotation, const Vec3& translation);

  static CalibrationExtrinsics identity() { return {identity3(), {0, 0, 0}}; }

  /// internal-json {"rotation": [[...],[...],[...]], "translation": [x,y,z]}.
  static CalibrationExtrinsics load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

 private:
  Mat3 rotation_;
  Vec3 translation_;
};

struct GraspPlan {
  int instance_id = -1;
  Vec3 center_camera;
  Vec3 center_robot;
  double yaw = 0.0;  // radians in (-pi/2, pi/2]
  double confidence = -1.0;
};

/// Arithmetic mean of member positions. Throws on an empty instance.
Vec3 instance_centroid(const PointCloud& cloud, std::span<const int> instance);

/// Cr = C * R + T with C as a row vector.
Vec3 to_robot_frame(const Vec3& center_camera, const CalibrationExtrinsics& calib);

/// Gripper yaw from the instance's planar extrema:
///   theta = arctan((y_xmax - y_min) / (x_ymax - x_min))
/// where y_xmax is the y of the max-x point and x_ymax the x of the max-y
/// point (ties on the maxima go to the smallest point id), and x_min/y_min
/// are the instance-local coordinate minima. A vanishing denominator yields
/// pi/2. Throws std::invalid_argument when all points coincide in xy.
double yaw_angle(const PointCloud& cloud, std::span<const int> instance);

}  // namespace owg
