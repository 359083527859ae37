// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "owg/cloud.hpp"

namespace owg {

/// Synthetic overhead camera model. Built-in profiles:
///   ainstec: 400k pts/m^2, 0.1% fractional depth noise
///   d455:    100k pts/m^2, 2% fractional depth noise
/// Both drop 2% of points; d455 carries a 3 mm systematic height bias.
struct DeviceProfile {
  std::string name;
  double points_per_m2 = 400000.0;
  double depth_noise_frac = 0.001;
  double dropout_frac = 0.02;
  double z_offset = 0.0;

  void validate() const;
  static DeviceProfile builtin(const std::string& name);
  static DeviceProfile load(const std::filesystem::path& path);
};

enum class ShapeKind { Box, Cylinder, Sphere, LBlock };

/// dims meaning: box/l-block (lx, ly, lz); cylinder (radius, height, -);
/// sphere (radius, -, -). pose is the footprint center (x, y) plus yaw.
struct ObjectSpec {
  std::string name;
  ShapeKind shape = ShapeKind::Box;
  Vec3 dims{0.05, 0.05, 0.05};
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  std::string stack_on;  // empty = rests on the table
};

/// Table-top scene: table centered at the origin with its surface at z = 0,
/// extent table_x by table_y, objects resting on it or on each other.
struct SceneSpec {
  std::uint64_t seed = 0;
  double table_x = 0.6;
  double table_y = 0.6;
  std::vector<ObjectSpec> objects;

  /// Checks dims, stacking references (existence, acyclicity, flat support,
  /// containment) and that unrelated footprints do not overlap.
  /// Throws InputError on violations.
  void validate() const;

  static SceneSpec load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

/// Sample the scene as seen from a fixed overhead camera: uniform xy samples
/// over the table take the height of the topmost surface at that location
/// (exact top-down z-buffer), then fractional-depth Gaussian noise
/// (sigma = depth_noise_frac * depth), dropout, and z_offset are applied.
/// Emits colors, gt_instance (-1 table, 0..K-1 objects) and gt_semantic
/// (1 background, 2 object). Deterministic from (spec.seed, spec, profile).
PointCloud generate_scene(const SceneSpec& spec, const DeviceProfile& profile);

/// Deterministic scenario presets mirroring the five evaluation setups:
///   scenario1  unstacked boxes
///   scenario2  building blocks in random stacks
///   scenario3  mixed household-like shapes, unstacked
///   scenario4  larger variety of shapes, unstacked
///   scenario5  stacked mixed shapes
/// Throws std::invalid_argument for unknown names.
SceneSpec scenario_preset(const std::string& name, std::uint64_t seed);

}  // namespace owg
