// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <random>

#include <json.hpp>

#include "owg/grasp_loop.hpp"
#include "owg/grasp.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace owg;

namespace {

PointCloud cloud_of(std::vector<Vec3> pts) {
  PointCloud cloud;
  cloud.positions = std::move(pts);
  return cloud;
}

Mat3 random_rotation(std::mt19937& gen) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const double a = angle(gen), b = angle(gen), c = angle(gen);
  const Mat3 rx{{{1, 0, 0}, {0, std::cos(a), -std::sin(a)}, {0, std::sin(a), std::cos(a)}}};
  const Mat3 ry{{{std::cos(b), 0, std::sin(b)}, {0, 1, 0}, {-std::sin(b), 0, std::cos(b)}}};
  return matmul(matmul(rx, ry), rot_z(c));
}

/// Flat jittered plateau with a shared jitter pattern, so two translated
/// copies are point-for-point congruent.
std::vector<Vec3> plateau(std::mt19937& gen, int side, double pitch, Vec3 origin) {
  std::uniform_real_distribution<double> jitter(-pitch * 0.15, pitch * 0.15);
  std::vector<Vec3> pts;
  for (int i = 0; i < side; ++i) {
    for (int j = 0; j < side; ++j) {
      pts.push_back({origin.x + i * pitch + jitter(gen), origin.y + j * pitch + jitter(gen),
                     origin.z});
    }
  }
  return pts;
}

PipelineConfig fixture_config() {
  PipelineConfig cfg;
  cfg.voxel = 0.0;  // fixtures are already evenly spaced
  cfg.table_margin = 0.02;
  return cfg;
}

}  // namespace

TEST_CASE("instance centroid") {
  const PointCloud cloud = cloud_of({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}});
  const Vec3 c = instance_centroid(cloud, std::vector<int>{0, 1, 2});
  CHECK(c == Vec3{1, 1, 1});
  CHECK(instance_centroid(cloud, std::vector<int>{2}) == Vec3{2, 2, 2});
  CHECK_THROWS_AS(instance_centroid(cloud, {}), std::invalid_argument);
}

TEST_CASE("centroid matches the accumulate-divide oracle") {
  std::mt19937 gen(131);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::vector<Vec3> pts;
  PointCloud cloud;
  std::vector<int> ids;
  for (int i = 0; i < 200; ++i) {
    const Vec3 p{coord(gen), coord(gen), coord(gen)};
    pts.push_back(p);
    cloud.positions.push_back(p);
    ids.push_back(i);
  }
  const Vec3 expected = oracles::centroid_formula(pts);
  const Vec3 got = instance_centroid(cloud, ids);
  CHECK(std::abs(got.x - expected.x) < 1e-9);
  CHECK(std::abs(got.y - expected.y) < 1e-9);
  CHECK(std::abs(got.z - expected.z) < 1e-9);
}

TEST_CASE("robot frame transform follows the row-vector convention") {
  const CalibrationExtrinsics id = CalibrationExtrinsics::identity();
  CHECK(to_robot_frame({1, 2, 3}, id) == Vec3{1, 2, 3});

  const CalibrationExtrinsics shift(identity3(), {0.1, 0, 0});
  CHECK(to_robot_frame({1, 2, 3}, shift) == Vec3{1.1, 2, 3});
}

TEST_CASE("non-orthonormal calibrations are rejected") {
  Mat3 bad = identity3();
  bad[0][0] = 2.0;
  CHECK_THROWS_AS(CalibrationExtrinsics(bad, {0, 0, 0}), std::invalid_argument);
  Mat3 reflect = identity3();
  reflect[2][2] = -1.0;  // orthonormal but det -1
  CHECK_THROWS_AS(CalibrationExtrinsics(reflect, {0, 0, 0}), std::invalid_argument);
}

TEST_CASE("robot transform round-trips through its inverse") {
  std::mt19937 gen(137);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat3 r = random_rotation(gen);
    const Vec3 t{coord(gen), coord(gen), coord(gen)};
    const CalibrationExtrinsics calib(r, t);
    const Vec3 c{coord(gen), coord(gen), coord(gen)};
    const Vec3 cr = to_robot_frame(c, calib);
    // inverse of x -> x*R + T is y -> (y - T)*R^T
    const Vec3 back = row_times_mat(cr - t, transpose(r));
    CHECK(std::abs(back.x - c.x) < 1e-9);
    CHECK(std::abs(back.y - c.y) < 1e-9);
    CHECK(std::abs(back.z - c.z) < 1e-9);
    CHECK(to_robot_frame(c, calib) == oracles::robot_frame_formula(c, r, t));
  }
}

TEST_CASE("robot transform preserves pairwise distances") {
  std::mt19937 gen(139);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const CalibrationExtrinsics calib(random_rotation(gen), {0.3, -0.2, 0.9});
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 a{coord(gen), coord(gen), coord(gen)};
    const Vec3 b{coord(gen), coord(gen), coord(gen)};
    const double before = distance(a, b);
    const double after = distance(to_robot_frame(a, calib), to_robot_frame(b, calib));
    CHECK(std::abs(before - after) < 1e-9);
  }
}

TEST_CASE("calibration files round-trip and validate") {
  testutil::TempDir dir("calib");
  std::mt19937 gen(149);
  const CalibrationExtrinsics calib(random_rotation(gen), {0.1, 0.2, 0.3});
  const std::string path = dir.file("calib.json");
  calib.save(path);
  const CalibrationExtrinsics back = CalibrationExtrinsics::load(path);
  CHECK(back.rotation() == calib.rotation());
  CHECK(back.translation() == calib.translation());

  const std::string bad = dir.file("bad.json");
  {
    std::ofstream out(bad);
    out << R"({"rotation": [[2,0,0],[0,1,0],[0,0,1]], "translation": [0,0,0]})";
  }
  CHECK_THROWS_AS(CalibrationExtrinsics::load(bad), InputError);
}

TEST_CASE("yaw of the unit square under the documented tie rule") {
  const PointCloud cloud = cloud_of({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  CHECK(yaw_angle(cloud, std::vector<int>{0, 1, 2, 3}) == doctest::Approx(0.0));
}

TEST_CASE("yaw degenerates to pi/2 when the denominator vanishes") {
  // max-y point sits exactly at x_min
  const PointCloud wedge = cloud_of({{0, 0, 0}, {0.5, 0.1, 0}, {0, 1, 0}});
  CHECK(yaw_angle(wedge, std::vector<int>{0, 1, 2}) == doctest::Approx(M_PI / 2));

  // vertical segment: every point shares x = x_min
  const PointCloud segment = cloud_of({{0, 0, 0}, {0, 1, 0}, {0, 0.5, 0}});
  CHECK(yaw_angle(segment, std::vector<int>{0, 1, 2}) == doctest::Approx(M_PI / 2));
}

TEST_CASE("yaw rejects instances with no planar extent") {
  const PointCloud stacked = cloud_of({{0.1, 0.2, 0}, {0.1, 0.2, 0.5}, {0.1, 0.2, 1.0}});
  CHECK_THROWS_AS(yaw_angle(stacked, std::vector<int>{0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(yaw_angle(stacked, std::vector<int>{0}), std::invalid_argument);
}

TEST_CASE("yaw matches the formula transcription on random instances") {
  std::mt19937 gen(151);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  std::uniform_int_distribution<int> size(2, 40);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Vec3> pts;
    PointCloud cloud;
    std::vector<int> ids;
    const int n = size(gen);
    for (int i = 0; i < n; ++i) {
      const Vec3 p{coord(gen), coord(gen), coord(gen)};
      pts.push_back(p);
      cloud.positions.push_back(p);
      ids.push_back(i);
    }
    CHECK(yaw_angle(cloud, ids) == oracles::yaw_formula(pts));
  }
}

TEST_CASE("yaw is invariant under xy translation") {
  std::mt19937 gen(157);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  std::vector<Vec3> pts;
  for (int i = 0; i < 25; ++i) pts.push_back({coord(gen), coord(gen), 0.0});
  PointCloud cloud;
  PointCloud shifted;
  std::vector<int> ids;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    cloud.positions.push_back(pts[i]);
    shifted.positions.push_back(pts[i] + Vec3{0.25, -0.125, 0});
    ids.push_back(static_cast<int>(i));
  }
  CHECK(yaw_angle(cloud, ids) == yaw_angle(shifted, ids));
}

TEST_CASE("argmax grasp selection ignores positive scaling of SC") {
  std::mt19937 gen(163);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredInstance> scored(6);
    for (int k = 0; k < 6; ++k) {
      scored[k].instance_id = k;
      scored[k].sc = u(gen);
    }
    auto argmax = [](const std::vector<ScoredInstance>& list) {
      int best = 0;
      for (std::size_t k = 1; k < list.size(); ++k) {
        if (list[k].sc > list[best].sc) best = static_cast<int>(k);
      }
      return list[best].instance_id;
    };
    std::vector<ScoredInstance> scaled = scored;
    const double factor = 0.001 + 10.0 * u(gen);
    for (auto& si : scaled) si.sc *= factor;
    CHECK(argmax(scored) == argmax(scaled));
  }
}

TEST_CASE("grasp loop on a table-only scene terminates immediately") {
  PointCloud cloud;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) cloud.positions.push_back({i * 0.0075, j * 0.0075, 0.0});
  }
  const EpisodeLog log =
      run_grasp_loop(cloud, fixture_config(), CalibrationExtrinsics::identity());
  CHECK(log.grasps.empty());
  CHECK(log.termination == "below-threshold");
}

TEST_CASE("grasp loop takes a single object in one grasp") {
  std::mt19937 gen(167);
  PointCloud cloud;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) cloud.positions.push_back({i * 0.0075, j * 0.0075, 0.0});
  }
  for (const Vec3& p : plateau(gen, 9, 0.0045, {0.13, 0.13, 0.05})) cloud.positions.push_back(p);

  const CalibrationExtrinsics calib(rot_z(M_PI / 2), {0.1, 0.0, 0.2});
  const EpisodeLog log = run_grasp_loop(cloud, fixture_config(), calib);
  REQUIRE(log.grasps.size() == 1);
  CHECK(log.termination == "below-threshold");
  const GraspRecord& r = log.grasps[0];
  CHECK(r.n_points == 81);
  CHECK(r.sc > 0.5);
  CHECK(r.plan.center_robot == to_robot_frame(r.plan.center_camera, calib));
  CHECK(r.plan.center_camera.z == doctest::Approx(0.05));
  CHECK(r.remaining_foreground == 0);
  // termination bound: iterations <= ceil(fg/n_theta) + 1
  CHECK(log.grasps.size() <= 81 / 60 + 2);
}

TEST_CASE("grasp loop prefers the higher of two congruent objects") {
  for (double alpha : {0.0, 0.3, 0.6, 0.99}) {
    std::mt19937 gen(173);
    PointCloud cloud;
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 30; ++j) cloud.positions.push_back({i * 0.0075, j * 0.0075, 0.0});
    }
    // identical jitter pattern, translated: s_f is exactly equal by construction
    std::mt19937 pattern(7);
    const auto low = plateau(pattern, 9, 0.0045, {0.05, 0.08, 0.04});
    std::mt19937 pattern2(7);
    const auto high = plateau(pattern2, 9, 0.0045, {0.25, 0.08, 0.12});
    for (const Vec3& p : low) cloud.positions.push_back(p);
    std::vector<int> high_ids;
    for (const Vec3& p : high) {
      high_ids.push_back(static_cast<int>(cloud.size()));
      cloud.positions.push_back(p);
    }

    PipelineConfig cfg = fixture_config();
    cfg.alpha = alpha;
    const EpisodeLog log = run_grasp_loop(cloud, cfg, CalibrationExtrinsics::identity());
    REQUIRE(log.grasps.size() >= 1);
    CHECK(log.grasps[0].plan.center_camera.z == doctest::Approx(0.12));
    CHECK(log.grasps.size() == 2);
  }
}

TEST_CASE("episode log serializes one json line per grasp") {
  testutil::TempDir dir("episode");
  std::mt19937 gen(179);
  PointCloud cloud;
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) cloud.positions.push_back({i * 0.0075, j * 0.0075, 0.0});
  }
  for (const Vec3& p : plateau(gen, 9, 0.0045, {0.13, 0.13, 0.05})) cloud.positions.push_back(p);
  const EpisodeLog log =
      run_grasp_loop(cloud, fixture_config(), CalibrationExtrinsics::identity());
  const std::string path = dir.file("episode.jsonl");
  save_episode_log(path, log);

  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("iter"));
    CHECK(j.contains("sc"));
    CHECK(j.contains("center_robot"));
    CHECK(j.contains("yaw"));
    CHECK(j.contains("remaining_foreground"));
  }
  CHECK(lines == static_cast<int>(log.grasps.size()));
}
