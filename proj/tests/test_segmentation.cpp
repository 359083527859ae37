// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <random>

#include "owg/errors.hpp"
#include "owg/scene_sim.hpp"
#include "owg/segmentation.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace owg;
using testutil::TempDir;

namespace {

SemanticScores make_scores(const std::vector<std::vector<double>>& rows) {
  std::vector<double> data;
  for (const auto& row : rows) data.insert(data.end(), row.begin(), row.end());
  return SemanticScores(rows.size(), rows.empty() ? 2 : rows[0].size(), std::move(data));
}

std::vector<double> random_stochastic_row(std::mt19937& gen, std::size_t m) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> row(m);
  double sum = 0.0;
  for (double& v : row) {
    v = u(gen);
    sum += v;
  }
  for (double& v : row) v /= sum;
  return row;
}

}  // namespace

TEST_CASE("binarize keeps the background score and max-pools the rest") {
  const auto binary = binarize_scores(make_scores({{0.7, 0.2, 0.1}, {0.1, 0.3, 0.6}}));
  CHECK(binary.pairs[0][0] == doctest::Approx(0.7));
  CHECK(binary.pairs[0][1] == doctest::Approx(0.2));
  CHECK(binary.pairs[1][0] == doctest::Approx(0.1));
  CHECK(binary.pairs[1][1] == doctest::Approx(0.6));
}

TEST_CASE("scores with a single class are rejected") {
  CHECK_THROWS_AS(SemanticScores(1, 1, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_scores({{0.5, 0.2, 0.1}}), std::invalid_argument);  // not stochastic
}

TEST_CASE("binarize matches the scalar loop oracle on random rows") {
  std::mt19937 gen(41);
  std::uniform_int_distribution<std::size_t> classes(2, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t m = classes(gen);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 50; ++i) rows.push_back(random_stochastic_row(gen, m));
    const auto binary = binarize_scores(make_scores(rows));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto [bg, fg] = oracles::eq1_binary_score(rows[i]);
      CHECK(binary.pairs[i][0] == bg);
      CHECK(binary.pairs[i][1] == fg);
    }
  }
}

TEST_CASE("foreground prediction with the documented tie rule") {
  BinaryScores binary;
  binary.pairs = {{0.7, 0.2}, {0.1, 0.6}, {0.5, 0.5}};
  const ForegroundMask mask = predict_foreground(binary);
  CHECK(mask.labels[0] == 0);
  CHECK(mask.labels[1] == 1);
  CHECK(mask.labels[2] == 1);  // tie -> foreground
  CHECK(mask.foreground_count() == 2);
  CHECK(mask.foreground_ids() == std::vector<int>{1, 2});
}

TEST_CASE("binarize-then-predict equals merged-class argmax") {
  std::mt19937 gen(43);
  std::uniform_int_distribution<std::size_t> classes(2, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = classes(gen);
    const auto row = random_stochastic_row(gen, m);
    const auto mask = predict_foreground(binarize_scores(make_scores({row})));
    const auto [bg, fg] = oracles::eq1_binary_score(row);
    CHECK(mask.labels[0] == oracles::eq2_predict(bg, fg));
  }
}

TEST_CASE("prediction is invariant under strictly increasing transforms") {
  std::mt19937 gen(47);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto monotone = [](double v) { return std::exp(3.0 * v) + v; };
  for (int trial = 0; trial < 500; ++trial) {
    const double bg = u(gen), fg = u(gen);
    if (bg == fg) continue;
    BinaryScores raw, mapped;
    raw.pairs = {{bg, fg}};
    mapped.pairs = {{monotone(bg), monotone(fg)}};
    CHECK(predict_foreground(raw).labels[0] == predict_foreground(mapped).labels[0]);
  }
}

TEST_CASE("heuristic scores label a flat table as background") {
  PointCloud cloud;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) cloud.positions.push_back({i * 0.01, j * 0.01, 0.0});
  }
  const SemanticScores scores = heuristic_scores(cloud, 0.01);
  REQUIRE(scores.class_count() == 2);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    CHECK(scores.at(i, 0) == doctest::Approx(0.9));
    CHECK(scores.at(i, 1) == doctest::Approx(0.1));
  }
}

TEST_CASE("heuristic scores flag off-plane points as foreground") {
  PointCloud cloud;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) cloud.positions.push_back({i * 0.01, j * 0.01, 0.0});
  }
  cloud.positions.push_back({0.05, 0.05, 0.1});
  const SemanticScores scores = heuristic_scores(cloud, 0.01);
  const std::size_t last = cloud.size() - 1;
  CHECK(scores.at(last, 0) == doctest::Approx(0.1));
  CHECK(scores.at(last, 1) == doctest::Approx(0.9));
  CHECK(scores.at(0, 0) == doctest::Approx(0.9));
}

TEST_CASE("heuristic scores need at least 3 points") {
  PointCloud cloud;
  cloud.positions = {{0, 0, 0}, {1, 0, 0}};
  CHECK_THROWS_AS(heuristic_scores(cloud, 0.01), std::invalid_argument);
}

TEST_CASE("heuristic recall of simulated object points is high") {
  const SceneSpec spec = scenario_preset("scenario1", 5);
  const PointCloud cloud = generate_scene(spec, DeviceProfile::builtin("ainstec"));
  const ForegroundMask mask = predict_foreground(binarize_scores(heuristic_scores(cloud, 0.02)));
  std::size_t object_points = 0, recalled = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (cloud.gt_instance[i] >= 0) {
      ++object_points;
      recalled += mask.labels[i];
    }
  }
  REQUIRE(object_points > 0);
  CHECK(static_cast<double>(recalled) / object_points >= 0.99);
}

TEST_CASE("load_scores reads csv and validates row counts") {
  TempDir dir("scores");
  const std::string path = dir.file("s.csv");
  {
    std::ofstream out(path);
    out << "0.7,0.3\n0.2,0.8\n";
  }
  const SemanticScores scores = load_scores(path, 2);
  CHECK(scores.point_count() == 2);
  CHECK(scores.class_count() == 2);
  CHECK(scores.at(1, 1) == doctest::Approx(0.8));

  CHECK_THROWS_AS(load_scores(path, 3), InputError);
}

TEST_CASE("load_scores renormalizes rows within tolerance") {
  TempDir dir("scores2");
  const std::string path = dir.file("s.csv");
  {
    std::ofstream out(path);
    out << "0.7005,0.3\n0.2,0.8\n";  // first row sums to 1.0005
  }
  const SemanticScores scores = load_scores(path, 2);
  CHECK(scores.at(0, 0) + scores.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));

  const std::string bad = dir.file("bad.csv");
  {
    std::ofstream out(bad);
    out << "0.8,0.3\n";  // sums to 1.1, beyond tolerance
  }
  CHECK_THROWS_AS(load_scores(bad, 1), InputError);
}

TEST_CASE("load_scores reads the json form") {
  TempDir dir("scores3");
  const std::string path = dir.file("s.json");
  {
    std::ofstream out(path);
    out << R"({"scores": [[0.5, 0.25, 0.25], [0.1, 0.6, 0.3]]})";
  }
  const SemanticScores scores = load_scores(path, 2);
  CHECK(scores.class_count() == 3);
  CHECK(scores.at(1, 1) == doctest::Approx(0.6));
}
