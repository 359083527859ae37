// SPDX-License-Identifier: Apache-2.0

#include "owg/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "owg/errors.hpp"

namespace owg {

SemanticScores::SemanticScores(std::size_t points, std::size_t classes, std::vector<double> data)
    : points_(points), classes_(classes), data_(std::move(data)) {
  if (classes_ < 2) throw std::invalid_argument("SemanticScores needs at least 2 classes");
  if (data_.size() != points_ * classes_) {
    throw std::invalid_argument("SemanticScores data size does not match N x M");
  }
  for (std::size_t i = 0; i < points_; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < classes_; ++c) {
      const double v = at(i, c);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw std::invalid_argument("score out of [0,1] at row " + std::to_string(i));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-5) {
      throw std::invalid_argument("row " + std::to_string(i) + " is not stochastic (sum " +
                                  std::to_string(sum) + ")");
    }
  }
}

std::size_t ForegroundMask::foreground_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

std::vector<int> ForegroundMask::foreground_ids() const {
  std::vector<int> ids;
  ids.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) ids.push_back(static_cast<int>(i));
  }
  return ids;
}

BinaryScores binarize_scores(const SemanticScores& scores) {
  BinaryScores out;
  out.pairs.resize(scores.point_count());
  const std::size_t m = scores.class_count();
  for (std::size_t i = 0; i < scores.point_count(); ++i) {
    double fg = scores.at(i, 1);
    for (std::size_t c = 2; c < m; ++c) fg = std::max(fg, scores.at(i, c));
    out.pairs[i] = {scores.at(i, 0), fg};
  }
  return out;
}

ForegroundMask predict_foreground(const BinaryScores& binary) {
  ForegroundMask mask;
  mask.labels.resize(binary.size());
  for (std::size_t i = 0; i < binary.size(); ++i) {
    // Background only on a strict win; ties go to foreground.
    mask.labels[i] = binary.pairs[i][0] > binary.pairs[i][1] ? 0 : 1;
  }
  return mask;
}

SemanticScores heuristic_scores(const PointCloud& cloud, double table_margin) {
  const std::size_t n = cloud.size();
  if (n < 3) throw std::invalid_argument("heuristic_scores needs at least 3 points to fit a plane");
  if (table_margin <= 0.0) throw std::invalid_argument("table_margin must be positive");

  // Lowest-height quartile (at least 3 points) as plane candidates.
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    const double za = cloud.positions[a].z, zb = cloud.positions[b].z;
    return za != zb ? za < zb : a < b;
  });
  const std::size_t q = std::max<std::size_t>(3, n / 4);
  ids.resize(q);

  // Least-squares plane z = a*x + b*y + c via normal equations.
  double sxx = 0, sxy = 0, sx = 0, syy = 0, sy = 0, s1 = 0;
  double sxz = 0, syz = 0, sz = 0;
  for (int id : ids) {
    const Vec3& p = cloud.positions[id];
    sxx += p.x * p.x;
    sxy += p.x * p.y;
    sx += p.x;
    syy += p.y * p.y;
    sy += p.y;
    s1 += 1.0;
    sxz += p.x * p.z;
    syz += p.y * p.z;
    sz += p.z;
  }
  const Mat3 a_mat{{{sxx, sxy, sx}, {sxy, syy, sy}, {sx, sy, s1}}};
  const double det = det3(a_mat);
  double a = 0.0, b = 0.0, c = sz / s1;
  if (std::abs(det) > 1e-12) {
    // Cramer's rule; degenerate xy spreads fall back to the horizontal mean plane.
    const Mat3 ma{{{sxz, sxy, sx}, {syz, syy, sy}, {sz, sy, s1}}};
    const Mat3 mb{{{sxx, sxz, sx}, {sxy, syz, sy}, {sx, sz, s1}}};
    const Mat3 mc{{{sxx, sxy, sxz}, {sxy, syy, syz}, {sx, sy, sz}}};
    a = det3(ma) / det;
    b = det3(mb) / det;
    c = det3(mc) / det;
  }
  const double inv_norm = 1.0 / std::sqrt(a * a + b * b + 1.0);

  std::vector<double> data(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& p = cloud.positions[i];
    const double dist = std::abs(p.z - (a * p.x + b * p.y + c)) * inv_norm;
    const bool on_table = dist <= table_margin;
    data[2 * i] = on_table ? 0.9 : 0.1;
    data[2 * i + 1] = on_table ? 0.1 : 0.9;
  }
  return SemanticScores(n, 2, std::move(data));
}

namespace {

SemanticScores scores_from_rows(std::vector<std::vector<double>> rows, std::size_t n_expected) {
  if (rows.size() != n_expected) {
    throw InputError("score file has " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(n_expected));
  }
  if (rows.empty()) throw InputError("score file is empty");
  const std::size_t m = rows[0].size();
  if (m < 2) throw InputError("score rows need at least 2 classes");

  std::vector<double> data;
  data.reserve(rows.size() * m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) {
      throw InputError("score row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                       " columns, expected " + std::to_string(m));
    }
    double sum = 0.0;
    for (double v : rows[i]) {
      if (!std::isfinite(v) || v < 0.0) {
        throw InputError("invalid score value in row " + std::to_string(i));
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-3) {
      throw InputError("score row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                       ", beyond the 1e-3 tolerance");
    }
    for (double v : rows[i]) data.push_back(v / sum);
  }
  return SemanticScores(rows.size(), m, std::move(data));
}

}  // namespace

SemanticScores load_scores(const std::filesystem::path& path, std::size_t n_expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");

  std::vector<std::vector<double>> rows;
  char first = 0;
  in.get(first);
  in.unget();
  if (first == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(path.string() + ": " + e.what());
    }
    if (!j.contains("scores") || !j["scores"].is_array()) {
      throw InputError(path.string() + ": expected a 'scores' array");
    }
    for (const auto& row : j["scores"]) rows.push_back(row.get<std::vector<double>>());
  } else {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          throw InputError(path.string() + " line " + std::to_string(line_no) +
                           ": cannot parse '" + cell + "'");
        }
      }
      rows.push_back(std::move(row));
    }
  }

  try {
    return scores_from_rows(std::move(rows), n_expected);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace owg
