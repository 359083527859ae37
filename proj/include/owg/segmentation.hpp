// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "owg/cloud.hpp"

namespace owg {

/// Row-stochastic N x M per-point class scores. The background class is the
/// first column (class index 1 in one-based notation, stored zero-based).
class SemanticScores {
 public:
  /// Validates shape and row sums (tolerance 1e-5) and takes ownership.
  SemanticScores(std::size_t points, std::size_t classes, std::vector<double> data);

  std::size_t point_count() const { return points_; }
  std::size_t class_count() const { return classes_; }
  double at(std::size_t i, std::size_t c) const { return data_[i * classes_ + c]; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t points_;
  std::size_t classes_;
  std::vector<double> data_;
};

/// Per-point [background_score, foreground_score] pairs.
struct BinaryScores {
  std::vector<std::array<double, 2>> pairs;
  std::size_t size() const { return pairs.size(); }
};

/// Per-point binary labels, 0 = background, 1 = foreground.
struct ForegroundMask {
  std::vector<std::uint8_t> labels;
  std::size_t size() const { return labels.size(); }
  std::size_t foreground_count() const;
  /// Point ids labeled foreground, ascending.
  std::vector<int> foreground_ids() const;
};

/// Reduce multi-class scores to [background, max over foreground classes].
BinaryScores binarize_scores(const SemanticScores& scores);

/// Argmax of each binary pair; ties classify as foreground.
ForegroundMask predict_foreground(const BinaryScores& binary);

/// Stand-in score provider for clouds without an external semantic model:
/// fits the dominant plane by least squares over the lowest-height quartile
/// of points and scores points within table_margin of it as background
/// (0.9/0.1), everything else as foreground (0.1/0.9). M = 2.
/// Throws std::invalid_argument when the cloud has fewer than 3 points.
SemanticScores heuristic_scores(const PointCloud& cloud, double table_margin);

/// Load an N x M score matrix from CSV (one row per point) or internal-json
/// {"scores": [[...], ...]}. Rows whose sum deviates from 1 by more than 1e-3
/// are rejected; smaller deviations are renormalized.
SemanticScores load_scores(const std::filesystem::path& path, std::size_t n_expected);

}  // namespace owg
