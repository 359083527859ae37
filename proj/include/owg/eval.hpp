// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "owg/cloud.hpp"
#include "owg/grasp_loop.hpp"

namespace owg {

/// A scored prediction for AP evaluation: point ids plus a confidence.
struct EvalPred {
  std::vector<int> points;
  double score = 0.0;
};

/// Set IoU over point-id sets; empty-over-empty is 0.
double point_iou(std::span<const int> pred, std::span<const int> gt);

/// Average precision at one IoU threshold. Predictions are matched greedily
/// in descending score (ties broken by content, so input order never
/// matters); each prediction takes the unmatched gt with the highest
/// IoU >= threshold. AP is the area under the all-points interpolated PR
/// curve. Zero gts: 1.0 with zero predictions, else 0.0.
double average_precision(std::vector<EvalPred> preds, const std::vector<std::vector<int>>& gts,
                         double iou_threshold);

struct ApSuite {
  double map = 0.0;   // mean AP over thresholds 0.50:0.05:0.95
  double ap50 = 0.0;
  double ap25 = 0.0;
  std::map<int, double> per_threshold;  // key = threshold in percent
};

ApSuite map_suite(const std::vector<EvalPred>& preds, const std::vector<std::vector<int>>& gts);

/// Ground-truth instance point sets (distinct nonnegative labels, ascending).
std::vector<std::vector<int>> gt_instances(const PointCloud& cloud);

/// Scored detections -> AP inputs; proposals gated to sc = -1 are dropped.
std::vector<EvalPred> predictions_from_instances(const InstanceSet& instances,
                                                 const std::vector<ScoredInstance>& scored);

struct EpisodeMetrics {
  double recognition_rate = 0.0;  // gt objects matched at IoU >= 0.5 by any scored proposal
  double grasp_rate = 0.0;        // gt objects with > 50% of their points removed
};

/// Episode metrics against the log's base cloud (which must carry gt
/// labels). Recognition compares each iteration's proposals with the gt
/// points still present at that iteration. Throws std::invalid_argument
/// when the cloud has no gt objects.
EpisodeMetrics episode_metrics(const EpisodeLog& log, const PointCloud& base_cloud);

/// Metrics report: internal-json plus a small plain-text table.
void save_ap_report(const std::filesystem::path& json_path, const ApSuite& suite);
std::string format_ap_table(const std::vector<std::pair<std::string, ApSuite>>& rows);

}  // namespace owg
