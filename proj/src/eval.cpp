// SPDX-License-Identifier: Apache-2.0

#include "owg/eval.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "owg/errors.hpp"

namespace owg {

double point_iou(std::span<const int> pred, std::span<const int> gt) {
  if (pred.empty() && gt.empty()) return 0.0;
  // Member lists are kept sorted throughout the pipeline.
  std::size_t i = 0, j = 0, inter = 0;
  while (i < pred.size() && j < gt.size()) {
    if (pred[i] < gt[j]) {
      ++i;
    } else if (gt[j] < pred[i]) {
      ++j;
    } else {
      ++inter;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = pred.size() + gt.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

bool canonical_pred_order(const EvalPred& a, const EvalPred& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.points.size() != b.points.size()) return a.points.size() > b.points.size();
  return a.points < b.points;  // content tie-break keeps order permutation-proof
}

}  // namespace

double average_precision(std::vector<EvalPred> preds, const std::vector<std::vector<int>>& gts,
                         double iou_threshold) {
  if (gts.empty()) return preds.empty() ? 1.0 : 0.0;
  if (preds.empty()) return 0.0;

  for (EvalPred& p : preds) std::sort(p.points.begin(), p.points.end());
  std::sort(preds.begin(), preds.end(), canonical_pred_order);

  const std::size_t n_gt = gts.size();
  std::vector<char> gt_taken(n_gt, 0);
  std::vector<char> is_tp(preds.size(), 0);
  for (std::size_t k = 0; k < preds.size(); ++k) {
    double best_iou = 0.0;
    int best_gt = -1;
    for (std::size_t g = 0; g < n_gt; ++g) {
      if (gt_taken[g]) continue;
      const double iou = point_iou(preds[k].points, gts[g]);
      if (iou >= iou_threshold && iou > best_iou) {
        best_iou = iou;
        best_gt = static_cast<int>(g);
      }
    }
    if (best_gt >= 0) {
      gt_taken[best_gt] = 1;
      is_tp[k] = 1;
    }
  }

  // All-points interpolation: integrate the running-max precision envelope
  // over the recall increments.
  std::vector<double> precision(preds.size());
  int tp = 0;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    tp += is_tp[k];
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  double envelope = 0.0;
  double ap = 0.0;
  for (std::size_t k = preds.size(); k-- > 0;) {
    envelope = std::max(envelope, precision[k]);
    if (is_tp[k]) ap += envelope / static_cast<double>(n_gt);
  }
  return ap;
}

ApSuite map_suite(const std::vector<EvalPred>& preds, const std::vector<std::vector<int>>& gts) {
  ApSuite suite;
  suite.ap25 = average_precision(preds, gts, 0.25);
  suite.per_threshold[25] = suite.ap25;
  double sum = 0.0;
  for (int t = 50; t <= 95; t += 5) {
    const double ap = average_precision(preds, gts, t / 100.0);
    suite.per_threshold[t] = ap;
    sum += ap;
  }
  suite.map = sum / 10.0;
  suite.ap50 = suite.per_threshold[50];
  return suite;
}

std::vector<std::vector<int>> gt_instances(const PointCloud& cloud) {
  std::vector<std::vector<int>> out;
  std::map<int, std::vector<int>> by_label;
  for (std::size_t i = 0; i < cloud.gt_instance.size(); ++i) {
    if (cloud.gt_instance[i] >= 0) by_label[cloud.gt_instance[i]].push_back(static_cast<int>(i));
  }
  out.reserve(by_label.size());
  for (auto& [label, points] : by_label) out.push_back(std::move(points));
  return out;
}

std::vector<EvalPred> predictions_from_instances(const InstanceSet& instances,
                                                 const std::vector<ScoredInstance>& scored) {
  std::vector<EvalPred> preds;
  for (const ScoredInstance& si : scored) {
    if (si.sc < 0.0) continue;  // gated proposals are declared false positives
    preds.push_back({instances.instances[si.instance_id], si.sc});
  }
  return preds;
}

EpisodeMetrics episode_metrics(const EpisodeLog& log, const PointCloud& base_cloud) {
  const std::vector<std::vector<int>> gts = gt_instances(base_cloud);
  if (gts.empty()) throw std::invalid_argument("episode_metrics: cloud has no gt objects");

  std::vector<char> removed(base_cloud.size(), 0);
  std::vector<char> recognized(gts.size(), 0);

  for (std::size_t iter = 0; iter < log.detections.size(); ++iter) {
    // gt sets still on the table at this iteration
    std::vector<std::vector<int>> remaining(gts.size());
    for (std::size_t g = 0; g < gts.size(); ++g) {
      for (int id : gts[g]) {
        if (!removed[id]) remaining[g].push_back(id);
      }
    }
    const IterationDetections& dets = log.detections[iter];
    for (std::size_t k = 0; k < dets.proposals.size(); ++k) {
      if (dets.scores[k] < 0.0) continue;
      for (std::size_t g = 0; g < gts.size(); ++g) {
        if (recognized[g]) continue;
        if (point_iou(dets.proposals[k], remaining[g]) >= 0.5) recognized[g] = 1;
      }
    }
    if (iter < log.grasps.size()) {
      const int grasped = log.grasps[iter].plan.instance_id;
      for (int id : log.detections[iter].proposals[grasped]) removed[id] = 1;
    }
  }

  int recognized_count = 0;
  for (char r : recognized) recognized_count += r;

  int removed_objects = 0;
  for (const auto& gt : gts) {
    std::size_t gone = 0;
    for (int id : gt) gone += removed[id];
    if (2 * gone > gt.size()) ++removed_objects;  // majority of the object left the table
  }

  EpisodeMetrics m;
  m.recognition_rate = static_cast<double>(recognized_count) / static_cast<double>(gts.size());
  m.grasp_rate = static_cast<double>(removed_objects) / static_cast<double>(gts.size());
  return m;
}

void save_ap_report(const std::filesystem::path& json_path, const ApSuite& suite) {
  std::ofstream out(json_path);
  if (!out) throw InputError("cannot write '" + json_path.string() + "'");
  nlohmann::json j;
  j["mAP"] = suite.map;
  j["AP50"] = suite.ap50;
  j["AP25"] = suite.ap25;
  nlohmann::json per;
  for (const auto& [t, ap] : suite.per_threshold) per["0." + std::to_string(t)] = ap;
  j["per_threshold"] = std::move(per);
  out << j.dump(2) << '\n';
}

std::string format_ap_table(const std::vector<std::pair<std::string, ApSuite>>& rows) {
  std::ostringstream os;
  os << "Method            mAP    AP_50  AP_25\n";
  os << "------------------------------------\n";
  for (const auto& [label, suite] : rows) {
    os << label;
    for (std::size_t pad = label.size(); pad < 18; ++pad) os << ' ';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-7.3f%-7.3f%-7.3f", suite.map, suite.ap50, suite.ap25);
    os << buf << '\n';
  }
  return os.str();
}

}  // namespace owg
