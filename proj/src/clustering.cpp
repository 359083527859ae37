// SPDX-License-Identifier: Apache-2.0

#include "owg/clustering.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "owg/errors.hpp"
#include "owg/spatial_index.hpp"

namespace owg {

namespace {

std::vector<Vec3> gather_positions(const PointCloud& cloud, const std::vector<int>& ids) {
  std::vector<Vec3> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(cloud.positions[id]);
  return out;
}

/// Connected components of the radius graph over the given points.
/// Components are emitted as global-id member lists in canonical instance
/// order: descending size, ties by smallest member id.
InstanceSet components_to_instances(const PointCloud& cloud, const std::vector<int>& ids,
                                    double r, std::size_t min_size) {
  InstanceSet out;
  out.assignment.assign(cloud.size(), -1);
  if (ids.empty()) return out;

  const SpatialIndex index(gather_positions(cloud, ids));
  std::vector<int> component(ids.size(), -1);
  std::vector<std::vector<int>> members;  // local sub-indices per component

  std::vector<int> stack;
  for (std::size_t seed = 0; seed < ids.size(); ++seed) {
    if (component[seed] >= 0) continue;
    const int comp_id = static_cast<int>(members.size());
    members.emplace_back();
    component[seed] = comp_id;
    stack.push_back(static_cast<int>(seed));
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      members[comp_id].push_back(cur);
      for (int nb : index.radius_neighbors(cur, r)) {
        if (component[nb] < 0) {
          component[nb] = comp_id;
          stack.push_back(nb);
        }
      }
    }
  }

  std::vector<int> order;
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() >= min_size) order.push_back(static_cast<int>(c));
    std::sort(members[c].begin(), members[c].end());
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
    return ids[members[a].front()] < ids[members[b].front()];
  });

  out.instances.reserve(order.size());
  for (int c : order) {
    std::vector<int> global;
    global.reserve(members[c].size());
    for (int local : members[c]) global.push_back(ids[local]);
    const int inst_id = static_cast<int>(out.instances.size());
    for (int gid : global) out.assignment[gid] = inst_id;
    out.instances.push_back(std::move(global));
  }
  return out;
}

}  // namespace

DensityField compute_density(const PointCloud& cloud, const ForegroundMask& mask, double r_d,
                             int threads) {
  if (r_d <= 0.0) throw std::invalid_argument("r_d must be positive");
  if (mask.size() != cloud.size()) throw std::invalid_argument("mask size does not match cloud");

  DensityField field;
  field.r_d = r_d;
  field.point_ids = mask.foreground_ids();
  if (field.point_ids.empty()) throw std::invalid_argument("no foreground points");

  const SpatialIndex index(gather_positions(cloud, field.point_ids));
  const std::size_t n = field.point_ids.size();
  field.density.assign(n, 0);

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      field.density[i] = static_cast<int>(index.radius_neighbors(static_cast<int>(i), r_d).size());
    }
  };

  if (threads <= 1 || n < 256) {
    worker(0, n);
  } else {
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin < end) pool.emplace_back(worker, begin, end);
    }
    for (auto& t : pool) t.join();
  }
  return field;
}

std::pair<std::vector<int>, std::vector<int>> split_by_density(const DensityField& field,
                                                               int d_theta) {
  std::vector<int> h_set, l_set;
  for (std::size_t i = 0; i < field.point_ids.size(); ++i) {
    if (field.density[i] > d_theta) {
      h_set.push_back(field.point_ids[i]);
    } else {
      l_set.push_back(field.point_ids[i]);
    }
  }
  return {std::move(h_set), std::move(l_set)};
}

InstanceSet group_high_density(const PointCloud& cloud, const std::vector<int>& h_set,
                               double r_group) {
  if (r_group <= 0.0) throw std::invalid_argument("r_group must be positive");
  return components_to_instances(cloud, h_set, r_group, 1);
}

InstanceSet vote_low_density(const PointCloud& cloud, const InstanceSet& instances,
                             const std::vector<int>& l_set, double r_vote) {
  if (r_vote <= 0.0) throw std::invalid_argument("r_vote must be positive");
  InstanceSet out = instances;
  if (l_set.empty() || instances.instances.empty()) return out;

  // Assigned points only; votes read the incoming assignment, never the
  // labels produced within this pass.
  std::vector<int> assigned_ids;
  for (std::size_t i = 0; i < instances.assignment.size(); ++i) {
    if (instances.assignment[i] >= 0) assigned_ids.push_back(static_cast<int>(i));
  }
  if (assigned_ids.empty()) return out;
  const SpatialIndex index(gather_positions(cloud, assigned_ids));

  for (int pid : l_set) {
    const std::vector<int> hits = index.radius_search(cloud.positions[pid], r_vote);
    if (hits.empty()) continue;

    std::map<int, int> votes;
    for (int local : hits) votes[instances.assignment[assigned_ids[local]]] += 1;
    int best = -1, best_votes = -1;
    bool tie = false;
    for (const auto& [inst, count] : votes) {
      if (count > best_votes) {
        best = inst;
        best_votes = count;
        tie = false;
      } else if (count == best_votes) {
        tie = true;
      }
    }
    if (tie) {
      // Tie: the instance owning the nearest assigned member wins.
      double best_dist = std::numeric_limits<double>::infinity();
      for (int local : hits) {
        const int inst = instances.assignment[assigned_ids[local]];
        if (votes[inst] != best_votes) continue;
        const double d = squared_distance(cloud.positions[pid], index.point(local));
        if (d < best_dist || (d == best_dist && inst < best)) {
          best_dist = d;
          best = inst;
        }
      }
    }
    out.assignment[pid] = best;
    out.instances[best].insert(
        std::lower_bound(out.instances[best].begin(), out.instances[best].end(), pid), pid);
  }
  return out;
}

InstanceSet cluster_distance_baseline(const PointCloud& cloud, const ForegroundMask& mask,
                                      double r_group, int min_pts) {
  if (r_group <= 0.0) throw std::invalid_argument("r_group must be positive");
  if (mask.size() != cloud.size()) throw std::invalid_argument("mask size does not match cloud");
  return components_to_instances(cloud, mask.foreground_ids(), r_group,
                                 static_cast<std::size_t>(std::max(min_pts, 1)));
}

void save_instances(const std::filesystem::path& path, const InstanceSet& instances) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  nlohmann::json j;
  j["assignments"] = instances.assignment;
  out << j.dump() << '\n';
}

InstanceSet load_instances(const std::filesystem::path& path, std::size_t n_expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  if (!j.contains("assignments") || !j["assignments"].is_array()) {
    throw InputError(path.string() + ": expected an 'assignments' array");
  }
  InstanceSet out;
  out.assignment = j["assignments"].get<std::vector<int>>();
  if (out.assignment.size() != n_expected) {
    throw InputError(path.string() + ": assignments length " +
                     std::to_string(out.assignment.size()) + " does not match cloud size " +
                     std::to_string(n_expected));
  }
  int max_id = -1;
  for (int a : out.assignment) max_id = std::max(max_id, a);
  out.instances.assign(max_id + 1, {});
  for (std::size_t i = 0; i < out.assignment.size(); ++i) {
    if (out.assignment[i] >= 0) out.instances[out.assignment[i]].push_back(static_cast<int>(i));
  }
  for (const auto& inst : out.instances) {
    if (inst.empty()) throw InputError(path.string() + ": instance ids are not dense");
  }
  return out;
}

}  // namespace owg
