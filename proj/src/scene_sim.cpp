// SPDX-License-Identifier: Apache-2.0

#include "owg/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "owg/errors.hpp"
#include "owg/rng.hpp"

namespace owg {

namespace {

constexpr double kCameraHeight = 0.7;  // overhead camera, meters above the table

// ---------------------------------------------------------------------------
// 2D footprints: every shape decomposes into rotated rectangles and circles.
// ---------------------------------------------------------------------------

struct Rect {  // center, half extents, yaw
  double cx, cy, hx, hy, yaw;
};

struct Circle {
  double cx, cy, r;
};

struct Footprint {
  std::vector<Rect> rects;
  std::vector<Circle> circles;
};

void to_local(const Rect& r, double x, double y, double& lx, double& ly) {
  const double c = std::cos(r.yaw), s = std::sin(r.yaw);
  const double dx = x - r.cx, dy = y - r.cy;
  lx = c * dx + s * dy;
  ly = -s * dx + c * dy;
}

bool rect_contains(const Rect& r, double x, double y) {
  double lx, ly;
  to_local(r, x, y, lx, ly);
  return std::abs(lx) <= r.hx && std::abs(ly) <= r.hy;
}

bool circle_contains(const Circle& c, double x, double y) {
  const double dx = x - c.cx, dy = y - c.cy;
  return dx * dx + dy * dy <= c.r * c.r;
}

bool footprint_contains(const Footprint& f, double x, double y) {
  for (const Rect& r : f.rects) {
    if (rect_contains(r, x, y)) return true;
  }
  for (const Circle& c : f.circles) {
    if (circle_contains(c, x, y)) return true;
  }
  return false;
}

std::vector<Vec3> rect_corners(const Rect& r) {
  const double c = std::cos(r.yaw), s = std::sin(r.yaw);
  std::vector<Vec3> out;
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      out.push_back({r.cx + c * sx * r.hx - s * sy * r.hy, r.cy + s * sx * r.hx + c * sy * r.hy, 0});
    }
  }
  return out;
}

// Separating-axis test for two rotated rectangles.
bool rects_overlap(const Rect& a, const Rect& b) {
  const auto ca = rect_corners(a);
  const auto cb = rect_corners(b);
  const double axes[4][2] = {{std::cos(a.yaw), std::sin(a.yaw)},
                             {-std::sin(a.yaw), std::cos(a.yaw)},
                             {std::cos(b.yaw), std::sin(b.yaw)},
                             {-std::sin(b.yaw), std::cos(b.yaw)}};
  for (const auto& axis : axes) {
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    for (const Vec3& p : ca) {
      const double v = p.x * axis[0] + p.y * axis[1];
      amin = std::min(amin, v);
      amax = std::max(amax, v);
    }
    for (const Vec3& p : cb) {
      const double v = p.x * axis[0] + p.y * axis[1];
      bmin = std::min(bmin, v);
      bmax = std::max(bmax, v);
    }
    if (amax < bmin || bmax < amin) return false;
  }
  return true;
}

bool circle_rect_overlap(const Circle& c, const Rect& r) {
  double lx, ly;
  to_local(r, c.cx, c.cy, lx, ly);
  const double qx = std::clamp(lx, -r.hx, r.hx);
  const double qy = std::clamp(ly, -r.hy, r.hy);
  const double dx = lx - qx, dy = ly - qy;
  return dx * dx + dy * dy <= c.r * c.r;
}

bool circles_overlap(const Circle& a, const Circle& b) {
  const double dx = a.cx - b.cx, dy = a.cy - b.cy;
  const double rr = a.r + b.r;
  return dx * dx + dy * dy <= rr * rr;
}

bool footprints_overlap(const Footprint& a, const Footprint& b) {
  for (const Rect& ra : a.rects) {
    for (const Rect& rb : b.rects) {
      if (rects_overlap(ra, rb)) return true;
    }
    for (const Circle& cb : b.circles) {
      if (circle_rect_overlap(cb, ra)) return true;
    }
  }
  for (const Circle& ca : a.circles) {
    for (const Rect& rb : b.rects) {
      if (circle_rect_overlap(ca, rb)) return true;
    }
    for (const Circle& cb : b.circles) {
      if (circles_overlap(ca, cb)) return true;
    }
  }
  return false;
}

bool rect_inside_rect(const Rect& inner, const Rect& outer) {
  for (const Vec3& p : rect_corners(inner)) {
    if (!rect_contains(outer, p.x, p.y)) return false;
  }
  return true;
}

bool circle_inside_rect(const Circle& c, const Rect& r) {
  double lx, ly;
  to_local(r, c.cx, c.cy, lx, ly);
  return std::abs(lx) + c.r <= r.hx + 1e-12 && std::abs(ly) + c.r <= r.hy + 1e-12;
}

bool rect_inside_circle(const Rect& r, const Circle& c) {
  for (const Vec3& p : rect_corners(r)) {
    const double dx = p.x - c.cx, dy = p.y - c.cy;
    if (dx * dx + dy * dy > c.r * c.r) return false;
  }
  return true;
}

/// Containment is checked against each support primitive separately; that is
/// conservative for L-blocks (a child cannot straddle the two arms).
bool footprint_inside(const Footprint& inner, const Footprint& outer) {
  auto rect_ok = [&](const Rect& r) {
    for (const Rect& orc : outer.rects) {
      if (rect_inside_rect(r, orc)) return true;
    }
    for (const Circle& oc : outer.circles) {
      if (rect_inside_circle(r, oc)) return true;
    }
    return false;
  };
  auto circle_ok = [&](const Circle& c) {
    for (const Rect& orc : outer.rects) {
      if (circle_inside_rect(c, orc)) return true;
    }
    for (const Circle& oc : outer.circles) {
      const double dx = c.cx - oc.cx, dy = c.cy - oc.cy;
      if (std::sqrt(dx * dx + dy * dy) + c.r <= oc.r + 1e-12) return true;
    }
    return false;
  };
  for (const Rect& r : inner.rects) {
    if (!rect_ok(r)) return false;
  }
  for (const Circle& c : inner.circles) {
    if (!circle_ok(c)) return false;
  }
  return true;
}

Footprint object_footprint(const ObjectSpec& obj) {
  Footprint f;
  switch (obj.shape) {
    case ShapeKind::Box:
      f.rects.push_back({obj.x, obj.y, obj.dims.x / 2, obj.dims.y / 2, obj.yaw});
      break;
    case ShapeKind::Cylinder:
    case ShapeKind::Sphere:
      f.circles.push_back({obj.x, obj.y, obj.dims.x});
      break;
    case ShapeKind::LBlock: {
      // Two arms anchored in the shape's bounding box: the full-length x arm
      // along the lower edge and the full-length y arm along the left edge.
      const double hx = obj.dims.x / 2, hy = obj.dims.y / 2;
      const double c = std::cos(obj.yaw), s = std::sin(obj.yaw);
      auto arm = [&](double lcx, double lcy, double ahx, double ahy) {
        f.rects.push_back(
            {obj.x + c * lcx - s * lcy, obj.y + s * lcx + c * lcy, ahx, ahy, obj.yaw});
      };
      arm(0.0, -hy / 2, hx, hy / 2);   // x arm
      arm(-hx / 2, 0.0, hx / 2, hy);   // y arm
      break;
    }
  }
  return f;
}

double object_height(const ObjectSpec& obj) {
  switch (obj.shape) {
    case ShapeKind::Box:
    case ShapeKind::LBlock:
      return obj.dims.z;
    case ShapeKind::Cylinder:
      return obj.dims.y;
    case ShapeKind::Sphere:
      return 2.0 * obj.dims.x;
  }
  return 0.0;
}

struct ResolvedObject {
  Footprint footprint;
  double base_z = 0.0;
  double top_z = 0.0;
  const ObjectSpec* spec = nullptr;
};

/// Top-surface height at (x, y), assuming the point is inside the footprint.
double surface_height(const ResolvedObject& obj, double x, double y) {
  if (obj.spec->shape == ShapeKind::Sphere) {
    const double r = obj.spec->dims.x;
    const double dx = x - obj.spec->x, dy = y - obj.spec->y;
    const double d2 = dx * dx + dy * dy;
    return obj.base_z + r + std::sqrt(std::max(0.0, r * r - d2));
  }
  return obj.top_z;
}

std::map<std::string, int> name_index(const SceneSpec& spec) {
  std::map<std::string, int> byname;
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const std::string& name = spec.objects[i].name;
    if (name.empty()) throw InputError("object " + std::to_string(i) + " has no name");
    if (!byname.emplace(name, static_cast<int>(i)).second) {
      throw InputError("duplicate object name '" + name + "'");
    }
  }
  return byname;
}

std::vector<ResolvedObject> resolve_objects(const SceneSpec& spec) {
  const auto byname = name_index(spec);
  const std::size_t n = spec.objects.size();
  std::vector<ResolvedObject> resolved(n);
  std::vector<int> state(n, 0);  // 0 unvisited, 1 in progress, 2 done

  auto resolve = [&](auto&& self, int i) -> void {
    if (state[i] == 2) return;
    if (state[i] == 1) throw InputError("stacking cycle involving '" + spec.objects[i].name + "'");
    state[i] = 1;
    const ObjectSpec& obj = spec.objects[i];
    double base = 0.0;
    if (!obj.stack_on.empty()) {
      const auto it = byname.find(obj.stack_on);
      if (it == byname.end()) {
        throw InputError("object '" + obj.name + "' stacks on unknown '" + obj.stack_on + "'");
      }
      const int support = it->second;
      if (spec.objects[support].shape == ShapeKind::Sphere) {
        throw InputError("object '" + obj.name + "' cannot rest on a sphere");
      }
      self(self, support);
      base = resolved[support].top_z;
    }
    resolved[i].spec = &obj;
    resolved[i].footprint = object_footprint(obj);
    resolved[i].base_z = base;
    resolved[i].top_z = base + object_height(obj);
    state[i] = 2;
  };
  for (std::size_t i = 0; i < n; ++i) resolve(resolve, static_cast<int>(i));
  return resolved;
}

bool is_ancestor(const SceneSpec& spec, const std::map<std::string, int>& byname, int node,
                 int candidate) {
  int cur = node;
  for (std::size_t hops = 0; hops <= spec.objects.size(); ++hops) {
    const std::string& up = spec.objects[cur].stack_on;
    if (up.empty()) return false;
    cur = byname.at(up);
    if (cur == candidate) return true;
  }
  return false;
}

Vec3 object_color(int index) {
  // Golden-angle hue walk, full saturation; only for visualization.
  const double h = std::fmod(0.12 + index * 0.381966, 1.0) * 6.0;
  const double f = h - std::floor(h);
  const double q = 1.0 - 0.8 * f;
  const double t = 1.0 - 0.8 * (1.0 - f);
  switch (static_cast<int>(h) % 6) {
    case 0: return {1.0, t, 0.2};
    case 1: return {q, 1.0, 0.2};
    case 2: return {0.2, 1.0, t};
    case 3: return {0.2, q, 1.0};
    case 4: return {t, 0.2, 1.0};
    default: return {1.0, 0.2, q};
  }
}

}  // namespace

void DeviceProfile::validate() const {
  if (points_per_m2 <= 0) throw InputError("points_per_m2 must be positive");
  if (depth_noise_frac < 0) throw InputError("depth_noise_frac must be >= 0");
  if (dropout_frac < 0 || dropout_frac >= 1) throw InputError("dropout_frac must be in [0,1)");
}

DeviceProfile DeviceProfile::builtin(const std::string& name) {
  if (name == "ainstec") return {"ainstec", 400000.0, 0.001, 0.02, 0.0};
  if (name == "d455") return {"d455", 100000.0, 0.02, 0.02, 0.003};
  throw std::invalid_argument("unknown device profile '" + name + "'");
}

DeviceProfile DeviceProfile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  DeviceProfile p;
  p.name = j.value("name", std::string("custom"));
  if (j.contains("points_per_m2")) j.at("points_per_m2").get_to(p.points_per_m2);
  if (j.contains("depth_noise_frac")) j.at("depth_noise_frac").get_to(p.depth_noise_frac);
  if (j.contains("dropout_frac")) j.at("dropout_frac").get_to(p.dropout_frac);
  if (j.contains("z_offset")) j.at("z_offset").get_to(p.z_offset);
  p.validate();
  return p;
}

void SceneSpec::validate() const {
  if (table_x <= 0 || table_y <= 0) throw InputError("table extent must be positive");
  for (const ObjectSpec& obj : objects) {
    const bool dims_ok = obj.shape == ShapeKind::Sphere
                             ? obj.dims.x > 0
                             : (obj.shape == ShapeKind::Cylinder ? obj.dims.x > 0 && obj.dims.y > 0
                                                                 : obj.dims.x > 0 && obj.dims.y > 0 &&
                                                                       obj.dims.z > 0);
    if (!dims_ok) throw InputError("object '" + obj.name + "' has non-positive dimensions");
  }

  const auto byname = name_index(*this);
  const auto resolved = resolve_objects(*this);

  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (!objects[i].stack_on.empty()) {
      const int support = byname.at(objects[i].stack_on);
      if (!footprint_inside(resolved[i].footprint, resolved[support].footprint)) {
        throw InputError("object '" + objects[i].name + "' is not contained by its support '" +
                         objects[i].stack_on + "'");
      }
    }
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = i + 1; j < objects.size(); ++j) {
      const int a = static_cast<int>(i), b = static_cast<int>(j);
      if (is_ancestor(*this, byname, a, b) || is_ancestor(*this, byname, b, a)) continue;
      if (footprints_overlap(resolved[i].footprint, resolved[j].footprint)) {
        throw InputError("objects '" + objects[i].name + "' and '" + objects[j].name +
                         "' overlap without a stack relation");
      }
    }
  }
}

PointCloud generate_scene(const SceneSpec& spec, const DeviceProfile& profile) {
  profile.validate();
  spec.validate();
  const auto resolved = resolve_objects(spec);

  Rng rng(spec.seed);
  const double hx = spec.table_x / 2, hy = spec.table_y / 2;
  const auto n_samples =
      static_cast<std::size_t>(std::llround(profile.points_per_m2 * spec.table_x * spec.table_y));

  PointCloud cloud;
  cloud.positions.reserve(n_samples);
  cloud.colors.reserve(n_samples);
  cloud.gt_instance.reserve(n_samples);
  cloud.gt_semantic.reserve(n_samples);

  const Vec3 table_color{0.45, 0.42, 0.40};
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double x = rng.uniform(-hx, hx);
    const double y = rng.uniform(-hy, hy);

    // Exact top-down z-buffer: the sample lands on the topmost surface.
    double z = 0.0;
    int owner = -1;
    for (std::size_t k = 0; k < resolved.size(); ++k) {
      if (!footprint_contains(resolved[k].footprint, x, y)) continue;
      const double h = surface_height(resolved[k], x, y);
      if (h > z) {
        z = h;
        owner = static_cast<int>(k);
      }
    }

    const bool dropped = rng.uniform() < profile.dropout_frac;
    const double depth = kCameraHeight - z;
    const double noise = rng.normal(0.0, profile.depth_noise_frac * depth);
    if (dropped) continue;

    cloud.positions.push_back({x, y, z + noise + profile.z_offset});
    cloud.colors.push_back(owner < 0 ? table_color : object_color(owner));
    cloud.gt_instance.push_back(owner);
    cloud.gt_semantic.push_back(owner < 0 ? 1 : 2);
  }
  return cloud;
}

// ---------------------------------------------------------------------------
// Scene spec serialization
// ---------------------------------------------------------------------------

namespace {

std::string shape_to_string(ShapeKind s) {
  switch (s) {
    case ShapeKind::Box: return "box";
    case ShapeKind::Cylinder: return "cylinder";
    case ShapeKind::Sphere: return "sphere";
    case ShapeKind::LBlock: return "l-block";
  }
  return "box";
}

ShapeKind shape_from_string(const std::string& s) {
  if (s == "box") return ShapeKind::Box;
  if (s == "cylinder") return ShapeKind::Cylinder;
  if (s == "sphere") return ShapeKind::Sphere;
  if (s == "l-block") return ShapeKind::LBlock;
  throw InputError("unknown shape '" + s + "'");
}

}  // namespace

SceneSpec SceneSpec::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scene spec '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  SceneSpec spec;
  try {
    if (j.contains("seed")) j.at("seed").get_to(spec.seed);
    if (j.contains("table_extent")) {
      spec.table_x = j.at("table_extent").at(0).get<double>();
      spec.table_y = j.at("table_extent").at(1).get<double>();
    }
    for (const auto& jo : j.value("objects", nlohmann::json::array())) {
      ObjectSpec obj;
      obj.name = jo.value("name", "");
      obj.shape = shape_from_string(jo.value("shape", "box"));
      if (jo.contains("dims")) {
        const auto& d = jo.at("dims");
        obj.dims = {d.at(0).get<double>(), d.size() > 1 ? d.at(1).get<double>() : 0.0,
                    d.size() > 2 ? d.at(2).get<double>() : 0.0};
      }
      if (jo.contains("pose")) {
        const auto& p = jo.at("pose");
        obj.x = p.at(0).get<double>();
        obj.y = p.at(1).get<double>();
        obj.yaw = p.size() > 2 ? p.at(2).get<double>() : 0.0;
      }
      if (jo.contains("stack_on") && !jo.at("stack_on").is_null()) {
        obj.stack_on = jo.at("stack_on").get<std::string>();
      }
      spec.objects.push_back(std::move(obj));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  try {
    spec.validate();
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return spec;
}

void SceneSpec::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  nlohmann::json j;
  j["seed"] = seed;
  j["table_extent"] = {table_x, table_y};
  nlohmann::json objs = nlohmann::json::array();
  for (const ObjectSpec& obj : objects) {
    nlohmann::json jo;
    jo["name"] = obj.name;
    jo["shape"] = shape_to_string(obj.shape);
    jo["dims"] = {obj.dims.x, obj.dims.y, obj.dims.z};
    jo["pose"] = {obj.x, obj.y, obj.yaw};
    jo["stack_on"] = obj.stack_on.empty() ? nlohmann::json(nullptr) : nlohmann::json(obj.stack_on);
    objs.push_back(std::move(jo));
  }
  j["objects"] = std::move(objs);
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Scenario presets
// ---------------------------------------------------------------------------

namespace {

/// Shuffled 3x3 grid of slot centers on a 0.6 m table; slots are far enough
/// apart that any footprint up to ~0.1 m plus jitter cannot collide.
std::vector<std::pair<double, double>> shuffled_slots(Rng& rng) {
  std::vector<std::pair<double, double>> slots;
  for (double sx : {-0.19, 0.0, 0.19}) {
    for (double sy : {-0.19, 0.0, 0.19}) {
      slots.emplace_back(sx, sy);
    }
  }
  for (std::size_t i = slots.size(); i > 1; --i) {
    std::swap(slots[i - 1], slots[rng.uniform_int(0, static_cast<int>(i) - 1)]);
  }
  return slots;
}

ObjectSpec place(Rng& rng, const std::pair<double, double>& slot, ObjectSpec obj) {
  obj.x = slot.first + rng.uniform(-0.012, 0.012);
  obj.y = slot.second + rng.uniform(-0.012, 0.012);
  obj.yaw = rng.uniform(0.0, M_PI);
  return obj;
}

ObjectSpec random_box(Rng& rng, const std::string& name) {
  ObjectSpec obj;
  obj.name = name;
  obj.shape = ShapeKind::Box;
  obj.dims = {rng.uniform(0.05, 0.075), rng.uniform(0.05, 0.075), rng.uniform(0.05, 0.07)};
  return obj;
}

ObjectSpec random_shape(Rng& rng, const std::string& name, int kind) {
  ObjectSpec obj;
  obj.name = name;
  switch (kind % 4) {
    case 0:
      return random_box(rng, name);
    case 1:
      obj.shape = ShapeKind::Cylinder;
      obj.dims = {rng.uniform(0.028, 0.035), rng.uniform(0.05, 0.08), 0.0};
      break;
    case 2:
      obj.shape = ShapeKind::Sphere;
      obj.dims = {rng.uniform(0.03, 0.038), 0.0, 0.0};
      break;
    default:
      obj.shape = ShapeKind::LBlock;
      obj.dims = {rng.uniform(0.07, 0.09), rng.uniform(0.07, 0.09), rng.uniform(0.05, 0.06)};
      break;
  }
  return obj;
}

/// A smaller block resting centered on `support` (kept concentric so the
/// containment check holds for any support yaw).
ObjectSpec stacked_child(Rng& rng, const std::string& name, const ObjectSpec& support, int kind) {
  ObjectSpec obj;
  obj.name = name;
  obj.stack_on = support.name;
  obj.x = support.x;
  obj.y = support.y;
  obj.yaw = support.yaw;
  const double cap = std::min(support.dims.x, support.dims.y);
  if (kind % 2 == 0) {
    obj.shape = ShapeKind::Box;
    const double side = std::max(0.045, cap * 0.6);
    obj.dims = {side, side, rng.uniform(0.05, 0.06)};
  } else {
    obj.shape = ShapeKind::Cylinder;
    obj.dims = {std::max(0.026, cap * 0.3), rng.uniform(0.05, 0.07), 0.0};
  }
  return obj;
}

}  // namespace

SceneSpec scenario_preset(const std::string& name, std::uint64_t seed) {
  int scenario = 0;
  if (name == "scenario1") scenario = 1;
  else if (name == "scenario2") scenario = 2;
  else if (name == "scenario3") scenario = 3;
  else if (name == "scenario4") scenario = 4;
  else if (name == "scenario5") scenario = 5;
  else throw std::invalid_argument("unknown scenario preset '" + name + "'");

  SceneSpec spec;
  spec.seed = seed;
  spec.table_x = 0.6;
  spec.table_y = 0.6;
  Rng rng(seed * 6364136223846793005ULL + static_cast<std::uint64_t>(scenario));
  const auto slots = shuffled_slots(rng);

  switch (scenario) {
    case 1:
      // Unstacked boxes only.
      for (int i = 0; i < 5; ++i) {
        spec.objects.push_back(place(rng, slots[i], random_box(rng, "box" + std::to_string(i))));
      }
      break;
    case 2: {
      // Building blocks in random stacks: three bases, each carrying one block.
      for (int i = 0; i < 3; ++i) {
        ObjectSpec base;
        base.name = "base" + std::to_string(i);
        base.shape = ShapeKind::Box;
        base.dims = {rng.uniform(0.085, 0.1), rng.uniform(0.085, 0.1), rng.uniform(0.05, 0.06)};
        base = place(rng, slots[i], std::move(base));
        spec.objects.push_back(base);
        spec.objects.push_back(stacked_child(rng, "block" + std::to_string(i), base, i));
      }
      break;
    }
    case 3:
      // Everyday-object mix, unstacked.
      for (int i = 0; i < 5; ++i) {
        spec.objects.push_back(
            place(rng, slots[i], random_shape(rng, "item" + std::to_string(i), i)));
      }
      break;
    case 4:
      // Larger variety, unstacked.
      for (int i = 0; i < 7; ++i) {
        spec.objects.push_back(
            place(rng, slots[i], random_shape(rng, "item" + std::to_string(i), i + 1)));
      }
      break;
    case 5: {
      // Stacked difficulty: two stacks plus two loose objects.
      for (int i = 0; i < 2; ++i) {
        ObjectSpec base;
        base.name = "base" + std::to_string(i);
        base.shape = ShapeKind::Box;
        base.dims = {rng.uniform(0.09, 0.1), rng.uniform(0.09, 0.1), rng.uniform(0.05, 0.06)};
        base = place(rng, slots[i], std::move(base));
        spec.objects.push_back(base);
        spec.objects.push_back(stacked_child(rng, "top" + std::to_string(i), base, i));
      }
      for (int i = 0; i < 2; ++i) {
        spec.objects.push_back(
            place(rng, slots[2 + i], random_shape(rng, "loose" + std::to_string(i), i)));
      }
      break;
    }
  }
  spec.validate();
  return spec;
}

}  // namespace owg
