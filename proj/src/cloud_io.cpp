// SPDX-License-Identifier: Apache-2.0

#include "owg/cloud_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "owg/errors.hpp"

namespace owg {

namespace {

using nlohmann::json;

std::string fmt_float(float v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
  return buf;
}

std::uint8_t color_to_byte(double c) {
  const long v = std::lround(c * 255.0);
  return static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
}

// ---------------------------------------------------------------------------
// PLY
// ---------------------------------------------------------------------------

enum class PlyType { Float32, Float64, Uint8, Int8, Uint16, Int16, Uint32, Int32 };

std::size_t ply_type_size(PlyType t) {
  switch (t) {
    case PlyType::Float64:
      return 8;
    case PlyType::Float32:
    case PlyType::Uint32:
    case PlyType::Int32:
      return 4;
    case PlyType::Uint16:
    case PlyType::Int16:
      return 2;
    default:
      return 1;
  }
}

bool parse_ply_type(const std::string& token, PlyType& out) {
  if (token == "float" || token == "float32") out = PlyType::Float32;
  else if (token == "double" || token == "float64") out = PlyType::Float64;
  else if (token == "uchar" || token == "uint8") out = PlyType::Uint8;
  else if (token == "char" || token == "int8") out = PlyType::Int8;
  else if (token == "ushort" || token == "uint16") out = PlyType::Uint16;
  else if (token == "short" || token == "int16") out = PlyType::Int16;
  else if (token == "uint" || token == "uint32") out = PlyType::Uint32;
  else if (token == "int" || token == "int32") out = PlyType::Int32;
  else return false;
  return true;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::Float32;
};

struct PlyHeader {
  bool ascii = true;
  std::size_t vertex_count = 0;
  std::vector<PlyProperty> properties;
  std::size_t header_bytes = 0;  // offset of the first data byte
  int header_lines = 0;
};

[[noreturn]] void header_error(int line, const std::string& what) {
  throw InputError("ply header line " + std::to_string(line) + ": " + what);
}

PlyHeader parse_ply_header(std::istream& in, CloudFormat expected) {
  PlyHeader header;
  std::string line;
  int line_no = 0;
  bool saw_format = false;
  bool in_vertex_element = false;
  bool saw_vertex_element = false;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++line_no;
    header.header_bytes += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != "ply") header_error(line_no, "missing 'ply' magic");

  while (next_line()) {
    std::istringstream ss(line);
    std::string keyword;
    ss >> keyword;
    if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) continue;
    if (keyword == "format") {
      std::string fmt, version;
      ss >> fmt >> version;
      if (fmt == "ascii") {
        header.ascii = true;
      } else if (fmt == "binary_little_endian") {
        header.ascii = false;
      } else {
        header_error(line_no, "unsupported format '" + fmt + "'");
      }
      const bool want_ascii = expected == CloudFormat::PlyAscii;
      if (header.ascii != want_ascii) {
        header_error(line_no, "file format does not match the declared loader format");
      }
      saw_format = true;
    } else if (keyword == "element") {
      std::string name;
      std::size_t count = 0;
      ss >> name >> count;
      if (name != "vertex") header_error(line_no, "unsupported element '" + name + "'");
      if (saw_vertex_element) header_error(line_no, "duplicate vertex element");
      header.vertex_count = count;
      in_vertex_element = true;
      saw_vertex_element = true;
    } else if (keyword == "property") {
      if (!in_vertex_element) header_error(line_no, "property outside vertex element");
      std::string type_token, name;
      ss >> type_token >> name;
      if (type_token == "list") header_error(line_no, "list properties are not supported");
      PlyType type;
      if (!parse_ply_type(type_token, type)) {
        header_error(line_no, "unknown property type '" + type_token + "'");
      }
      header.properties.push_back({name, type});
    } else if (keyword == "end_header") {
      header.header_lines = line_no;
      if (!saw_format) header_error(line_no, "missing format line");
      if (!saw_vertex_element) header_error(line_no, "missing vertex element");
      return header;
    } else {
      header_error(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  header_error(line_no, "unexpected end of header");
}

struct PropertySlots {
  // Index of each known property within the header's property list, -1 if absent.
  int x = -1, y = -1, z = -1;
  int red = -1, green = -1, blue = -1;
  int nx = -1, ny = -1, nz = -1;
  int gt_instance = -1, gt_semantic = -1;
};

PropertySlots resolve_slots(const PlyHeader& header) {
  PropertySlots s;
  auto bind = [&](const char* name, PlyType want, int& slot, int index, PlyType got) {
    if (slot >= 0) throw InputError(std::string("duplicate ply property '") + name + "'");
    if (got != want) throw InputError(std::string("ply property '") + name + "' has unexpected type");
    slot = index;
  };
  for (std::size_t i = 0; i < header.properties.size(); ++i) {
    const auto& [name, type] = header.properties[i];
    const int idx = static_cast<int>(i);
    if (name == "x") bind("x", PlyType::Float32, s.x, idx, type);
    else if (name == "y") bind("y", PlyType::Float32, s.y, idx, type);
    else if (name == "z") bind("z", PlyType::Float32, s.z, idx, type);
    else if (name == "red") bind("red", PlyType::Uint8, s.red, idx, type);
    else if (name == "green") bind("green", PlyType::Uint8, s.green, idx, type);
    else if (name == "blue") bind("blue", PlyType::Uint8, s.blue, idx, type);
    else if (name == "nx") bind("nx", PlyType::Float32, s.nx, idx, type);
    else if (name == "ny") bind("ny", PlyType::Float32, s.ny, idx, type);
    else if (name == "nz") bind("nz", PlyType::Float32, s.nz, idx, type);
    else if (name == "gt_instance") bind("gt_instance", PlyType::Int32, s.gt_instance, idx, type);
    else if (name == "gt_semantic") bind("gt_semantic", PlyType::Int32, s.gt_semantic, idx, type);
    // anything else: skipped
  }
  if (s.x < 0 || s.y < 0 || s.z < 0) throw InputError("ply vertex element lacks float x/y/z");
  const int colors = (s.red >= 0) + (s.green >= 0) + (s.blue >= 0);
  if (colors != 0 && colors != 3) throw InputError("ply color properties are incomplete");
  const int normals = (s.nx >= 0) + (s.ny >= 0) + (s.nz >= 0);
  if (normals != 0 && normals != 3) throw InputError("ply normal properties are incomplete");
  return s;
}

PointCloud read_ply(std::istream& in, CloudFormat expected) {
  const PlyHeader header = parse_ply_header(in, expected);
  const PropertySlots slots = resolve_slots(header);
  const std::size_t n = header.vertex_count;

  PointCloud cloud;
  cloud.positions.reserve(n);
  const bool want_colors = slots.red >= 0;
  const bool want_normals = slots.nx >= 0;
  if (want_colors) cloud.colors.reserve(n);
  if (want_normals) cloud.normals.reserve(n);
  if (slots.gt_instance >= 0) cloud.gt_instance.reserve(n);
  if (slots.gt_semantic >= 0) cloud.gt_semantic.reserve(n);

  const std::size_t n_props = header.properties.size();
  std::vector<double> row(n_props, 0.0);

  auto finish_vertex = [&](const std::string& where) {
    const Vec3 p{row[slots.x], row[slots.y], row[slots.z]};
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw InputError("non-finite coordinate at " + where);
    }
    cloud.positions.push_back(p);
    if (want_colors) {
      cloud.colors.push_back(
          {row[slots.red] / 255.0, row[slots.green] / 255.0, row[slots.blue] / 255.0});
    }
    if (want_normals) cloud.normals.push_back({row[slots.nx], row[slots.ny], row[slots.nz]});
    if (slots.gt_instance >= 0) cloud.gt_instance.push_back(static_cast<int>(row[slots.gt_instance]));
    if (slots.gt_semantic >= 0) cloud.gt_semantic.push_back(static_cast<int>(row[slots.gt_semantic]));
  };

  if (header.ascii) {
    std::string line;
    int line_no = header.header_lines;
    for (std::size_t v = 0; v < n; ++v) {
      if (!std::getline(in, line)) {
        throw InputError("ply data ends at line " + std::to_string(line_no) + ": expected " +
                         std::to_string(n) + " vertices, got " + std::to_string(v));
      }
      ++line_no;
      std::istringstream ss(line);
      for (std::size_t c = 0; c < n_props; ++c) {
        if (!(ss >> row[c])) {
          throw InputError("ply line " + std::to_string(line_no) + ": expected " +
                           std::to_string(n_props) + " values, got " + std::to_string(c));
        }
      }
      finish_vertex("line " + std::to_string(line_no));
    }
  } else {
    std::size_t stride = 0;
    for (const auto& prop : header.properties) stride += ply_type_size(prop.type);
    std::vector<char> buf(stride);
    for (std::size_t v = 0; v < n; ++v) {
      const std::size_t offset = header.header_bytes + v * stride;
      if (!in.read(buf.data(), static_cast<std::streamsize>(stride))) {
        throw InputError("ply data truncated at byte offset " + std::to_string(offset));
      }
      const char* ptr = buf.data();
      for (std::size_t c = 0; c < n_props; ++c) {
        const PlyType type = header.properties[c].type;
        switch (type) {
          case PlyType::Float32: {
            float f;
            std::memcpy(&f, ptr, 4);
            row[c] = f;
            break;
          }
          case PlyType::Float64: {
            double d;
            std::memcpy(&d, ptr, 8);
            row[c] = d;
            break;
          }
          case PlyType::Uint8:
            row[c] = static_cast<double>(*reinterpret_cast<const std::uint8_t*>(ptr));
            break;
          case PlyType::Int8:
            row[c] = static_cast<double>(*reinterpret_cast<const std::int8_t*>(ptr));
            break;
          case PlyType::Uint16: {
            std::uint16_t u;
            std::memcpy(&u, ptr, 2);
            row[c] = u;
            break;
          }
          case PlyType::Int16: {
            std::int16_t s16;
            std::memcpy(&s16, ptr, 2);
            row[c] = s16;
            break;
          }
          case PlyType::Uint32: {
            std::uint32_t u;
            std::memcpy(&u, ptr, 4);
            row[c] = u;
            break;
          }
          case PlyType::Int32: {
            std::int32_t s32;
            std::memcpy(&s32, ptr, 4);
            row[c] = s32;
            break;
          }
        }
        ptr += ply_type_size(type);
      }
      finish_vertex("byte offset " + std::to_string(offset));
    }
  }
  return cloud;
}

void write_ply(std::ostream& out, const PointCloud& cloud, bool ascii) {
  out << "ply\n";
  out << (ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n");
  out << "element vertex " << cloud.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_colors()) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (cloud.has_normals()) out << "property float nx\nproperty float ny\nproperty float nz\n";
  if (cloud.has_gt_instance()) out << "property int gt_instance\n";
  if (cloud.has_gt_semantic()) out << "property int gt_semantic\n";
  out << "end_header\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    if (ascii) {
      out << fmt_float(static_cast<float>(p.x)) << ' ' << fmt_float(static_cast<float>(p.y)) << ' '
          << fmt_float(static_cast<float>(p.z));
      if (cloud.has_colors()) {
        const Vec3& c = cloud.colors[i];
        out << ' ' << int(color_to_byte(c.x)) << ' ' << int(color_to_byte(c.y)) << ' '
            << int(color_to_byte(c.z));
      }
      if (cloud.has_normals()) {
        const Vec3& nl = cloud.normals[i];
        out << ' ' << fmt_float(static_cast<float>(nl.x)) << ' '
            << fmt_float(static_cast<float>(nl.y)) << ' ' << fmt_float(static_cast<float>(nl.z));
      }
      if (cloud.has_gt_instance()) out << ' ' << cloud.gt_instance[i];
      if (cloud.has_gt_semantic()) out << ' ' << cloud.gt_semantic[i];
      out << '\n';
    } else {
      auto put_f32 = [&](double v) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), 4);
      };
      put_f32(p.x);
      put_f32(p.y);
      put_f32(p.z);
      if (cloud.has_colors()) {
        const Vec3& c = cloud.colors[i];
        const std::uint8_t rgb[3] = {color_to_byte(c.x), color_to_byte(c.y), color_to_byte(c.z)};
        out.write(reinterpret_cast<const char*>(rgb), 3);
      }
      if (cloud.has_normals()) {
        const Vec3& nl = cloud.normals[i];
        put_f32(nl.x);
        put_f32(nl.y);
        put_f32(nl.z);
      }
      if (cloud.has_gt_instance()) {
        const std::int32_t v = cloud.gt_instance[i];
        out.write(reinterpret_cast<const char*>(&v), 4);
      }
      if (cloud.has_gt_semantic()) {
        const std::int32_t v = cloud.gt_semantic[i];
        out.write(reinterpret_cast<const char*>(&v), 4);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// internal-json
// ---------------------------------------------------------------------------

std::vector<Vec3> json_vec3_array(const json& j, const char* key, std::size_t expect) {
  std::vector<Vec3> out;
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw InputError(std::string("json key '") + key + "' must be an array");
  out.reserve(it->size());
  for (const auto& row : *it) {
    if (!row.is_array() || row.size() != 3) {
      throw InputError(std::string("json key '") + key + "' entry " + std::to_string(out.size()) +
                       " is not a 3-vector");
    }
    out.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  if (expect != 0 && !out.empty() && out.size() != expect) {
    throw InputError(std::string("json key '") + key + "' has " + std::to_string(out.size()) +
                     " entries, expected " + std::to_string(expect));
  }
  return out;
}

std::vector<int> json_int_array(const json& j, const char* key, std::size_t expect) {
  std::vector<int> out;
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return out;
  if (!it->is_array()) throw InputError(std::string("json key '") + key + "' must be an array");
  out.reserve(it->size());
  for (const auto& v : *it) out.push_back(v.get<int>());
  if (!out.empty() && out.size() != expect) {
    throw InputError(std::string("json key '") + key + "' has " + std::to_string(out.size()) +
                     " entries, expected " + std::to_string(expect));
  }
  return out;
}

PointCloud read_json_cloud(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("json parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("positions")) {
    throw InputError("internal-json cloud must be an object with a 'positions' key");
  }
  PointCloud cloud;
  cloud.positions = json_vec3_array(j, "positions", 0);
  const std::size_t n = cloud.positions.size();
  cloud.colors = json_vec3_array(j, "colors", n);
  cloud.normals = json_vec3_array(j, "normals", n);
  cloud.gt_instance = json_int_array(j, "gt_instance", n);
  cloud.gt_semantic = json_int_array(j, "gt_semantic", n);
  return cloud;
}

void write_json_cloud(std::ostream& out, const PointCloud& cloud) {
  json j;
  json positions = json::array();
  for (const Vec3& p : cloud.positions) positions.push_back({p.x, p.y, p.z});
  j["positions"] = std::move(positions);
  if (cloud.has_colors()) {
    json colors = json::array();
    for (const Vec3& c : cloud.colors) colors.push_back({c.x, c.y, c.z});
    j["colors"] = std::move(colors);
  } else {
    j["colors"] = nullptr;
  }
  if (cloud.has_normals()) {
    json normals = json::array();
    for (const Vec3& nl : cloud.normals) normals.push_back({nl.x, nl.y, nl.z});
    j["normals"] = std::move(normals);
  } else {
    j["normals"] = nullptr;
  }
  j["gt_instance"] = cloud.has_gt_instance() ? json(cloud.gt_instance) : json(nullptr);
  j["gt_semantic"] = cloud.has_gt_semantic() ? json(cloud.gt_semantic) : json(nullptr);
  out << j.dump() << '\n';
}

}  // namespace

CloudFormat detect_cloud_format(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::string first;
  std::getline(in, first);
  if (!first.empty() && first.back() == '\r') first.pop_back();
  if (first == "ply") {
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("format ", 0) == 0) {
        return line.find("ascii") != std::string::npos ? CloudFormat::PlyAscii
                                                       : CloudFormat::PlyBinaryLE;
      }
      if (line.rfind("end_header", 0) == 0) break;
    }
    throw InputError("ply file '" + path.string() + "' lacks a format line");
  }
  if (!first.empty() && (first[0] == '{' || first[0] == '[')) return CloudFormat::InternalJson;
  const auto ext = path.extension().string();
  if (ext == ".json") return CloudFormat::InternalJson;
  throw InputError("cannot determine cloud format of '" + path.string() + "'");
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  PointCloud cloud;
  try {
    if (format == CloudFormat::InternalJson) {
      cloud = read_json_cloud(in);
    } else {
      cloud = read_ply(in, format);
    }
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  try {
    cloud.validate();
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
  return cloud;
}

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud, CloudFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  switch (format) {
    case CloudFormat::PlyAscii:
      write_ply(out, cloud, true);
      break;
    case CloudFormat::PlyBinaryLE:
      write_ply(out, cloud, false);
      break;
    case CloudFormat::InternalJson:
      write_json_cloud(out, cloud);
      break;
  }
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

}  // namespace owg
