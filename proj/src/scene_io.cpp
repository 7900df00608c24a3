#include "ckmplace/scene_io.hpp"
#include "ckmplace/error.hpp"

#include "number_format.hpp"
#include "yaml_util.hpp"

#include <fstream>
#include <sstream>

namespace ckmplace {

using detail::allow_keys;
using detail::number;
using detail::require;

namespace {

Rect parse_rect(const YAML::Node& node, const std::string& context) {
  allow_keys(node, {"x_min", "x_max", "y_min", "y_max"}, context);
  Rect r{number(require(node, "x_min", context), "x_min"),
         number(require(node, "x_max", context), "x_max"),
         number(require(node, "y_min", context), "y_min"),
         number(require(node, "y_max", context), "y_max")};
  if (!r.valid()) {
    detail::fail(node, context + " has min > max");
  }
  return r;
}

} // namespace

SceneFile parse_scene_text(const std::string& text) {
  const YAML::Node root = detail::load_yaml(text);
  allow_keys(root,
             {"area", "reference_gain_db", "blockage_penalty_db", "penetration_loss_db_per_m",
              "altitude_m", "allow_below_rooftops", "gbs", "buildings"},
             "scene file");
  SceneFile out;
  out.scene.area = parse_rect(require(root, "area", "scene file"), "area");
  out.scene.reference_gain_db = detail::number_or(root, "reference_gain_db", -30.0);
  out.scene.blockage_penalty_db = detail::number_or(root, "blockage_penalty_db", 20.0);
  out.scene.penetration_loss_db_per_m = detail::number_or(root, "penetration_loss_db_per_m", 0.0);
  if (root["altitude_m"]) {
    out.altitude = number(root["altitude_m"], "altitude_m");
  }
  if (root["allow_below_rooftops"]) {
    out.allow_below_rooftops = detail::boolean(root["allow_below_rooftops"], "allow_below_rooftops");
  }
  if (const YAML::Node list = root["gbs"]) {
    if (!list.IsSequence()) {
      detail::fail(list, "gbs must be a list");
    }
    for (const auto& g : list) {
      allow_keys(g, {"x", "y", "height"}, "gbs entry");
      out.gbs.emplace_back(number(require(g, "x", "gbs entry"), "x"),
                           number(require(g, "y", "gbs entry"), "y"),
                           detail::number_or(g, "height", 0.0));
    }
  }
  if (const YAML::Node list = root["buildings"]) {
    if (!list.IsSequence()) {
      detail::fail(list, "buildings must be a list");
    }
    for (const auto& b : list) {
      allow_keys(b, {"x_min", "x_max", "y_min", "y_max", "height"}, "building");
      Prism p;
      p.footprint = Rect{number(require(b, "x_min", "building"), "x_min"),
                         number(require(b, "x_max", "building"), "x_max"),
                         number(require(b, "y_min", "building"), "y_min"),
                         number(require(b, "y_max", "building"), "y_max")};
      p.height = number(require(b, "height", "building"), "height");
      out.scene.buildings.push_back(p);
    }
  }
  try {
    out.scene.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::config, std::string("scene file: ") + e.what());
  }
  return out;
}

SceneFile load_scene_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::io, "cannot open scene file " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene_text(buf.str());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_scene_text(const SceneFile& file) {
  using detail::shortest;
  const auto& s = file.scene;
  std::ostringstream out;
  auto rect = [](const Rect& r) {
    return "x_min: " + shortest(r.x_min) + ", x_max: " + shortest(r.x_max) +
           ", y_min: " + shortest(r.y_min) + ", y_max: " + shortest(r.y_max);
  };
  out << "area: {" << rect(s.area) << "}\n";
  out << "reference_gain_db: " << shortest(s.reference_gain_db) << '\n';
  out << "blockage_penalty_db: " << shortest(s.blockage_penalty_db) << '\n';
  out << "penetration_loss_db_per_m: " << shortest(s.penetration_loss_db_per_m) << '\n';
  if (file.altitude) {
    out << "altitude_m: " << shortest(*file.altitude) << '\n';
  }
  if (file.allow_below_rooftops) {
    out << "allow_below_rooftops: true\n";
  }
  if (!file.gbs.empty()) {
    out << "gbs:\n";
    for (const auto& g : file.gbs) {
      out << "  - {x: " << shortest(g.x()) << ", y: " << shortest(g.y())
          << ", height: " << shortest(g.z()) << "}\n";
    }
  }
  out << "buildings:" << (s.buildings.empty() ? " []\n" : "\n");
  for (const auto& b : s.buildings) {
    out << "  - {" << rect(b.footprint) << ", height: " << shortest(b.height) << "}\n";
  }
  return out.str();
}

void save_scene_file(const std::filesystem::path& path, const SceneFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::io, "cannot write scene file " + path.string());
  }
  out << format_scene_text(file);
}

} // namespace ckmplace
