#ifndef CKMPLACE_SCENE_IO_HPP
#define CKMPLACE_SCENE_IO_HPP

#include "ckmplace/ckm.hpp"

#include <Eigen/Core>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ckmplace {

/// Building scene file: the generator environment plus, optionally, the
/// GBS positions and map altitude used by `generate-ckm`.
///
///   area: {x_min: -100, x_max: 100, y_min: -100, y_max: 100}
///   reference_gain_db: -30
///   blockage_penalty_db: 20
///   penetration_loss_db_per_m: 0.5
///   altitude_m: 50
///   gbs:
///     - {x: 0, y: 0, height: 2}
///   buildings:
///     - {x_min: 10, x_max: 30, y_min: -5, y_max: 5, height: 35}
struct SceneFile {
  BuildingScene scene;
  std::vector<Eigen::Vector3d> gbs;
  std::optional<double> altitude;
  bool allow_below_rooftops = false;
};

SceneFile parse_scene_text(const std::string& text);
SceneFile load_scene_file(const std::filesystem::path& path);
std::string format_scene_text(const SceneFile& file);
void save_scene_file(const std::filesystem::path& path, const SceneFile& file);

} // namespace ckmplace

#endif // CKMPLACE_SCENE_IO_HPP
