// Shared builders for synthetic scenes used across the test suites.
#ifndef CKMPLACE_TESTS_FIXTURES_HPP
#define CKMPLACE_TESTS_FIXTURES_HPP

#include "ckmplace/ckm.hpp"
#include "ckmplace/network.hpp"

#include <Eigen/Core>

#include <memory>
#include <random>
#include <vector>

namespace ckmplace::testing {

inline constexpr double kAltitude = 50.0;
inline constexpr double kGbsHeight = 2.0;

inline Rect square(double half) { return {-half, half, -half, half}; }

/// `count` non-overlapping-ish boxes of random size and height inside `area`.
inline BuildingScene random_buildings(std::mt19937_64& rng, const Rect& area, int count,
                                      double max_height = 40.0) {
  BuildingScene scene;
  scene.area = area;
  scene.reference_gain_db = -30.0;
  scene.blockage_penalty_db = 20.0;
  scene.penetration_loss_db_per_m = 0.5;
  std::uniform_real_distribution<double> size(10.0, 40.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> height(10.0, max_height);
  for (int b = 0; b < count; ++b) {
    const double w = size(rng);
    const double h = size(rng);
    const double x0 = area.x_min + unit(rng) * (area.width() - w);
    const double y0 = area.y_min + unit(rng) * (area.height() - h);
    scene.buildings.push_back({{x0, x0 + w, y0, y0 + h}, height(rng)});
  }
  return scene;
}

struct SceneOptions {
  double spacing = 5.0;
  double power_dbm = 30.0;
  double noise_dbm = -100.0;
  bool allow_below_rooftops = false;
};

/// Network whose per-GBS maps are generated from `buildings`.
inline NetworkScene make_scene(const BuildingScene& buildings,
                               const std::vector<Eigen::Vector2d>& gbs,
                               const SceneOptions& opt = {}) {
  NetworkScene scene;
  scene.area = buildings.area;
  scene.altitude = kAltitude;
  scene.gbs_height = kGbsHeight;
  scene.gbs = gbs;
  const auto k = static_cast<Eigen::Index>(gbs.size());
  scene.powers_w = Eigen::VectorXd::Constant(k, dbm_to_watts(opt.power_dbm));
  scene.noise_w = Eigen::VectorXd::Constant(k, dbm_to_watts(opt.noise_dbm));
  scene.weights = Eigen::VectorXd::Ones(k);
  scene.los_beta0_db = buildings.reference_gain_db;
  GeneratorOptions gen;
  gen.allow_below_rooftops = opt.allow_below_rooftops;
  for (const auto& w : gbs) {
    scene.ckms.push_back(std::make_shared<const GridCkm>(generate_synthetic_ckm(
        buildings, Eigen::Vector3d(w.x(), w.y(), kGbsHeight), kAltitude, opt.spacing, gen)));
  }
  scene.validate();
  return scene;
}

inline std::vector<Eigen::Vector2d> random_points(std::mt19937_64& rng, const Rect& area,
                                                  std::size_t count) {
  std::uniform_real_distribution<double> ux(area.x_min, area.x_max);
  std::uniform_real_distribution<double> uy(area.y_min, area.y_max);
  std::vector<Eigen::Vector2d> out;
  for (std::size_t i = 0; i < count; ++i) {
    out.emplace_back(ux(rng), uy(rng));
  }
  return out;
}

} // namespace ckmplace::testing

#endif // CKMPLACE_TESTS_FIXTURES_HPP
