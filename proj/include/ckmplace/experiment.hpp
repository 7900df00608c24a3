#ifndef CKMPLACE_EXPERIMENT_HPP
#define CKMPLACE_EXPERIMENT_HPP

#include "ckmplace/ckm.hpp"
#include "ckmplace/dfo.hpp"
#include "ckmplace/network.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ckmplace {

enum class RunMode { optimize, exhaustive, baseline, sweep };
enum class InitialPlacement { hover, center, given };

/// Schemes that can appear in result rows.
enum class Scheme { dfo, exhaustive, hover, los };

const char* to_string(Scheme scheme);
Scheme parse_scheme(const std::string& name);

struct GbsConfig {
  Eigen::Vector2d location = Eigen::Vector2d::Zero();
  std::filesystem::path ckm;       ///< CSV map, or
  std::filesystem::path synthetic; ///< building scene to generate the map from
};

struct PowerSweep {
  double start_dbm = 0.0;
  double step_dbm = 5.0;
  double stop_dbm = 30.0;

  /// Levels start, start + step, ... up to stop (inclusive, 1e-9 slack).
  std::vector<double> levels() const;
  static PowerSweep parse(const std::string& range);
};

/// One experiment, loaded from a YAML file with sections `scene`, `uav`,
/// `optimizer`, and `run`. Relative paths resolve against the file's
/// directory.
struct ExperimentConfig {
  std::filesystem::path base_dir = ".";

  // scene
  Rect area;
  double altitude = 50.0;
  double gbs_height = 2.0;
  std::vector<GbsConfig> gbs;
  double ckm_spacing = 5.0;
  Lookup lookup = Lookup::nearest;
  Eigen::VectorXd noise_w;
  double los_beta0_db = -30.0;

  // uav
  Eigen::VectorXd powers_dbm;
  Eigen::VectorXd powers_w;
  Eigen::VectorXd weights;

  // optimizer
  TrustRegionState state;
  std::uint64_t seed = 1;
  InitialPlacement initial = InitialPlacement::hover;
  std::vector<Eigen::Vector2d> initial_points;
  int restarts = 1;
  int trs_multistarts = 32;

  // run
  RunMode mode = RunMode::optimize;
  double grid_step = 5.0;
  Scheme scheme = Scheme::hover;
  PowerSweep sweep;
  std::vector<Scheme> sweep_schemes{Scheme::dfo, Scheme::hover, Scheme::los};
  std::filesystem::path output_dir = "out";
  std::uint64_t search_budget = 100'000'000;
  double los_cross_check_step = 0.0;
  bool record_wall_time = false;

  std::size_t uav_count() const { return gbs.size(); }
  void set_power_dbm(double dbm);
};

/// Parses and validates a config file. CKMPLACE_SEED, when set, overrides
/// optimizer.seed.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::filesystem::path& base_dir = ".");

/// Loads or generates every map and assembles the scene.
NetworkScene build_scene(const ExperimentConfig& config);

/// Starting placement selected by `optimizer.initial`.
Placement initial_placement(const ExperimentConfig& config, const NetworkScene& scene);

/// One result row.
struct SchemeResult {
  Scheme scheme = Scheme::dfo;
  double power_dbm = 0.0;
  bool uniform_power = true;
  double sum_rate = 0.0;
  Eigen::VectorXd rates;
  Placement placement;
  std::uint64_t evaluations = 0;
  double wall_ms = 0.0;
};

struct ExperimentOutput {
  std::vector<SchemeResult> results;
  std::vector<IterationRecord> convergence; ///< optimize mode, best restart
  std::vector<std::filesystem::path> files;
};

/// Runs `config.mode` and writes its CSV files into config.output_dir.
ExperimentOutput run_experiment(const ExperimentConfig& config);

// CSV writers; exposed for tests.
std::string convergence_csv(const std::vector<IterationRecord>& log, std::size_t uav_count);
std::string result_csv(const std::vector<SchemeResult>& rows, std::size_t uav_count,
                       bool with_wall_time);
std::string placement_csv(const SchemeResult& row);

} // namespace ckmplace

#endif // CKMPLACE_EXPERIMENT_HPP
