#ifndef CKMPLACE_BASELINES_HPP
#define CKMPLACE_BASELINES_HPP

#include "ckmplace/dfo.hpp"
#include "ckmplace/geometry.hpp"
#include "ckmplace/network.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ckmplace {

/// Per-UAV candidate lattice: area.x_min + i * step (i < M) by
/// area.y_min + j * step (j < N), ordered x-major then y.
struct SearchGrid {
  double step = 0.0;
  Eigen::Index m = 0; ///< points along x
  Eigen::Index n = 0; ///< points along y
  std::vector<Eigen::Vector2d> candidates;

  static SearchGrid over(const Rect& area, double step);
  std::size_t size() const { return candidates.size(); }
};

inline constexpr std::uint64_t kDefaultSearchBudget = 100'000'000;

struct SearchResult {
  Placement placement;
  double value = 0.0;
  std::uint64_t evaluations = 0;
};

/// Evaluates `f` at every combination of lattice points for `uav_count`
/// UAVs, sharded across threads over the first UAV's candidates. Ties go to
/// the lexicographically smallest stacked vector. `f` must be thread-safe.
SearchResult exhaustive_search(const Objective& f, std::size_t uav_count, const SearchGrid& grid,
                               std::uint64_t budget = kDefaultSearchBudget,
                               unsigned threads = 0);
SearchResult exhaustive_search(const NetworkScene& scene, const SearchGrid& grid,
                               std::uint64_t budget = kDefaultSearchBudget, unsigned threads = 0);

/// Number of combinations (M N)^K, saturating at UINT64_MAX.
std::uint64_t search_space_size(const SearchGrid& grid, std::size_t uav_count);

/// Every UAV directly above its GBS.
Placement hovering_placement(const NetworkScene& scene);

/// hovering_placement clamped into the area; the default optimiser start.
Placement projected_hovering_placement(const NetworkScene& scene);

struct LosDesignOptions {
  TrustRegionState state;
  std::uint64_t seed = 0;
  std::optional<Placement> start; ///< defaults to projected hovering
  int trs_multistarts = 32;
  /// Lattice step for the exhaustive LoS cross-check (K <= 2); 0 disables.
  double cross_check_step = 0.0;
  std::uint64_t cross_check_budget = kDefaultSearchBudget;
};

struct LosDesignResult {
  Placement placement;
  double los_value = 0.0; ///< objective under the LoS channel
  double ckm_value = 0.0; ///< same placement under the scene's maps
  std::uint64_t evaluations = 0;
  bool cross_checked = false;
  double cross_check_los_value = 0.0; ///< best lattice value under LoS
  bool lattice_won = false;           ///< the lattice point replaced the DFO result
};

/// Optimises the placement as if every link were line-of-sight, then
/// scores that placement against the real maps.
LosDesignResult los_design(const NetworkScene& scene, const LosDesignOptions& options);

/// Copy of `scene` that uses the LoS formula for every gain.
NetworkScene with_los_channel(const NetworkScene& scene, double beta0_db);

} // namespace ckmplace

#endif // CKMPLACE_BASELINES_HPP
