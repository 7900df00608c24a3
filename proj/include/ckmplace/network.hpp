#ifndef CKMPLACE_NETWORK_HPP
#define CKMPLACE_NETWORK_HPP

#include "ckmplace/ckm.hpp"
#include "ckmplace/geometry.hpp"

#include <Eigen/Core>

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

namespace ckmplace {

/// Feasibility slack (m) for rounding in the step solver.
inline constexpr double kFeasibilityTol = 1e-9;

/// Where channel gains come from.
enum class ChannelModel {
  ckm, ///< per-GBS channel knowledge maps
  los, ///< free-space line-of-sight formula, beta0 / distance^2
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
double db_to_linear(double db);

/// Line-of-sight gain beta0 / (|q - w|^2 + (gbs_height - altitude)^2),
/// beta0 linear. Throws zero_distance when the denominator vanishes.
double los_gain(const Eigen::Vector2d& q, const Eigen::Vector2d& w, double altitude,
                double gbs_height, double beta0);

/// Multi-UAV uplink scene. UAV k transmits to GBS k; all arrays have one
/// entry per pair.
struct NetworkScene {
  std::vector<Eigen::Vector2d> gbs;                ///< horizontal GBS positions w_k (m)
  double gbs_height = 0.0;                         ///< common GBS height (m)
  std::vector<std::shared_ptr<const GridCkm>> ckms; ///< map of GBS k
  Eigen::VectorXd powers_w;                        ///< UAV transmit powers (W)
  Eigen::VectorXd noise_w;                         ///< receiver noise powers (W)
  Eigen::VectorXd weights;                         ///< rate weights, all > 0
  double altitude = 0.0;                           ///< UAV altitude (m)
  Rect area;                                       ///< feasible horizontal region
  Lookup lookup = Lookup::nearest;
  ChannelModel channel = ChannelModel::ckm;
  double los_beta0_db = -30.0;                     ///< used when channel == los

  std::size_t size() const { return gbs.size(); }

  /// Throws invalid_argument on any broken invariant.
  void validate() const;

  /// Power gain from a UAV at horizontal position `q` to GBS `k`.
  double gain(std::size_t k, const Eigen::Vector2d& q) const;
};

/// Horizontal UAV positions stacked as (x1, y1, ..., xK, yK).
class Placement {
public:
  Placement() = default;
  explicit Placement(Eigen::VectorXd stacked);
  static Placement from_points(const std::vector<Eigen::Vector2d>& points);

  std::size_t uav_count() const { return static_cast<std::size_t>(stacked_.size() / 2); }
  Eigen::Vector2d uav(std::size_t k) const {
    return stacked_.segment<2>(2 * static_cast<Eigen::Index>(k));
  }
  const Eigen::VectorXd& stacked() const { return stacked_; }

  bool operator==(const Placement& other) const {
    return stacked_.size() == other.stacked_.size() && stacked_ == other.stacked_;
  }

private:
  Eigen::VectorXd stacked_;
};

bool is_feasible(const Rect& area, const Eigen::VectorXd& stacked,
                 double tol = kFeasibilityTol);

double sinr(const NetworkScene& scene, const Placement& placement, std::size_t k);
double rate(const NetworkScene& scene, const Placement& placement, std::size_t k);
Eigen::VectorXd rates(const NetworkScene& scene, const Placement& placement);

/// sum_k alpha_k * log2(1 + sinr_k). Rejects infeasible placements and
/// bumps the process-wide evaluation counter.
double weighted_sum_rate(const NetworkScene& scene, const Placement& placement);

/// Number of weighted_sum_rate evaluations in this process.
std::uint64_t evaluation_count();

/// Weighted sum rate as a function of the stacked vector, with its own
/// evaluation counter. Safe to call concurrently.
class SumRateObjective {
public:
  explicit SumRateObjective(const NetworkScene& scene) : scene_(&scene) {}

  double operator()(const Eigen::VectorXd& stacked) const;

  std::uint64_t evaluations() const { return count_.load(std::memory_order_relaxed); }
  const NetworkScene& scene() const { return *scene_; }

private:
  const NetworkScene* scene_;
  mutable std::atomic<std::uint64_t> count_{0};
};

} // namespace ckmplace

#endif // CKMPLACE_NETWORK_HPP
